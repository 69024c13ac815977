"""Friedmann expansion with a quadratic hbar variation term.

With ``hbar = hbar_o + b (a x)^2`` and ``k c^2 = -2 W hbar_o / (m x^2)``::

    (adot/a)^2 = (8 pi G / 3) rho - k c^2 / a^2 - (k c^2 / hbar_o) b x^2

and the last term is independent of ``a``; it plays the role of Lambda / 3.
Averaging ``x^2`` over the closed geometry gives the geometric factor
``(pi^2 - 4) / 2`` used to relate ``b`` and ``Lambda``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .constants import C, G, HBAR
from .errors import FlatCurvature, NegativeRHS, NonPositiveScaleFactor, StepUnderflow

GEOM = (math.pi**2 - 4.0) / 2.0


@dataclass(frozen=True)
class CosmoParams:
    """Background parameters; ``rho`` is the matter density at a = 1 (scales as a^-3)."""

    hbar_o: float = HBAR
    rho: float = 0.0
    k_curv: float = 0.0  # 1/m^2
    b: float = 0.0  # J s / m^2
    x: float = 0.0  # comoving coordinate of the test particle [m]
    W_freq: float | None = None
    m_test: float | None = None

    def __post_init__(self):
        if not self.hbar_o > 0:
            raise ValueError("hbar_o must be positive")

    @property
    def lambda_term(self) -> float:
        """The a-independent extra term, Lambda/3 [1/s^2]."""
        return -(self.k_curv * C**2 / self.hbar_o) * self.b * self.x**2


def curvature_from_frequency(W_freq, hbar_o, m_test, x):
    """k [1/m^2] from k c^2 = -2 W hbar_o / (m x^2)."""
    return -2.0 * W_freq * hbar_o / (m_test * x**2 * C**2)


def lambda_from_b(b: float, hbar_o: float = HBAR) -> float:
    """Lambda [1/s^2] from the quadratic coefficient ``b`` using the averaged x^2."""
    if not hbar_o > 0:
        raise ValueError("hbar_o must be positive")
    return -3.0 * GEOM * b * C**2 / hbar_o


def b_from_lambda(lam: float, hbar_o: float = HBAR) -> float:
    return -lam * hbar_o / (3.0 * GEOM * C**2)


def hbar_cosmo_profile(lambda_s2, hbar_o, r):
    """hbar at distance ``r`` before averaging; may go negative beyond :func:`zero_radius`."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be non-negative")
    out = hbar_o * (1.0 - lambda_s2 * r**2 / (3.0 * GEOM * C**2))
    return float(out) if out.ndim == 0 else out


def zero_radius(lambda_s2: float) -> float:
    """Distance at which the unaveraged profile reaches zero."""
    return math.sqrt(3.0 * GEOM * C**2 / lambda_s2)


def hbar_average_t(lambda_s2, hbar_o, a, k_curv):
    """Spatially averaged hbar at scale factor ``a`` (requires closed curvature)."""
    if k_curv == 0:
        raise FlatCurvature("k = 0: the average diverges unless b = 0 (no Lambda)")
    if k_curv < 0:
        raise ValueError("average requires k > 0")
    a = np.asarray(a, dtype=float)
    out = hbar_o * (1.0 - lambda_s2 / 3.0 * a**2 / (k_curv * C**2))
    return float(out) if out.ndim == 0 else out


def friedmann_rhs(a, params: CosmoParams) -> float:
    """(adot/a)^2 [1/s^2] at scale factor ``a``."""
    if not a > 0:
        raise NonPositiveScaleFactor(f"a = {a}")
    p = params
    matter = 8.0 * math.pi * G / 3.0 * p.rho / a**3
    curvature = p.k_curv * C**2 / a**2
    # hbar variation term: (k c^2 / hbar_o) * b (a x)^2 / a^2, independent of a
    f_hbar = p.b * (a * p.x) ** 2
    return matter - curvature - (p.k_curv * C**2 / p.hbar_o) * f_hbar / a**2


def lambda_unit_convert(lambda_energy: float) -> float:
    """Vacuum energy density [J/m^3] to Lambda [1/s^2]: 8 pi G u / c^2."""
    if lambda_energy < 0:
        raise ValueError("energy density must be non-negative")
    return 8.0 * math.pi * G * lambda_energy / C**2


def lambda_unit_invert(lambda_s2: float) -> float:
    return lambda_s2 * C**2 / (8.0 * math.pi * G)


@dataclass
class ScaleFactorRun:
    t: np.ndarray
    a: np.ndarray
    adot: np.ndarray
    rhs: np.ndarray
    constraint_residual: float


def integrate_scale_factor(params: CosmoParams, a0: float, t_span, n_samples: int = 401,
                           rtol: float = 1e-12, atol: float = 1e-14) -> ScaleFactorRun:
    """Evolve the expanding branch from ``a(t_span[0]) = a0``.

    Integrates the second-order form ``addot = F'(a) / 2`` with
    ``F(a) = a^2 (adot/a)^2`` so that the first-order Friedmann equation
    serves as an independent constraint audit. Reaching ``adot = 0``
    (turnaround) raises :class:`NegativeRHS`.
    """
    p = params
    K_m = 8.0 * math.pi * G / 3.0 * p.rho
    kc2 = p.k_curv * C**2
    lam3 = p.lambda_term

    def F(a):
        return K_m / a - kc2 + lam3 * a**2

    def dF(a):
        return -K_m / a**2 + 2.0 * lam3 * a

    rhs0 = friedmann_rhs(a0, p)
    if rhs0 < 0:
        raise NegativeRHS(f"(adot/a)^2 = {rhs0:g} < 0 at a0 = {a0}")
    y0 = [a0, a0 * math.sqrt(rhs0)]

    def turnaround(t, y):
        return y[1]
    turnaround.terminal = True
    turnaround.direction = -1

    t_eval = np.linspace(t_span[0], t_span[1], n_samples)
    sol = solve_ivp(lambda t, y: [y[1], 0.5 * dF(y[0])], t_span, y0, method="DOP853",
                    t_eval=t_eval, rtol=rtol, atol=atol * a0, events=turnaround)
    if sol.status == -1:
        raise StepUnderflow(sol.message)
    if sol.status == 1:
        raise NegativeRHS(f"expansion turns around at t = {sol.t_events[0][0]:g} s (recollapse boundary)")
    a, adot = sol.y
    rhs = np.array([friedmann_rhs(ai, p) for ai in a])
    Fa = F(a)
    resid = float(np.max(np.abs(adot**2 - Fa) / np.maximum(np.abs(Fa), 1e-300)))
    return ScaleFactorRun(t=sol.t, a=a, adot=adot, rhs=rhs, constraint_residual=resid)
