"""A massless field phi carried by a varying hbar^2 ~ chi background.

Equation of motion (dots are d/dx0 with x0 = c t)::

    chi_dot phi_dot + chi phi_ddot - grad(chi) . grad(phi) - chi lap(phi) = 0

Far from the origin grad(chi) -> 0 and, freezing chi_dot/chi at x0 = 0,
separation gives a damped oscillator in time with damping rate
``omega_h = c / L_t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import profiles
from .constants import C
from .errors import CFLViolation, DomainError, GridTooSmall, StepUnderflow

MIN_NODES = 16


@dataclass(frozen=True)
class SupportedFieldParams:
    """Damping rate, oscillation frequency and the separated-solution coefficients.

    ``C`` multiplies the fast (``-(s + omega_h)/2``) exponent and ``D`` the
    slow one, with ``s = sqrt(omega_h^2 - 4 omega_p^2)`` (complex in the
    oscillatory regime). ``A`` and ``B`` weight the spatial factors.
    """

    omega_h: float
    omega_p: float
    A: complex = 1.0
    B: complex = 0.0
    C: complex = 0.5
    D: complex = 0.5

    def __post_init__(self):
        if self.omega_h < 0:
            raise ValueError("omega_h must be non-negative")

    @property
    def discriminant(self) -> complex:
        return np.sqrt(complex(self.omega_h**2 - 4.0 * self.omega_p**2))

    @classmethod
    def from_initial(cls, omega_h, omega_p, T0=1.0, dT0=0.0):
        """Coefficients matching T(0) = T0, T'(0) = dT0 (not defined at critical damping)."""
        s = np.sqrt(complex(omega_h**2 - 4.0 * omega_p**2))
        if s == 0:
            raise ValueError("critical damping: the exponential pair is degenerate")
        lam1 = -(s + omega_h) / 2
        lam2 = (s - omega_h) / 2
        return cls(omega_h, omega_p, C=(lam2 * T0 - dT0) / s, D=(dT0 - lam1 * T0) / s)


def omega_h_from_profile(profile: profiles.HbarProfile) -> float:
    """Damping rate c / L_t [1/s]; zero for a static field."""
    return C / profile.L_t


def far_field_time_solution(p: SupportedFieldParams, t):
    """Time factor C exp(-t (s + w_h)/2) + D exp(t (s - w_h)/2); complex-valued."""
    t = np.asarray(t, dtype=float)
    s = p.discriminant
    return p.C * np.exp(-0.5 * t * (s + p.omega_h)) + p.D * np.exp(0.5 * t * (s - p.omega_h))


def time_factor_from_initial(omega_h, omega_p, T0, dT0, t):
    """Real time factor for given initial value/slope; finite through critical damping.

    ``exp(-w_h t/2) [T0 cosh(s t/2) + (dT0 + w_h T0/2) t sinhc(s t/2)]``.
    Broadcasts over array arguments.
    """
    omega_h = np.asarray(omega_h, dtype=float)
    omega_p = np.asarray(omega_p, dtype=float)
    t = np.asarray(t, dtype=float)
    s = np.sqrt((omega_h**2 - 4.0 * omega_p**2).astype(complex))
    z = 0.5 * s * t
    small = np.abs(z) < 1e-6
    zs = np.where(small, 1.0, z)
    sinhc = np.where(small, 1.0 + z**2 / 6.0, np.sinh(zs) / zs)
    out = np.exp(-0.5 * omega_h * t) * (T0 * np.cosh(z) + (dT0 + 0.5 * omega_h * T0) * t * sinhc)
    return out.real


def solve_time_ode(omega_h, omega_p, T_span, T0=1.0, dT0=0.0, n_samples=201, rtol=1e-12, atol=1e-14):
    """Integrate T'' + omega_h T' + omega_p^2 T = 0 for one or many (omega_h, omega_p) pairs.

    Returns ``(t, T)`` with ``T`` of shape ``(n_pairs, n_samples)`` (or
    ``(n_samples,)`` for scalar inputs).
    """
    scalar = np.ndim(omega_h) == 0 and np.ndim(omega_p) == 0
    wh = np.atleast_1d(np.asarray(omega_h, dtype=float))
    wp = np.atleast_1d(np.asarray(omega_p, dtype=float))
    wh, wp = np.broadcast_arrays(wh, wp)
    n = wh.size
    if not T_span > 0:
        raise ValueError("T_span must be positive")
    T0 = np.broadcast_to(np.asarray(T0, dtype=float), (n,))
    dT0 = np.broadcast_to(np.asarray(dT0, dtype=float), (n,))

    def rhs(t, y):
        T, dT = y[:n], y[n:]
        return np.concatenate([dT, -wh * dT - wp**2 * T])

    t = np.linspace(0.0, T_span, n_samples)
    sol = solve_ivp(rhs, (0.0, T_span), np.concatenate([T0, dT0]), method="DOP853",
                    t_eval=t, rtol=rtol, atol=atol)
    if sol.status != 0:
        raise StepUnderflow(sol.message)
    T = sol.y[:n]
    return (t, T[0]) if scalar else (t, T)


# ------------------------------------------------------------------ radial PDE


@dataclass(frozen=True)
class RadialGrid:
    """Uniform radial nodes [m] and light-time nodes x0 [m]."""

    r: np.ndarray
    x0: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        x0 = np.asarray(self.x0, dtype=float)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "x0", x0)
        if len(r) < MIN_NODES or len(x0) < MIN_NODES:
            raise GridTooSmall(f"need at least {MIN_NODES} nodes per axis")
        for name, a in (("r", r), ("x0", x0)):
            d = np.diff(a)
            if not (np.all(d > 0) and np.allclose(d, d[0], rtol=1e-9)):
                raise ValueError(f"{name} nodes must be uniform and increasing")
        if r[0] < 0:
            raise DomainError("radial nodes must be non-negative")

    @property
    def dr(self):
        return self.r[1] - self.r[0]

    @property
    def dx0(self):
        return self.x0[1] - self.x0[0]


@dataclass
class RadialSolution:
    r: np.ndarray
    x0: np.ndarray
    phi: np.ndarray  # shape (len(x0), len(r))
    dphi: np.ndarray  # d phi / d x0, same shape


def standing_mode(r, omega_p):
    """Regular spherical mode sin(p r)/(p r), p = omega_p / c."""
    p = omega_p / C
    return np.sinc(p * np.asarray(r, dtype=float) / math.pi)


def solve_supported_field_radial(
    profile: profiles.HbarProfile,
    grid: RadialGrid,
    omega_p: float | None = None,
    phi0=None,
    dphi0=None,
    inner: str = "regular",
    outer: str = "absorbing",
    t0: float = 0.0,
    cfl_max: float = 1.0,
) -> RadialSolution:
    """Method-of-lines solution for phi(r, x0) in a spherically symmetric chi background.

    Second-order central differences in r, classical RK4 in x0 with step
    ``grid.dx0``. ``chi`` is taken from ``profile`` at ``t = t0 + x0/c``
    with its full time dependence.

    Boundary options: ``inner`` is ``"regular"`` (zero slope; the true
    regularity condition when ``r[0] == 0``); ``outer`` is ``"absorbing"``
    (outgoing spherical-wave condition), ``"reflecting"`` (zero slope) or
    ``"fixed"`` (phi held at its initial value).

    Initial data default to the standing mode of ``omega_p`` at rest.
    """
    r = grid.r
    h = grid.dr
    k = grid.dx0
    if k / h > cfl_max:
        raise CFLViolation(f"dx0/dr = {k / h:.3g} exceeds {cfl_max}")
    if inner not in ("regular",) or outer not in ("absorbing", "reflecting", "fixed"):
        raise ValueError("unknown boundary condition")
    origin = r[0] == 0
    if origin and profile.ell != 0:
        raise DomainError("grid reaches r = 0 where the background diverges")
    # validates the radial domain
    if origin:
        glog = np.zeros_like(r)
        glog[1:] = 2.0 * np.asarray(profiles.log_gradient(profile, r[1:]))
    else:
        glog = 2.0 * np.asarray(profiles.log_gradient(profile, r))
    profiles.hbar_at(profile, np.maximum(r, h), t0 + grid.x0[-1] / C)

    def tlog(x0):
        if math.isinf(profile.L_t):
            return 0.0
        return 1.0 / (profile.L_t + C * t0 + x0)

    if phi0 is None:
        if omega_p is None:
            raise ValueError("give omega_p or explicit initial data")
        phi0 = standing_mode(r, omega_p)
    phi0 = np.asarray(phi0, dtype=float).copy()
    dphi0 = np.zeros_like(phi0) if dphi0 is None else np.asarray(dphi0, dtype=float).copy()
    phi_fixed_outer = phi0[-1]
    inv_r = np.zeros_like(r)
    inv_r[int(origin):] = 1.0 / r[int(origin):]

    def rhs(x0, phi, pi):
        ext = np.empty(len(phi) + 2)
        ext[1:-1] = phi
        ext[0] = phi[1]
        if outer == "absorbing":
            ext[-1] = phi[-2] - 2.0 * h * (pi[-1] + phi[-1] * inv_r[-1])
        elif outer == "reflecting":
            ext[-1] = phi[-2]
        else:
            ext[-1] = phi[-2]
        d2 = (ext[2:] - 2.0 * phi + ext[:-2]) / h**2
        d1 = (ext[2:] - ext[:-2]) / (2.0 * h)
        lap = d2 + 2.0 * d1 * inv_r
        if origin:
            lap[0] = 3.0 * d2[0]
        acc = lap + glog * d1 - tlog(x0) * pi
        if outer == "fixed":
            acc[-1] = 0.0
        return pi, acc

    n_t = len(grid.x0)
    out_phi = np.empty((n_t, len(r)))
    out_pi = np.empty((n_t, len(r)))
    phi, pi = phi0, dphi0
    if outer == "fixed":
        pi[-1] = 0.0
    out_phi[0], out_pi[0] = phi, pi
    x = grid.x0[0]
    for j in range(1, n_t):
        k1p, k1v = rhs(x, phi, pi)
        k2p, k2v = rhs(x + k / 2, phi + k / 2 * k1p, pi + k / 2 * k1v)
        k3p, k3v = rhs(x + k / 2, phi + k / 2 * k2p, pi + k / 2 * k2v)
        k4p, k4v = rhs(x + k, phi + k * k3p, pi + k * k3v)
        phi = phi + k / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
        pi = pi + k / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        if outer == "fixed":
            phi[-1] = phi_fixed_outer
        x = grid.x0[j]
        out_phi[j], out_pi[j] = phi, pi
    if not np.all(np.isfinite(out_phi)):
        raise CFLViolation("solution became non-finite")
    return RadialSolution(r=r, x0=grid.x0, phi=out_phi, dphi=out_pi)


def field_energy(sol: RadialSolution, profile: profiles.HbarProfile, t0: float = 0.0) -> np.ndarray:
    """Energy integral of chi (phi_dot^2 + phi_r^2) r^2 over the grid at each x0 (up to a constant).

    Conserved for a static background with non-radiating boundaries.
    """
    r = sol.r
    rr = np.where(r == 0, 1.0, r)
    space = np.where(r == 0, 1.0, 1.0 + profile.ell / rr)
    phi_r = np.gradient(sol.phi, r, axis=1, edge_order=2)
    dens = space * (sol.dphi**2 + phi_r**2) * r**2
    tf = np.array([1.0 + (C * t0 + x) / profile.L_t for x in sol.x0])
    return tf * np.trapezoid(dens, r, axis=1)


def source_term_ratio(sol: RadialSolution, j: int = -1, r_min: float = 0.0) -> float:
    """Size of the null combination phi_dot^2 - phi_r^2 relative to phi_dot^2 + phi_r^2.

    Evaluated at time slice ``j`` over nodes with ``r >= r_min``; small
    values mean phi is locally plane-wave-like and sources no chi response.
    """
    mask = sol.r >= r_min
    phi_r = np.gradient(sol.phi[j], sol.r, edge_order=2)[mask]
    phi_t = sol.dphi[j][mask]
    return float(np.max(np.abs(phi_t**2 - phi_r**2)) / np.max(phi_t**2 + phi_r**2))
