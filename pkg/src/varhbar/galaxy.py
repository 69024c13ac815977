"""Rotation-curve inversion: the hbar(r) profile needed for a given v(r).

For circular motion with tangential speed ``v`` in a specific potential
``phi_c`` the radial force balance gives

    d ln(hbar)/dr = (v^2 / r - dphi_c/dr) / (v^2 / 2 - phi_c)

which is integrated outward from ``r_in``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from .constants import G, KPC, M_SUN
from .errors import NegativeVSquared, SingularDenominator


@dataclass(frozen=True)
class RotationProblem:
    v_flat: float
    M_visible: float
    r_in: float
    r_out: float
    n_grid: int = 4001

    def __post_init__(self):
        if not self.r_out > self.r_in > 0:
            raise ValueError("need r_out > r_in > 0")
        if not self.v_flat > 0:
            raise ValueError("v_flat must be positive")
        if self.n_grid < 3:
            raise ValueError("n_grid must be at least 3")

    @classmethod
    def from_astro(cls, v_kms, M_solar, r_in_kpc, r_out_kpc, n_grid=4001):
        return cls(v_kms * 1e3, M_solar * M_SUN, r_in_kpc * KPC, r_out_kpc * KPC, n_grid)


@dataclass
class RotationCurveSolution:
    r: np.ndarray
    ln_hbar_rel: np.ndarray
    min_factor: float
    r_min: float

    @property
    def factor(self):
        return np.exp(self.ln_hbar_rel)


def hbar_log_gradient_required(v, phi_c, dphi_dr, r):
    """d ln(hbar)/dr needed to hold speed ``v`` on a circular orbit at ``r``."""
    v2 = np.asarray(v, dtype=float) ** 2
    den = 0.5 * v2 - phi_c
    if np.any(den == 0):
        raise SingularDenominator("v^2/2 = phi_c")
    out = (v2 / r - dphi_dr) / den
    return float(out) if np.ndim(out) == 0 else out


def point_mass_potential(GM, r):
    """(phi_c, dphi_c/dr) for a point mass."""
    return -GM / r, GM / r**2


def invert_rotation_curve(p: RotationProblem) -> RotationCurveSolution:
    """Integrate the required log-gradient for a flat curve around the visible point mass."""
    GM = G * p.M_visible
    r = np.linspace(p.r_in, p.r_out, p.n_grid)
    phi, dphi = point_mass_potential(GM, r)
    g = hbar_log_gradient_required(np.full_like(r, p.v_flat), phi, dphi, r)
    ln_rel = cumulative_simpson(g, x=r, initial=0.0)
    j = int(np.argmin(ln_rel))
    return RotationCurveSolution(r=r, ln_hbar_rel=ln_rel, min_factor=float(np.exp(ln_rel[j])), r_min=float(r[j]))


def flat_curve_ln_hbar_exact(v, GM, r, r_in):
    """Closed-form ln(hbar(r)/hbar(r_in)) for constant ``v`` around a point mass."""
    def F(x):
        return 3.0 * np.log(0.5 * v**2 * x + GM) - np.log(x)
    return F(np.asarray(r, dtype=float)) - F(r_in)


def circular_velocity(field_log_grad, V_c, dV_dr, r, m=1.0):
    """Circular speed for a given hbar log-gradient and potential energy V_c(r)."""
    den = -m / r + 0.5 * m * field_log_grad
    if np.any(den == 0):
        raise SingularDenominator("-m/r + (m/2) dln(hbar)/dr = 0")
    v2 = (-dV_dr + V_c * field_log_grad) / den
    if np.any(v2 < 0):
        raise NegativeVSquared("no real circular speed")
    out = np.sqrt(v2)
    return float(out) if np.ndim(out) == 0 else out


def potential_from_velocity(r, v_n, phi_outer=0.0):
    """phi_c(r) from a tabulated Newtonian speed curve, with phi_c(r[-1]) = phi_outer.

    Uses d phi_c / dr = v_n^2 / r; ``phi_outer`` must be <= 0.
    """
    if phi_outer > 0:
        raise ValueError("phi_outer must be non-positive")
    r = np.asarray(r, dtype=float)
    integrand = np.asarray(v_n, dtype=float) ** 2 / r
    acc = cumulative_simpson(integrand, x=r, initial=0.0)
    return acc - acc[-1] + phi_outer


def r_at_newtonian_balance(v, GM):
    """Radius where v^2 = GM/r (zero of the required gradient)."""
    return GM / v**2


__all__ = [
    "RotationProblem", "RotationCurveSolution", "hbar_log_gradient_required", "invert_rotation_curve",
    "flat_curve_ln_hbar_exact", "circular_velocity", "potential_from_velocity", "point_mass_potential",
    "r_at_newtonian_balance",
]
