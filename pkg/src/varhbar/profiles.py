"""Classical acton field profiles.

The zero-momentum solution is stored through its determined coefficient
combinations only::

    hbar^2(r, t) = A0 * (1 + c t / L_t) * (1 + ell / r)

with ``A0`` the squared amplitude at ``t = 0`` far from the origin, ``L_t``
the temporal scale (in light-travel metres), ``ell`` the radial scale and
``E0`` the asymptotic vacuum energy density.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import C, G, M_SUN
from .errors import DomainError, GridTooSmall


@dataclass(frozen=True)
class HbarProfile:
    """Zero-momentum hbar(r, t) field in determined-parameter form.

    Attributes
    ----------
    A0 : float
        Squared asymptotic Planck amplitude at t = 0 [J^2 s^2].
    L_t : float
        Temporal scale [m]; ``inf`` for a static field. May be negative
        (hbar falling in time); the domain is then ``c t < |L_t|``.
    ell : float
        Radial scale [m]. Negative values are accepted but flagged.
    E0 : float
        Asymptotic vacuum energy density [J/m^3].
    """

    A0: float
    L_t: float = math.inf
    ell: float = 0.0
    E0: float = 0.0

    def __post_init__(self):
        if not self.A0 > 0:
            raise ValueError(f"A0 must be positive, got {self.A0}")
        if self.E0 < 0:
            raise ValueError(f"E0 must be non-negative, got {self.E0}")
        if self.L_t == 0:
            raise ValueError("L_t must be non-zero (use inf for a static field)")
        if self.ell < 0:
            warnings.warn(f"negative radial scale ell={self.ell:g} m", stacklevel=2)

    @classmethod
    def constant(cls, hbar: float, E0: float = 0.0) -> HbarProfile:
        return cls(A0=hbar**2, L_t=math.inf, ell=0.0, E0=E0)

    @property
    def flags(self) -> list[str]:
        return ["negative_ell"] if self.ell < 0 else []


@dataclass(frozen=True)
class StandingWaveProfile:
    """Localized spherical standing-wave solution for psi^2."""

    p: float
    d1: float = 0.0
    d3: float = 0.0
    d2d4_sq: float = 1.0


def _time_factor(profile, t):
    ct = C * np.asarray(t, dtype=float)
    f = 1.0 + ct / profile.L_t
    if np.any(f <= 0):
        raise DomainError(f"time outside positivity domain (1 + ct/L_t = {np.min(f):g})")
    return f


def _space_factor(profile, r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("r must be positive")
    f = 1.0 + profile.ell / r
    if np.any(f <= 0):
        raise DomainError(f"r inside the excluded core r <= -ell = {-profile.ell:g} m")
    return f


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def hbar_at(profile: HbarProfile, r, t):
    """hbar(r, t) in J s; ``r`` may be ``inf``."""
    return _out(np.sqrt(profile.A0 * _time_factor(profile, t) * _space_factor(profile, r)))


def hbar_separated(profile: HbarProfile, r, t):
    """Product of the separated unsquared factors sqrt(A0) sqrt(T(t)) sqrt(S(r)).

    Squaring reproduces :func:`hbar_at` squared; kept as an independent
    evaluation path for that identity.
    """
    return _out(
        math.sqrt(profile.A0)
        * np.sqrt(_time_factor(profile, t))
        * np.sqrt(_space_factor(profile, r))
    )


def log_gradient(profile: HbarProfile, r):
    """Radial logarithmic derivative d ln(hbar)/dr [1/m]."""
    _space_factor(profile, r)
    r = np.asarray(r, dtype=float)
    return _out(-0.5 * profile.ell / (r * (r + profile.ell)))


def temporal_rate(profile: HbarProfile, t):
    """Temporal logarithmic derivative d ln(hbar)/dt [1/s]."""
    _time_factor(profile, t)
    return _out(0.5 * C / (profile.L_t + C * np.asarray(t, dtype=float)))


def hamiltonian_density(profile: HbarProfile, r, t):
    """Classical energy density of the zero-momentum field [J/m^3]."""
    s = _space_factor(profile, r)
    _time_factor(profile, t)
    r = np.asarray(r, dtype=float)
    if profile.ell == 0:
        grad = np.zeros_like(r)
    else:
        grad = profile.ell**2 * (profile.L_t + C * np.asarray(t, dtype=float)) ** 2 / r**4
    return _out(profile.E0 * (s**2 + grad))


def standing_wave_psi2(sw: StandingWaveProfile, r, x0):
    """Squared standing-wave field at radius ``r`` and light-time ``x0``."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("standing wave diverges at r = 0")
    k = math.sqrt(2.0) * sw.p
    x0 = np.asarray(x0, dtype=float)
    return _out(sw.d2d4_sq * np.cos(k * r + sw.d1) / (k * r) * np.cos(k * (sw.d3 + x0)))


def volume_average_hbar2(profile: HbarProfile, R, t):
    """Mean of hbar^2 over a ball of radius ``R`` centred on the origin."""
    R = np.asarray(R, dtype=float)
    if np.any(R <= 0):
        raise DomainError("averaging radius must be positive")
    return _out(profile.A0 * _time_factor(profile, t) * (1.0 + 1.5 * profile.ell / R))


def schwarzschild_radius(mass: float) -> float:
    return 2.0 * G * mass / C**2


R_S_SUN = schwarzschild_radius(M_SUN)


def lpi_beta_h(ell: float, R_S: float) -> float:
    """Position-invariance violation coefficient matching the profile to first order."""
    if R_S == 0:
        raise ZeroDivisionError("Schwarzschild radius is zero")
    return -ell / R_S


def eom_residual(values, r, x0, form: str = "chi") -> float:
    """Max-norm finite-difference residual of the massless field equation.

    Parameters
    ----------
    values : array, shape (len(r), len(x0))
        Sampled field. For ``form="chi"`` this is the squared field and the
        residual is ``d2/dx0^2 chi - laplacian(chi)``. For ``form="psi"`` it
        is the unsquared field and the residual is
        ``psi (psi'' - lap psi) + (psi'^2 - |grad psi|^2)``, i.e. half the
        wave operator applied to psi^2.
    r, x0 : 1-D arrays
        Uniform radial (r > 0) and light-time grids.
    """
    values = np.asarray(values, dtype=float)
    r = np.asarray(r, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if len(r) < 5 or len(x0) < 5:
        raise GridTooSmall("need at least 5 points per axis")
    if values.shape != (len(r), len(x0)):
        raise ValueError(f"values shape {values.shape} does not match grid")
    hr = r[1] - r[0]
    ht = x0[1] - x0[0]
    if not (np.allclose(np.diff(r), hr, rtol=1e-9) and np.allclose(np.diff(x0), ht, rtol=1e-9)):
        raise ValueError("grid must be uniform")
    if r[0] <= 0:
        raise DomainError("radial grid must start at r > 0")

    f = values
    c = f[1:-1, 1:-1]
    f_tt = (f[1:-1, 2:] - 2 * c + f[1:-1, :-2]) / ht**2
    f_rr = (f[2:, 1:-1] - 2 * c + f[:-2, 1:-1]) / hr**2
    f_r = (f[2:, 1:-1] - f[:-2, 1:-1]) / (2 * hr)
    lap = f_rr + 2.0 * f_r / r[1:-1, None]
    if form == "chi":
        res = f_tt - lap
    elif form == "psi":
        f_t = (f[1:-1, 2:] - f[1:-1, :-2]) / (2 * ht)
        res = c * (f_tt - lap) + (f_t**2 - f_r**2)
    else:
        raise ValueError(f"unknown form {form!r}")
    return float(np.max(np.abs(res)))
