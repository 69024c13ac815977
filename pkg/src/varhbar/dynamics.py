"""Dominant-path mechanics in a position-dependent hbar field.

With ``g = grad ln(hbar)`` and a specific potential ``phi = V_c / m`` the
equation of motion is::

    a = -grad(phi) + (g . v) v - g (|v|^2 / 2 - phi)

(the last bracket is the classical Lagrangian per unit mass). Along any
solution the total frequency ``W = m (|v|^2/2 + phi) / hbar`` is constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import DOP853, RK45
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from . import profiles
from .errors import DomainError, GridTooSmall, NoSolution, StepUnderflow

# ---------------------------------------------------------------- fields


class HbarField:
    """Scalar hbar field evaluable at a position vector."""

    def value(self, x) -> float:
        raise NotImplementedError

    def grad_ln(self, x) -> np.ndarray:
        raise NotImplementedError


class ConstantField(HbarField):
    def __init__(self, hbar: float):
        self.hbar = hbar

    def value(self, x):
        return self.hbar

    def grad_ln(self, x):
        return np.zeros(len(x))


class ExponentialField(HbarField):
    """hbar = hbar0 * exp(k . x) with a constant log-gradient vector ``k``."""

    def __init__(self, hbar0: float, k):
        self.hbar0 = hbar0
        self.k = np.atleast_1d(np.asarray(k, dtype=float))

    def value(self, x):
        return self.hbar0 * math.exp(float(np.dot(self.k, x)))

    def grad_ln(self, x):
        return self.k.copy()


class RadialField(HbarField):
    """Spherically symmetric field about ``center``; subclasses give ``value_r`` and ``dlog_dr``."""

    center = None

    def _rel(self, x):
        x = np.asarray(x, dtype=float)
        return x if self.center is None else x - self.center

    def value(self, x):
        return self.value_r(float(np.linalg.norm(self._rel(x))))

    def grad_ln(self, x):
        d = self._rel(x)
        r = float(np.linalg.norm(d))
        if r == 0:
            raise DomainError("radial field gradient undefined at its centre")
        return self.dlog_dr(r) * d / r

    def value_r(self, r):
        raise NotImplementedError

    def dlog_dr(self, r):
        raise NotImplementedError


class ProfileField(RadialField):
    """An :class:`~varhbar.profiles.HbarProfile` frozen at time ``t``."""

    def __init__(self, profile: profiles.HbarProfile, t: float = 0.0, center=None):
        self.profile = profile
        self.t = t
        self.center = None if center is None else np.asarray(center, dtype=float)

    def value_r(self, r):
        return profiles.hbar_at(self.profile, r, self.t)

    def dlog_dr(self, r):
        return profiles.log_gradient(self.profile, r)


class ExponentialRadialField(RadialField):
    """hbar = hbar0 * exp(-r / L)."""

    def __init__(self, hbar0: float, L: float, center=None):
        self.hbar0 = hbar0
        self.L = L
        self.center = None if center is None else np.asarray(center, dtype=float)

    def value_r(self, r):
        return self.hbar0 * math.exp(-r / self.L)

    def dlog_dr(self, r):
        return -1.0 / self.L


class TabulatedRadialField(RadialField):
    """Radial field from tabulated (r, hbar) pairs; cubic spline in ln(hbar)."""

    def __init__(self, r, hbar, center=None):
        r = np.asarray(r, dtype=float)
        hbar = np.asarray(hbar, dtype=float)
        if np.any(hbar <= 0):
            raise DomainError("tabulated hbar must be positive")
        self.r_min, self.r_max = r[0], r[-1]
        self._spline = CubicSpline(r, np.log(hbar))
        self._dspline = self._spline.derivative()
        self.center = None if center is None else np.asarray(center, dtype=float)

    def _check(self, r):
        if not self.r_min <= r <= self.r_max:
            raise DomainError(f"r = {r:g} outside tabulated range")

    def value_r(self, r):
        self._check(r)
        return float(np.exp(self._spline(r)))

    def dlog_dr(self, r):
        self._check(r)
        return float(self._dspline(r))


# ------------------------------------------------------------ potentials


class Potential:
    """Specific potential phi(x) = V_c(x) / m [J/kg] and its gradient."""

    def __call__(self, x) -> float:
        raise NotImplementedError

    def gradient(self, x) -> np.ndarray:
        raise NotImplementedError


class ZeroPotential(Potential):
    def __call__(self, x):
        return 0.0

    def gradient(self, x):
        return np.zeros(len(x))


class PointMass(Potential):
    """phi = -GM / |x - center|."""

    def __init__(self, GM: float, center=None):
        self.GM = GM
        self.center = None if center is None else np.asarray(center, dtype=float)

    def _rel(self, x):
        x = np.asarray(x, dtype=float)
        return x if self.center is None else x - self.center

    def __call__(self, x):
        return -self.GM / float(np.linalg.norm(self._rel(x)))

    def gradient(self, x):
        d = self._rel(x)
        r = float(np.linalg.norm(d))
        return self.GM * d / r**3


# -------------------------------------------------------------- kinematics


@dataclass
class State:
    x: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.x = np.atleast_1d(np.asarray(self.x, dtype=float))
        self.v = np.atleast_1d(np.asarray(self.v, dtype=float))
        if self.x.shape != self.v.shape:
            raise ValueError("position and velocity dimensions differ")


def acceleration_from(grad_phi, phi, g, v):
    """Force law on raw arrays (shared by single-body and binary integrators)."""
    return -grad_phi + np.dot(g, v) * v - g * (0.5 * np.dot(v, v) - phi)


def acceleration(s: State, field: HbarField, potential: Potential) -> np.ndarray:
    return acceleration_from(potential.gradient(s.x), potential(s.x), field.grad_ln(s.x), s.v)


def frequency_W(s: State, field: HbarField, potential: Potential, mass: float = 1.0) -> float:
    """Total frequency H_c / hbar [1/s]."""
    hbar = field.value(s.x)
    if not hbar > 0:
        raise DomainError(f"hbar = {hbar:g} is not positive")
    return mass * (0.5 * float(np.dot(s.v, s.v)) + potential(s.x)) / hbar


@dataclass
class IntegratorConfig:
    rtol: float = 1e-12
    atol: float = 1e-12
    method: str = "DOP853"
    max_step: float = math.inf
    n_samples: int = 1001
    # speed growth (relative to the initial speed scale) treated as a blow-up
    blowup_factor: float = 1e8


@dataclass
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    W: np.ndarray
    steps: int = 0
    rejected: int = 0
    nfev: int = 0
    mass: float = 1.0
    meta: dict = field(default_factory=dict)

    @property
    def W_drift(self) -> np.ndarray:
        W0 = self.W[0]
        scale = abs(W0) if W0 != 0 else 1.0
        return (self.W - W0) / scale

    @property
    def max_W_drift(self) -> float:
        return float(np.max(np.abs(self.W_drift)))

    def states(self):
        return [State(self.x[i], self.v[i], self.t[i]) for i in range(len(self.t))]


_METHODS = {"DOP853": (DOP853, 12), "RK45": (RK45, 6)}


def integrate(
    s0: State,
    field: HbarField,
    potential: Potential,
    T: float,
    cfg: IntegratorConfig | None = None,
    t_eval=None,
    mass: float = 1.0,
) -> Trajectory:
    """Integrate the dominant-path equation of motion from ``s0`` for a time ``T``.

    Samples at ``t_eval`` if given, otherwise at ``cfg.n_samples`` evenly
    spaced times, using the stepper's dense output. W is evaluated at every
    sample. Raises :class:`DomainError` on a finite-time blow-up and
    :class:`StepUnderflow` when the step size collapses for any other
    reason.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    cfg = cfg or IntegratorConfig()
    n = len(s0.x)
    t_end = s0.t + T
    t_eval = np.linspace(s0.t, t_end, cfg.n_samples) if t_eval is None else np.asarray(t_eval, float)
    rhs = _rhs_factory(n, field, potential)
    return _drive(rhs, s0, t_end, t_eval, cfg, lambda x, v: frequency_W(State(x, v), field, potential, mass), mass)


def _rhs_factory(n, field, potential):
    def rhs(t, y):
        x, v = y[:n], y[n:]
        return np.concatenate([v, acceleration_from(potential.gradient(x), potential(x), field.grad_ln(x), v)])
    return rhs


def _drive(rhs, s0, t_end, t_eval, cfg, W_of, mass):
    n = len(s0.x)
    stepper_cls, stages = _METHODS[cfg.method]
    count = [0]

    def fun(t, y):
        count[0] += 1
        return rhs(t, y)

    y0 = np.concatenate([s0.x, s0.v])
    v_scale = max(float(np.linalg.norm(s0.v)), 1e-300)
    try:
        with np.errstate(over="raise", invalid="raise"):
            solver = stepper_cls(fun, s0.t, y0, t_end, rtol=cfg.rtol, atol=cfg.atol, max_step=cfg.max_step)
            ts, ys = [], []
            i = 0
            while i < len(t_eval) and t_eval[i] <= s0.t:
                ts.append(t_eval[i])
                ys.append(y0.copy())
                i += 1
            accepted = rejected = 0
            while solver.status == "running":
                before = count[0]
                msg = solver.step()
                attempts = (count[0] - before) // stages
                if solver.status == "failed":
                    break
                accepted += 1
                rejected += max(attempts - 1, 0)
                speed = np.linalg.norm(solver.y[n:])
                if not np.all(np.isfinite(solver.y)) or speed > cfg.blowup_factor * v_scale:
                    raise DomainError(f"finite-time blow-up near t = {solver.t:g}: position becomes undefined")
                if i < len(t_eval) and t_eval[i] <= solver.t:
                    dense = solver.dense_output()
                    while i < len(t_eval) and t_eval[i] <= solver.t:
                        ts.append(t_eval[i])
                        ys.append(dense(t_eval[i]))
                        i += 1
    except FloatingPointError as exc:
        raise DomainError(f"non-finite state during integration ({exc})") from exc

    if solver.status == "failed":
        speed = np.linalg.norm(solver.y[n:])
        if speed > 1e3 * v_scale:
            raise DomainError(f"finite-time blow-up near t = {solver.t:g}: position becomes undefined")
        raise StepUnderflow(f"{msg} (t = {solver.t:g})")

    y = np.array(ys)
    x, v = y[:, :n], y[:, n:]
    W = np.array([W_of(x[j], v[j]) for j in range(len(ts))])
    return Trajectory(
        t=np.array(ts), x=x, v=v, W=W, steps=accepted, rejected=rejected, nfev=count[0], mass=mass,
    )


def free_exponential_analytic(k: float, c1: float, c2: float, t):
    """Closed-form free motion in hbar = hbar0 exp(k x).

    Returns ``(x, v, a)`` with ``x = -(2/k) ln((c1 + k t)/c2)``.
    """
    t = np.asarray(t, dtype=float)
    u = c1 + k * t
    if np.any(u <= 0):
        raise DomainError("c1 + k t <= 0: the particle has run away to infinite speed")
    x = -(2.0 / k) * np.log(u / c2)
    v = -2.0 / u
    a = 2.0 * k / u**2
    if x.ndim == 0:
        return float(x), float(v), float(a)
    return x, v, a


def rest_radius(field: RadialField, r_lo: float = 1e-6, r_hi: float = 1e30, n_scan: int = 2000):
    """Smallest positive radius with r = -1 / (d ln hbar / dr), or ``None``.

    Scans ``f(r) = r * dlog_dr(r) + 1`` on a log grid for sign changes and
    refines the first bracket with Brent's method.
    """
    def f(r):
        return r * field.dlog_dr(r) + 1.0

    rs = np.geomspace(r_lo, r_hi, n_scan)
    vals = []
    for r in rs:
        try:
            vals.append(f(r))
        except DomainError:
            vals.append(np.nan)
    vals = np.array(vals)
    for i in range(len(rs) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0:
            return float(rs[i])
        if np.isfinite(a) and np.isfinite(b) and a * b < 0:
            return float(brentq(f, rs[i], rs[i + 1], xtol=1e-14 * rs[i], rtol=1e-15))
    return None


def null_force_speed(field: RadialField, GM: float, r: float) -> float:
    """Tangential speed at which the total radial force vanishes."""
    if not r > 0:
        raise DomainError("r must be positive")
    g = field.dlog_dr(r)
    if g == 0:
        raise NoSolution("no null-force speed in a uniform field")
    rad = 2.0 * (-GM / (r**2 * g) - GM / r)
    if rad < 0:
        raise NoSolution(f"negative radicand {rad:g} at r = {r:g}")
    return math.sqrt(rad)


def euler_lagrange_residual(traj: Trajectory, field: HbarField, potential: Potential) -> float:
    """Max-norm mismatch between both sides of the modified Euler-Lagrange equation.

    Time derivatives of the momentum are taken by second-order finite
    differences of the sampled velocities; endpoints are excluded.
    """
    if len(traj.t) < 5:
        raise GridTooSmall("need at least 5 samples")
    dvdt = np.gradient(traj.v, traj.t, axis=0, edge_order=2)
    res = []
    for i in range(1, len(traj.t) - 1):
        x, v = traj.x[i], traj.v[i]
        g = field.grad_ln(x)
        lhs = dvdt[i] + potential.gradient(x)
        rhs = np.dot(g, v) * v - (0.5 * np.dot(v, v) - potential(x)) * g
        res.append(np.max(np.abs(lhs - rhs)))
    return float(np.max(res))
