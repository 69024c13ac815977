"""Two-body orbits under dominant-path gravity, plus orbital diagnostics.

Each body senses the companion-centred profile
``hbar(r) = hbar_inf * sqrt(1 + ell / r)`` with ``r`` the separation.
Two couplings are offered:

``relative``
    the reduced-mass relative coordinate obeys the single-body law with
    potential ``-G (m1 + m2) / r``; W is then exactly conserved.
``per_body``
    each body obeys the single-body law with its own (barycentric)
    velocity, the companion's potential ``-G m_j / r`` and the gradient
    of the companion-centred profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dynamics, profiles
from .constants import ARCSEC, C, G, HBAR, HOUR, M_SUN
from .errors import EccentricityOutOfRange, TooFewPeriods, Unbound


@dataclass(frozen=True)
class BinaryConfig:
    m1: float = 1.4 * M_SUN
    m2: float = 1.4 * M_SUN
    r_peri: float = 7.46e8
    v_each: float = 450e3
    ell: float = 0.0
    coupling_mode: str = "per_body"
    duration: float = 8.0  # in Newtonian periods
    samples_per_period: int = 4000
    rtol: float = 1e-12
    atol: float = 1e-6

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise ValueError("masses must be positive")
        if not self.r_peri > 0:
            raise ValueError("r_peri must be positive")
        if self.coupling_mode not in ("relative", "per_body"):
            raise ValueError(f"unknown coupling_mode {self.coupling_mode!r}")

    @property
    def total_mass(self):
        return self.m1 + self.m2

    @property
    def reduced_mass(self):
        return self.m1 * self.m2 / self.total_mass

    def kepler_elements(self):
        """Newtonian semi-major axis, eccentricity and period of the initial state."""
        GM = G * self.total_mass
        v = 2.0 * self.v_each
        inv_a = 2.0 / self.r_peri - v**2 / GM
        if inv_a <= 0:
            raise Unbound("initial conditions are not bound (non-negative orbital energy)")
        a = 1.0 / inv_a
        return a, 1.0 - self.r_peri / a, 2 * math.pi * math.sqrt(a**3 / GM)


@dataclass
class ApsideEvents:
    peri_times: np.ndarray
    peri_angles: np.ndarray
    peri_r: np.ndarray
    apo_times: np.ndarray
    apo_r: np.ndarray
    direction: float  # +1 counter-clockwise, -1 clockwise
    circular: bool = False


@dataclass
class OrbitDiagnostics:
    period: float
    eccentricity: float
    apsidal_precession: float  # arcsec per period, negative = retrograde
    W_drift: float
    periastron_times: list = field(default_factory=list)

    @property
    def period_hours(self):
        return self.period / HOUR


def _refine(t, s, i):
    """Root of the quadratic through (t, s) at i-1, i, i+1 lying in [t[i-1], t[i+1]]."""
    tt = t[i - 1:i + 2]
    ss = s[i - 1:i + 2]
    tm = tt[1]
    c2, c1, c0 = np.polyfit(tt - tm, ss, 2)
    if c2 == 0:
        return tm - c0 / c1
    roots = np.roots([c2, c1, c0])
    roots = roots[np.isreal(roots)].real
    lo, hi = tt[0] - tm, tt[2] - tm
    ok = roots[(roots >= lo) & (roots <= hi)]
    if len(ok) == 0:
        return tm - c0 / c1
    return tm + ok[np.argmin(np.abs(ok))]


def _quad_interp(t, y, i, te):
    tt = t[i - 1:i + 2]
    coeffs = np.polyfit(tt - tt[1], y[i - 1:i + 2], 2)
    return np.polyval(coeffs, te - tt[1])


def detect_apsides(traj: dynamics.Trajectory, circular_tol: float = 1e-6) -> ApsideEvents:
    """Periastron/apastron events of a planar relative-separation trajectory.

    Events are sign changes of the radial velocity ``x . v``, refined by a
    local quadratic fit (time error O(dt^3)).
    """
    x, v, t = traj.x, traj.v, traj.t
    r = np.linalg.norm(x, axis=1)
    Lz = x[:, 0] * v[:, 1] - x[:, 1] * v[:, 0]
    direction = float(np.sign(np.mean(Lz))) or 1.0
    if (r.max() - r.min()) / (r.max() + r.min()) < circular_tol:
        e = np.array([])
        return ApsideEvents(e, e, e, e, e, direction, circular=True)

    s = np.einsum("ij,ij->i", x, v)
    theta = np.unwrap(np.arctan2(x[:, 1], x[:, 0]))
    peri, apo = [], []  # (time, angle, radius) and (time, radius)
    # exact zero at the first sample (launch at an apsis) is handled explicitly
    if s[0] == 0 and len(s) > 1:
        if s[1] > 0:
            peri.append((t[0], theta[0], r[0]))
        elif s[1] < 0:
            apo.append((t[0], r[0]))
    for k in range(len(s) - 1):
        if s[k] == 0 and k == 0:
            continue
        if s[k] < 0 <= s[k + 1] or s[k] > 0 >= s[k + 1]:
            if s[k + 1] == 0 and k + 2 < len(s) and np.sign(s[k + 2]) == np.sign(s[k]):
                continue
            i = min(max(k + (abs(s[k + 1]) < abs(s[k])), 1), len(t) - 2)
            te = _refine(t, s, i)
            re = _quad_interp(t, r, i, te)
            if s[k] < 0:
                peri.append((te, _quad_interp(t, theta, i, te), re))
            else:
                apo.append((te, re))
    peri_t, peri_a, peri_r = (np.array(c) for c in zip(*peri)) if peri else (np.array([]),) * 3
    apo_t, apo_r = (np.array(c) for c in zip(*apo)) if apo else (np.array([]),) * 2
    return ApsideEvents(peri_t, peri_a, peri_r, apo_t, apo_r, direction)


def diagnostics_from(ev: ApsideEvents, W_drift: float = 0.0) -> OrbitDiagnostics:
    if ev.circular:
        raise TooFewPeriods("orbit is circular: no apsides")
    if len(ev.peri_times) < 2:
        raise TooFewPeriods(f"only {len(ev.peri_times)} periastron passage(s) detected")
    period = float(np.mean(np.diff(ev.peri_times)))
    dtheta = np.diff(ev.peri_angles) * ev.direction - 2 * math.pi
    precession = float(np.mean(dtheta)) / ARCSEC
    rp = float(np.mean(ev.peri_r))
    ra = float(np.mean(ev.apo_r)) if len(ev.apo_r) else rp
    ecc = (ra - rp) / (ra + rp)
    return OrbitDiagnostics(period, ecc, precession, W_drift, list(ev.peri_times))


def _relative_W(d, dv, GM, mu, hbar_field):
    r = np.linalg.norm(d)
    return mu * (0.5 * np.dot(dv, dv) - GM / r) / hbar_field.value_r(r)


def companion_profile(ell: float, hbar_inf: float = HBAR) -> profiles.HbarProfile:
    return profiles.HbarProfile(A0=hbar_inf**2, L_t=math.inf, ell=ell)


def simulate_binary(cfg: BinaryConfig):
    """Integrate a planar binary from periastron.

    Returns ``(traj1, traj2, diagnostics)``; the trajectories are
    barycentric and both carry the relative-coordinate W at each sample.
    """
    a_k, e_k, P_k = cfg.kepler_elements()
    M, mu = cfg.total_mass, cfg.reduced_mass
    T = cfg.duration * P_k
    n = int(round(cfg.duration * cfg.samples_per_period)) + 1
    t_eval = np.linspace(0.0, T, n)
    icfg = dynamics.IntegratorConfig(rtol=cfg.rtol, atol=cfg.atol)
    hfield = dynamics.ProfileField(companion_profile(cfg.ell))
    GM = G * M

    if cfg.coupling_mode == "relative":
        s0 = dynamics.State([cfg.r_peri, 0.0], [0.0, 2 * cfg.v_each])
        rel = dynamics.integrate(s0, hfield, dynamics.PointMass(GM), T, icfg, t_eval=t_eval, mass=mu)
        d, dv = rel.x, rel.v
        x1, v1 = (cfg.m2 / M) * d, (cfg.m2 / M) * dv
        x2, v2 = -(cfg.m1 / M) * d, -(cfg.m1 / M) * dv
        W = rel.W
        stats = dict(steps=rel.steps, rejected=rel.rejected, nfev=rel.nfev)
    else:
        f1 = cfg.m2 / M
        f2 = cfg.m1 / M
        s0 = dynamics.State(
            [f1 * cfg.r_peri, 0.0, -f2 * cfg.r_peri, 0.0],
            [0.0, cfg.v_each, 0.0, -cfg.v_each],
        )
        Gm1, Gm2 = G * cfg.m1, G * cfg.m2

        def rhs(t, y):
            p1, p2, u1, u2 = y[0:2], y[2:4], y[4:6], y[6:8]
            dd = p1 - p2
            r = math.hypot(dd[0], dd[1])
            nhat = dd / r
            g1 = hfield.dlog_dr(r) * nhat  # gradient w.r.t. p1 of ln hbar(|p1 - p2|)
            a1 = dynamics.acceleration_from(Gm2 * dd / r**3, -Gm2 / r, g1, u1)
            a2 = dynamics.acceleration_from(-Gm1 * dd / r**3, -Gm1 / r, -g1, u2)
            return np.concatenate([u1, u2, a1, a2])

        def W_of(x, v):
            return _relative_W(x[0:2] - x[2:4], v[0:2] - v[2:4], GM, mu, hfield)

        tr = dynamics._drive(rhs, s0, T, t_eval, icfg, W_of, mu)
        x1, x2, v1, v2 = tr.x[:, 0:2], tr.x[:, 2:4], tr.v[:, 0:2], tr.v[:, 2:4]
        d, dv = x1 - x2, v1 - v2
        W = tr.W
        stats = dict(steps=tr.steps, rejected=tr.rejected, nfev=tr.nfev)

    t = t_eval
    relative = dynamics.Trajectory(t=t, x=d, v=dv, W=W, mass=mu, **stats)
    ev = detect_apsides(relative)
    W_drift = relative.max_W_drift
    diag = diagnostics_from(ev, W_drift)
    meta = dict(kepler_a=a_k, kepler_e=e_k, kepler_period=P_k, mode=cfg.coupling_mode, ell=cfg.ell)
    traj1 = dynamics.Trajectory(t=t, x=x1, v=v1, W=W, mass=cfg.m1, meta=meta, **stats)
    traj2 = dynamics.Trajectory(t=t, x=x2, v=v2, W=W, mass=cfg.m2, meta=meta, **stats)
    return traj1, traj2, diag


def gw_period_decay(P: float, e: float, m_p: float, m_c: float) -> float:
    """Orbital period derivative from gravitational-wave emission [s/s].

    Quadrupole (Peters-Mathews) formula with mass factor
    ``m_p m_c (m_p + m_c)^(-1/3)``.
    """
    if not 0 <= e < 1:
        raise EccentricityOutOfRange(f"eccentricity {e} not in [0, 1)")
    if not P > 0:
        raise ValueError("period must be positive")
    enhancement = (1 + 73 / 24 * e**2 + 37 / 96 * e**4) * (1 - e**2) ** -3.5
    return (
        -192 * math.pi * G ** (5 / 3) / (5 * C**5)
        * (P / (2 * math.pi)) ** (-5 / 3)
        * enhancement
        * m_p * m_c * (m_p + m_c) ** (-1 / 3)
    )
