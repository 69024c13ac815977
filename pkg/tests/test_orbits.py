import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varhbar import dynamics, orbits
from varhbar.constants import HOUR, M_SUN
from varhbar.errors import EccentricityOutOfRange, TooFewPeriods, Unbound
from varhbar.orbits import BinaryConfig


@pytest.fixture(scope="module")
def newtonian():
    return orbits.simulate_binary(BinaryConfig(ell=0.0, duration=4.0))


def test_kepler_elements_of_reference_binary():
    a, e, P = BinaryConfig().kepler_elements()
    assert e == pytest.approx(0.625, abs=0.002)
    assert P / HOUR == pytest.approx(8.05, abs=0.03)


def test_unbound_initial_state():
    with pytest.raises(Unbound):
        BinaryConfig(v_each=1500e3).kepler_elements()
    with pytest.raises(ValueError):
        BinaryConfig(coupling_mode="other")


def test_newtonian_binary_matches_kepler(newtonian):
    t1, t2, d = newtonian
    _, e, P = BinaryConfig().kepler_elements()
    assert d.period == pytest.approx(P, rel=1e-6)
    assert d.eccentricity == pytest.approx(e, abs=1e-6)
    assert abs(d.apsidal_precession) < 1.0
    # barycentre stays fixed for equal masses
    assert np.max(np.abs(t1.x + t2.x)) < 1e-3


def test_relative_and_per_body_agree_when_flat():
    _, _, d = orbits.simulate_binary(BinaryConfig(ell=0.0, duration=3.0, coupling_mode="relative"))
    _, _, e = orbits.simulate_binary(BinaryConfig(ell=0.0, duration=3.0, coupling_mode="per_body"))
    assert d.period == pytest.approx(e.period, rel=1e-8)


@pytest.mark.parametrize("mode, period_h, prec", [("per_body", 12.442, -116373.0), ("relative", 9.8747, -179754.0)])
def test_dominant_path_binary_regression(mode, period_h, prec):
    """Frozen outputs of the two couplings at ell = 2.65e8 m (see the decision log)."""
    _, _, d = orbits.simulate_binary(BinaryConfig(ell=2.65e8, coupling_mode=mode, duration=4.0))
    assert d.period_hours == pytest.approx(period_h, rel=1e-3)
    assert d.apsidal_precession == pytest.approx(prec, rel=1e-3)
    assert d.apsidal_precession < 0


def test_relative_mode_conserves_W():
    _, _, d = orbits.simulate_binary(BinaryConfig(ell=2.65e8, coupling_mode="relative", duration=3.0))
    assert d.W_drift < 1e-8


def test_circular_orbit_has_no_apsides():
    t = np.linspace(0, 20, 2001)
    x = np.stack([np.cos(t), np.sin(t)], axis=1)
    v = np.stack([-np.sin(t), np.cos(t)], axis=1)
    ev = orbits.detect_apsides(dynamics.Trajectory(t=t, x=x, v=v, W=np.zeros_like(t)))
    assert ev.circular
    with pytest.raises(TooFewPeriods):
        orbits.diagnostics_from(ev)


def _kepler_traj(n_per_period, periods=3):
    s0 = dynamics.State([1.0, 0.0], [0.0, 1.2])
    a = 1.0 / (2.0 - 1.44)
    P = 2 * math.pi * a**1.5
    cfg = dynamics.IntegratorConfig(n_samples=periods * n_per_period + 1)
    return dynamics.integrate(s0, dynamics.ConstantField(1.0), dynamics.PointMass(1.0), periods * P, cfg), P


def test_apsides_period_and_refinement():
    tr, P = _kepler_traj(400)
    ev = orbits.detect_apsides(tr)
    d = orbits.diagnostics_from(ev)
    assert d.period == pytest.approx(P, rel=1e-6)
    tr2, _ = _kepler_traj(800)
    ev2 = orbits.detect_apsides(tr2)
    dt = tr.t[1] - tr.t[0]
    assert np.max(np.abs(ev.peri_times - ev2.peri_times)) < 1e-3 * dt
    assert np.max(np.abs(ev.apo_times - ev2.apo_times)) < 1e-3 * dt


def test_too_few_periods():
    tr, _ = _kepler_traj(400, periods=1)
    with pytest.raises(TooFewPeriods):
        orbits.diagnostics_from(orbits.detect_apsides(tr))


def test_gw_decay_published_values():
    m = 1.4 * M_SUN
    d1 = orbits.gw_period_decay(8.1 * HOUR, 0.62, m, m)
    d2 = orbits.gw_period_decay(11.78 * HOUR, 0.62, m, m)
    assert d1 == pytest.approx(-2.25e-12, rel=0.02)
    assert d2 == pytest.approx(-1.20e-12, rel=0.02)
    assert d2 / d1 == pytest.approx((11.78 / 8.1) ** (-5 / 3), rel=1e-12)
    assert (11.78 / 8.1) ** (-5 / 3) == pytest.approx(0.536, abs=1e-3)


@given(P=st.floats(min_value=1e3, max_value=1e7), e=st.floats(min_value=0.0, max_value=0.95))
def test_gw_decay_negative_and_circular_limit(P, e):
    m = 1.4 * M_SUN
    d = orbits.gw_period_decay(P, e, m, m)
    assert d < 0
    assert abs(d) >= abs(orbits.gw_period_decay(P, 0.0, m, m)) * (1 - 1e-12)


def test_gw_decay_errors():
    with pytest.raises(EccentricityOutOfRange):
        orbits.gw_period_decay(1e4, 1.0, M_SUN, M_SUN)
    with pytest.raises(EccentricityOutOfRange):
        orbits.gw_period_decay(1e4, -0.1, M_SUN, M_SUN)
