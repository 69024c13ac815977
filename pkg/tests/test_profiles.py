import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from varhbar import calibration, profiles
from varhbar.constants import C, G, HBAR, M_SUN, T_HUBBLE
from varhbar.errors import DomainError, GridTooSmall

CAL = calibration.calibrate(calibration.CalibrationInputs.reference())
PROF = CAL.profile

positive = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)


def test_calibrated_profile_far_field_is_measured_hbar():
    assert profiles.hbar_at(PROF, math.inf, T_HUBBLE) == pytest.approx(1.0546e-34, rel=1e-4)


def test_constant_profile_is_constant():
    p = profiles.HbarProfile.constant(HBAR)
    vals = profiles.hbar_at(p, np.array([1.0, 10.0, 1e9]), np.array([0.0, 1e10, -5.0]))
    assert np.all(vals == pytest.approx(HBAR, rel=1e-15))


def test_value_at_r_equal_ell():
    assert profiles.hbar_at(PROF, PROF.ell, 0.0) == pytest.approx(math.sqrt(2 * PROF.A0), rel=1e-14)


def test_separated_form_squares_to_full():
    r = np.geomspace(1e6, 1e13, 17)
    assert profiles.hbar_separated(PROF, r, 1e17) ** 2 == pytest.approx(profiles.hbar_at(PROF, r, 1e17) ** 2, rel=1e-13)


def test_domain_errors():
    with pytest.raises(DomainError):
        profiles.hbar_at(PROF, 0.0, 0.0)
    neg = profiles.HbarProfile(A0=1.0, L_t=-10.0)
    with pytest.raises(DomainError):
        profiles.hbar_at(neg, 1.0, 20.0 / C)
    with pytest.raises(ValueError):
        profiles.HbarProfile(A0=0.0)
    with pytest.warns(UserWarning):
        profiles.HbarProfile(A0=1.0, ell=-1.0)


def test_log_gradient_published_value():
    p = profiles.HbarProfile(A0=1.0, ell=1.62e8)
    assert profiles.log_gradient(p, 1.52e11) == pytest.approx(-3.5e-15, rel=0.02)
    assert profiles.log_gradient(profiles.HbarProfile(A0=1.0), 5.0) == 0.0


@given(ell=positive, r=positive)
def test_log_gradient_matches_finite_difference(ell, r):
    p = profiles.HbarProfile(A0=3.0, ell=ell)
    h = 1e-5 * r
    fd = (math.log(profiles.hbar_at(p, r + h, 0)) - math.log(profiles.hbar_at(p, r - h, 0))) / (2 * h)
    assert profiles.log_gradient(p, r) == pytest.approx(fd, rel=1e-6, abs=1e-12 / r)


def test_temporal_rate_published_value():
    p = profiles.HbarProfile(A0=1.0, L_t=1e33)
    rate = profiles.temporal_rate(p, T_HUBBLE)
    assert rate == pytest.approx(1.5e-25, rel=0.01)
    assert rate * 365.25 * 86400 == pytest.approx(4.73e-18, rel=0.01)
    assert profiles.temporal_rate(profiles.HbarProfile(A0=1.0), 1e9) == 0.0


@given(L=st.floats(min_value=1.0, max_value=1e3), t=st.floats(min_value=0.0, max_value=1e-7))
def test_temporal_rate_matches_finite_difference(L, t):
    p = profiles.HbarProfile(A0=2.0, L_t=L, ell=1.0)
    h = 1e-6 * L / C
    fd = (math.log(profiles.hbar_at(p, 2.0, t + h)) - math.log(profiles.hbar_at(p, 2.0, t - h))) / (2 * h)
    assert profiles.temporal_rate(p, t) == pytest.approx(fd, rel=1e-6)


def test_hamiltonian_density_cases():
    far = profiles.hamiltonian_density(profiles.HbarProfile(A0=1.0, L_t=1e33, ell=1.62e8, E0=5.63e-10), 1e30, T_HUBBLE)
    assert far == pytest.approx(5.63e-10, rel=1e-6)
    flat = profiles.HbarProfile(A0=1.0, L_t=10.0, E0=2.0)
    assert profiles.hamiltonian_density(flat, 3.0, 0.0) == 2.0
    p = profiles.HbarProfile(A0=1.0, L_t=7.0, ell=2.0, E0=0.5)
    assert profiles.hamiltonian_density(p, 2.0, 0.0) == pytest.approx(0.5 * (4 + 49 / 4), rel=1e-14)


def test_standing_wave_values():
    sw = profiles.StandingWaveProfile(p=1.0, d1=0.0, d3=0.0, d2d4_sq=3.0)
    k = math.sqrt(2.0)
    assert profiles.standing_wave_psi2(sw, (math.pi / 2) / k, 0.7) == pytest.approx(0.0, abs=1e-15)
    assert profiles.standing_wave_psi2(sw, 2 * math.pi / k, 0.0) == pytest.approx(3.0 / (2 * math.pi), rel=1e-14)


def test_standing_wave_lobes_alternate_with_envelope():
    sw = profiles.StandingWaveProfile(p=1.0, d1=0.0, d3=0.0, d2d4_sq=1.0)
    k = math.sqrt(2.0)
    peaks = np.arange(1, 8) * math.pi / k
    vals = profiles.standing_wave_psi2(sw, peaks, 0.0)
    assert np.all(np.sign(vals[1:]) == -np.sign(vals[:-1]))
    assert np.abs(vals) * k * peaks == pytest.approx(np.ones(7), rel=1e-12)


def test_volume_average_limits_and_quadrature():
    p = profiles.HbarProfile(A0=2.0, L_t=50.0, ell=0.3)
    t = 3.0 / C
    assert profiles.volume_average_hbar2(p, 1e12, t) == pytest.approx(2.0 * (1 + 3.0 / 50.0), rel=1e-12)
    flat = profiles.HbarProfile(A0=2.0, L_t=50.0)
    assert profiles.volume_average_hbar2(flat, 0.1, t) == pytest.approx(2.0 * (1 + 3.0 / 50.0), rel=1e-15)
    for R in (0.5, 2.0, 40.0):
        num = quad(lambda r: profiles.hbar_at(p, r, t) ** 2 * 4 * math.pi * r**2, 0, R, points=[1e-9])[0]
        num /= 4 / 3 * math.pi * R**3
        assert num == pytest.approx(profiles.volume_average_hbar2(p, R, t), rel=1e-8)


def test_lpi_beta_h():
    assert profiles.schwarzschild_radius(M_SUN) == pytest.approx(2 * G * M_SUN / C**2, rel=1e-15)
    assert profiles.R_S_SUN == pytest.approx(2.95e3, rel=2e-3)
    assert profiles.lpi_beta_h(1.62e8, 2.95e3) == pytest.approx(-5.49e4, rel=2e-3)
    assert profiles.lpi_beta_h(0.0, 2.95e3) == 0.0
    with pytest.raises(ZeroDivisionError):
        profiles.lpi_beta_h(1.0, 0.0)


def _grid(n):
    return np.linspace(1.0, 3.0, n), np.linspace(0.0, 1.0, n)


def test_residual_zero_momentum_chi_exact_and_psi_second_order():
    p = profiles.HbarProfile(A0=1.0, L_t=50.0, ell=2.0)
    res = []
    for n in (81, 161, 321):
        r, x0 = _grid(n)
        psi = profiles.hbar_separated(p, r[:, None], x0[None, :] / C)
        assert profiles.eom_residual(psi**2, r, x0) < 1e-9
        res.append(profiles.eom_residual(psi, r, x0, form="psi"))
    assert math.log2(res[1] / res[2]) == pytest.approx(2.0, abs=0.1)


def test_residual_standing_wave_second_order():
    sw = profiles.StandingWaveProfile(p=0.7, d1=0.3, d3=0.1, d2d4_sq=1.0)
    res = []
    for n in (81, 161):
        r, x0 = _grid(n)
        res.append(profiles.eom_residual(profiles.standing_wave_psi2(sw, r[:, None], x0[None, :]), r, x0))
    assert math.log2(res[0] / res[1]) == pytest.approx(2.0, abs=0.05)


def test_residual_constant_field_exact_and_errors():
    r, x0 = _grid(11)
    assert profiles.eom_residual(np.full((11, 11), 4.2), r, x0) == 0.0
    with pytest.raises(GridTooSmall):
        profiles.eom_residual(np.ones((4, 4)), r[:4], x0[:4])
    with pytest.raises(ValueError):
        profiles.eom_residual(np.ones((11, 11)), r, x0, form="other")


@settings(max_examples=30)
@given(ell=positive, R=positive, L=st.floats(min_value=1.0, max_value=1e6))
def test_volume_average_exceeds_far_field(ell, R, L):
    p = profiles.HbarProfile(A0=1.0, L_t=L, ell=ell)
    assert profiles.volume_average_hbar2(p, R, 0.0) == pytest.approx(1.0 + 1.5 * ell / R, rel=1e-14)
