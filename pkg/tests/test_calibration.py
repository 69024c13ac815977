import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varhbar import calibration, profiles
from varhbar.calibration import CalibrationInputs
from varhbar.constants import C, HBAR, T_HUBBLE, YEAR
from varhbar.errors import DegenerateVacuum, NoPositiveRoot, NoSolution

REF = CalibrationInputs.reference()
RES = calibration.calibrate(REF)


def test_temporal_scale():
    assert calibration.solve_temporal(4.73e-18, T_HUBBLE) == pytest.approx(1.0e33, rel=0.02)
    assert calibration.solve_temporal(0.0) == math.inf


@given(rate=st.floats(min_value=1e-20, max_value=1e-19))
def test_temporal_round_trip(rate):
    L = calibration.solve_temporal(rate, T_HUBBLE)
    p = profiles.HbarProfile(A0=1.0, L_t=L)
    assert profiles.temporal_rate(p, T_HUBBLE) * YEAR == pytest.approx(rate, rel=1e-10)


def test_negative_rate_gives_falling_hbar():
    L = calibration.solve_temporal(-4.73e-18, T_HUBBLE)
    assert L < 0
    assert profiles.temporal_rate(profiles.HbarProfile(A0=1.0, L_t=L), T_HUBBLE) * YEAR == pytest.approx(-4.73e-18,
                                                                                                        rel=1e-10)


def test_rate_too_large_has_no_solution():
    with pytest.raises(NoSolution):
        calibration.solve_temporal(1.0 / (2 * T_HUBBLE / YEAR) * 1.01, T_HUBBLE)


def test_amplitude():
    amp = calibration.solve_amplitude(1.0546e-34, 1e33, 4.35e17)
    assert amp == pytest.approx(1.11e-101, rel=0.02)
    assert calibration.solve_amplitude(0.0, 1e33) == 0.0
    # independent recomputation with exact constants
    assert calibration.solve_amplitude(HBAR, 1e33, T_HUBBLE) == pytest.approx(HBAR**2 / (1e33 + 299792458 * 4.35e17),
                                                                             rel=1e-3)


def test_vacuum_published_and_recomputed():
    b2b3, beta, b1b3 = calibration.solve_vacuum(5.63e-10, RES.beta2_b2b3, RES.b1_over_b2)
    assert b2b3 == pytest.approx(3.86e92, rel=0.10)
    assert b2b3 == pytest.approx(4.05e92, rel=0.01)
    assert beta == pytest.approx(1.70e-97, rel=0.10)
    assert b1b3 == pytest.approx(3.86e125, rel=0.10)
    dev = RES.deviations()
    assert dev["b2b3"] == pytest.approx((b2b3 - 3.86e92) / 3.86e92, rel=1e-12)
    with pytest.raises(DegenerateVacuum):
        calibration.solve_vacuum(0.0, RES.beta2_b2b3, RES.b1_over_b2)


def test_vacuum_energy_identity():
    b2b3, beta, _ = calibration.solve_vacuum(5.63e-10, RES.beta2_b2b3, RES.b1_over_b2)
    assert beta**2 * b2b3**2 / 8 == pytest.approx(5.63e-10, rel=1e-12)


def test_radial_scale():
    ell = calibration.solve_radial(21e-6, 1.52e11, 6e9)
    assert ell == pytest.approx(1.62e8, rel=0.03)
    assert calibration.solve_radial(0.0, 1.52e11, 6e9) == 0.0
    p = profiles.HbarProfile(A0=1.0, ell=ell)
    assert profiles.log_gradient(p, 1.52e11) == pytest.approx(-21e-6 / 6e9, rel=1e-12)
    assert profiles.log_gradient(p, 1.52e11) == pytest.approx(-3.5e-15, rel=1e-6)
    assert calibration.solve_radial_small_ell(21e-6, 1.52e11, 6e9) == pytest.approx(ell, rel=2e-3)
    with pytest.raises(NoPositiveRoot):
        calibration.solve_radial(0.6, 1.0, 1.0)


def test_full_pipeline_table():
    assert RES.b1_over_b2 == pytest.approx(1.0e33, rel=0.02)
    assert RES.beta2_b2b3 == pytest.approx(1.11e-101, rel=0.02)
    assert RES.b4_over_b3 == pytest.approx(1.62e8, rel=0.03)
    assert set(RES.provenance) >= {"b1_over_b2", "beta2_b2b3", "b2b3", "beta", "b1b3", "b4_over_b3"}
    assert profiles.hbar_at(RES.profile, math.inf, T_HUBBLE) == pytest.approx(HBAR, rel=1e-14)
    d = RES.to_dict()
    assert d["profile"]["ell"] == RES.b4_over_b3


def test_static_inputs_give_constant_profile():
    res = calibration.calibrate(CalibrationInputs(alpha_rate=0.0, frac_delta_hbar=0.0))
    assert math.isinf(res.profile.L_t) and res.profile.ell == 0.0
    r = np.geomspace(1.0, 1e20, 9)
    assert np.all(profiles.hbar_at(res.profile, r, 1e17) == pytest.approx(HBAR, rel=1e-15))


def test_result_profile_satisfies_field_equation():
    p = RES.profile
    r = np.linspace(1e8, 3e8, 41)
    x0 = np.linspace(0.0, 2e8, 41)
    chi = profiles.hbar_at(p, r[:, None], x0[None, :] / C) ** 2 / p.A0
    assert profiles.eom_residual(chi, r, x0) < 1e-20


def test_stage_label_in_errors():
    with pytest.raises(NoPositiveRoot, match=r"\[calibration/radial\]"):
        calibration.calibrate(CalibrationInputs(alpha_rate=4.73e-18, frac_delta_hbar=0.5, delta_R_orbit=1.0))
    with pytest.raises(DegenerateVacuum, match=r"\[calibration/vacuum\]"):
        calibration.calibrate(CalibrationInputs(alpha_rate=4.73e-18, lambda_energy=0.0))


def test_input_validation():
    with pytest.raises(ValueError):
        CalibrationInputs(alpha_rate=1e-18, R_orbit=-1.0)
