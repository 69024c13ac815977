import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varhbar import galaxy
from varhbar.constants import G, KPC, M_SUN
from varhbar.errors import NegativeVSquared, SingularDenominator
from varhbar.galaxy import RotationProblem


def test_required_gradient_cases():
    GM, r = G * 1.3e11 * M_SUN, 10 * KPC
    v = np.sqrt(GM / r)
    assert galaxy.hbar_log_gradient_required(v, *galaxy.point_mass_potential(GM, r), r) == pytest.approx(0.0, abs=1e-35)
    g = galaxy.hbar_log_gradient_required(150e3, *galaxy.point_mass_potential(GM, r), r)
    assert g == pytest.approx(-1.6e-21, rel=0.05)
    assert galaxy.r_at_newtonian_balance(150e3, GM) / KPC == pytest.approx(24.9, abs=0.1)
    with pytest.raises(SingularDenominator):
        galaxy.hbar_log_gradient_required(2.0, 2.0, 1.0, 1.0)


@pytest.mark.parametrize("M, r_out, target, tol", [(9e10, 30.0, 0.9, 0.02), (1.3e11, 60.0, 0.755, 0.05)])
def test_published_minimum_factors(M, r_out, target, tol):
    sol = galaxy.invert_rotation_curve(RotationProblem.from_astro(150.0, M, 10.0, r_out))
    assert sol.min_factor == pytest.approx(target, abs=tol)
    r_star = galaxy.r_at_newtonian_balance(150e3, G * M * M_SUN)
    assert abs(sol.r_min - r_star) <= 2 * (sol.r[1] - sol.r[0])
    assert 10 * KPC < sol.r_min < r_out * KPC


def test_frozen_minimum_factors():
    a = galaxy.invert_rotation_curve(RotationProblem.from_astro(150.0, 9e10, 10.0, 30.0))
    b = galaxy.invert_rotation_curve(RotationProblem.from_astro(150.0, 1.3e11, 10.0, 60.0))
    assert a.min_factor == pytest.approx(0.91251, abs=1e-5)
    assert b.min_factor == pytest.approx(0.78359, abs=1e-5)


@given(v=st.floats(min_value=80.0, max_value=300.0), M=st.floats(min_value=1e10, max_value=5e11))
def test_numeric_matches_closed_form(v, M):
    prob = RotationProblem.from_astro(v, M, 5.0, 60.0, n_grid=2001)
    sol = galaxy.invert_rotation_curve(prob)
    exact = galaxy.flat_curve_ln_hbar_exact(prob.v_flat, G * prob.M_visible, sol.r, prob.r_in)
    assert np.max(np.abs(sol.ln_hbar_rel - exact)) < 1e-6
    assert sol.factor[0] == 1.0


def test_circular_velocity_round_trip():
    prob = RotationProblem.from_astro(150.0, 1.3e11, 10.0, 60.0, n_grid=101)
    GM = G * prob.M_visible
    r = np.linspace(prob.r_in, prob.r_out, 101)
    phi, dphi = galaxy.point_mass_potential(GM, r)
    g = galaxy.hbar_log_gradient_required(prob.v_flat, phi, dphi, r)
    m = 3.0
    v = galaxy.circular_velocity(g, m * phi, m * dphi, r, m)
    assert v == pytest.approx(np.full_like(r, prob.v_flat), rel=1e-8)


def test_circular_velocity_limits_and_errors():
    GM, r = 4.0, 2.0
    phi, dphi = galaxy.point_mass_potential(GM, r)
    assert galaxy.circular_velocity(0.0, phi, dphi, r) == pytest.approx(np.sqrt(GM / r), rel=1e-15)
    r_min = galaxy.r_at_newtonian_balance(1.5, GM)
    phi, dphi = galaxy.point_mass_potential(GM, r_min)
    g = galaxy.hbar_log_gradient_required(1.5, phi, dphi, r_min)
    assert galaxy.circular_velocity(g, phi, dphi, r_min) == pytest.approx(1.5, rel=1e-14)
    with pytest.raises(SingularDenominator):
        galaxy.circular_velocity(2.0 / r, phi, dphi, r)
    with pytest.raises(NegativeVSquared):
        galaxy.circular_velocity(-10.0, -1.0, 0.0, 1.0)


def test_potential_from_velocity_point_mass():
    GM = 5.0
    r = np.linspace(1.0, 10.0, 2001)
    phi = galaxy.potential_from_velocity(r, np.sqrt(GM / r), phi_outer=-GM / r[-1])
    assert phi == pytest.approx(-GM / r, rel=1e-8)
    with pytest.raises(ValueError):
        galaxy.potential_from_velocity(r, r, phi_outer=1.0)


def test_problem_validation():
    with pytest.raises(ValueError):
        RotationProblem(150e3, 1e41, 2.0, 1.0)
    with pytest.raises(ValueError):
        RotationProblem(0.0, 1e41, 1.0, 2.0)
