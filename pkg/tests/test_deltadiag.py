"""Ball-residual detector: -4 pi u(0+) for analytic and computed candidates."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radialbc.deltadiag import (
    CandidateU,
    Power,
    PowerPair,
    ResidualReport,
    Sampled,
    residual_limit,
    sphere_residual,
)
from radialbc.errors import DivergentVolumeError
from radialbc.potentials import Coulomb, Harmonic, InverseSquare
from radialbc.solver import MixedSAE, RadialProblem, find_level

FOUR_PI = 4.0 * math.pi


# --------------------------------------------------------------------------
# analytic candidates: exact values, no extrapolation error


@pytest.mark.parametrize("c", [1.0, 2.0, -3.0])
def test_constant_candidate_reports_its_point_source(c):
    cand = CandidateU(form=Power(c=c, a=0.0))
    rep = residual_limit(cand, a_start=1.0)
    assert rep.S_limit == pytest.approx(-FOUR_PI * c, rel=1e-6)
    assert rep.strength == pytest.approx(c, rel=1e-6)
    assert rep.verdict == "point-source"


def test_linear_candidate_is_source_free():
    rep = residual_limit(CandidateU(form=Power(c=1.0, a=1.0)), a_start=1.0)
    assert abs(rep.S_limit) < 1e-6
    assert rep.verdict == "source-free"


def test_two_power_candidate_keeps_only_the_constant_part():
    # u = c1 + c2 r: only the r^0 piece survives the a -> 0 limit
    cand = CandidateU(form=PowerPair(c1=0.7, a1=0.0, c2=-2.0, a2=1.0))
    rep = residual_limit(cand, a_start=0.5)
    assert rep.S_limit == pytest.approx(-FOUR_PI * 0.7, rel=1e-6)
    assert rep.verdict == "point-source"


def test_fractional_power_convergence_order():
    # u = r^0.3: S(a) ~ a^0.3 -> 0, and the report should measure that rate
    rep = residual_limit(CandidateU(form=Power(c=1.0, a=0.3)), a_start=1.0)
    assert rep.verdict == "source-free"
    assert rep.order == pytest.approx(0.3, abs=0.02)


@settings(max_examples=25, deadline=None)
@given(c=st.floats(min_value=-5.0, max_value=5.0).filter(lambda x: abs(x) > 1e-3))
def test_residual_is_linear_in_the_candidate(c):
    base = sphere_residual(CandidateU(form=Power(c=1.0, a=0.0)), 0.5)
    scaled = sphere_residual(CandidateU(form=Power(c=c, a=0.0)), 0.5)
    assert scaled == pytest.approx(c * base, rel=1e-9)


def test_energy_and_potential_terms_cancel_for_true_solutions():
    # u = r e^-r solves the hydrogen ground level: S(a) = 0 for every a,
    # not only in the limit, because surface and volume terms cancel
    r = np.geomspace(1e-8, 40.0, 4000)
    cand = CandidateU(
        form=Sampled(r, r * np.exp(-r), inner_exponents=(1.0,)),
        l=0, E=-0.5, potential=Coulomb(Z=1.0), mass=1.0,
    )
    for a in (0.5, 0.1):
        assert abs(sphere_residual(cand, a)) < 1e-7


# --------------------------------------------------------------------------
# divergence guard


def test_constant_with_centrifugal_term_diverges():
    with pytest.raises(DivergentVolumeError):
        sphere_residual(CandidateU(form=Power(c=1.0, a=0.0), l=1), 1.0)


def test_constant_with_inverse_square_potential_diverges():
    cand = CandidateU(form=Power(c=1.0, a=0.0), potential=InverseSquare(g=-0.08))
    with pytest.raises(DivergentVolumeError):
        sphere_residual(cand, 1.0)


def test_positive_exponent_with_centrifugal_term_is_fine():
    # volume integrand ~ r^(a-1) is integrable for a > 0
    val = sphere_residual(CandidateU(form=Power(c=1.0, a=1.0), l=1), 1.0)
    assert math.isfinite(val)


# --------------------------------------------------------------------------
# computed eigenfunctions


def test_dirichlet_levels_are_source_free():
    for pot, E_l in [(Coulomb(Z=1.0), 0), (Harmonic(omega=1.0), 1)]:
        p = RadialProblem(mass=1.0, l=E_l, potential=pot)
        lv = find_level(p, 0)
        rep = residual_limit(CandidateU.from_level(p, lv), a_start=lv.r[-1] / 8)
        assert rep.verdict == "source-free"
        assert abs(rep.S_limit) < 1e-6


def test_mixed_sae_level_is_source_free():
    # u(0) = 0 still holds for the mixed branch (both exponents positive),
    # so even this state hides no delta source; requires the two-branch
    # continuation below the first grid point
    p = RadialProblem(mass=1.0, l=0, potential=InverseSquare(g=-0.08),
                      policy=MixedSAE(theta=math.pi / 4))
    lv = find_level(p, 0)
    rep = residual_limit(CandidateU.from_level(p, lv), a_start=lv.r[-1] / 8)
    assert rep.verdict == "source-free"
    assert abs(rep.S_limit) < 1e-6


def test_from_level_rejects_relativistic_input():
    p = RadialProblem(mass=1.0, l=0, potential=Coulomb(Z=0.2), relativistic=True)
    lv = find_level(p, 0)
    with pytest.raises(ValueError):
        CandidateU.from_level(p, lv)


# --------------------------------------------------------------------------
# sampled-form continuation below the grid


def test_sampled_estimates_inner_exponent_without_hints():
    r = np.geomspace(1e-6, 1.0, 200)
    s = Sampled(r, 2.0 * r**1.5)
    assert s.leading_exponent() == pytest.approx(1.5, abs=1e-3)
    u_lo, du_lo = s.u_du(1e-8)
    assert u_lo == pytest.approx(2.0 * 1e-8**1.5, rel=1e-2)


def test_sampled_two_branch_fit_recovers_coefficients():
    r = np.geomspace(1e-7, 1.0, 300)
    u = 3.0 * r**0.8 - 0.5 * r**0.2
    s = Sampled(r, u, inner_exponents=(0.8, 0.2))
    assert s.leading_exponent() == pytest.approx(0.2)
    u_lo, _ = s.u_du(1e-9)
    assert u_lo == pytest.approx(3.0 * 1e-9**0.8 - 0.5 * 1e-9**0.2, rel=1e-6)


def test_sampled_interpolates_inside_the_grid():
    r = np.geomspace(1e-5, 10.0, 500)
    s = Sampled(r, np.sin(r))
    u_mid, du_mid = s.u_du(2.0)
    assert u_mid == pytest.approx(math.sin(2.0), rel=1e-7)
    assert du_mid == pytest.approx(math.cos(2.0), rel=1e-5)


def test_sampled_validation():
    good_r = np.geomspace(1e-3, 1.0, 10)
    with pytest.raises(ValueError):
        Sampled(good_r[:4], good_r[:4])  # too few samples
    with pytest.raises(ValueError):
        Sampled(-good_r, good_r)  # nonpositive radii
    with pytest.raises(ValueError):
        Sampled(good_r[::-1], good_r)  # decreasing
    with pytest.raises(ValueError):
        Sampled(good_r, good_r, inner_exponents=(0.5, 0.5))  # degenerate pair
    with pytest.raises(ValueError):
        Sampled(good_r, good_r, inner_exponents=(0.1, 0.2, 0.3))


def test_power_validation_and_report_text():
    with pytest.raises(ValueError):
        Power(c=1.0, a=-0.5)
    rep = residual_limit(CandidateU(form=Power(c=2.0, a=0.0)), a_start=1.0)
    assert isinstance(rep, ResidualReport)
    text = str(rep)
    assert "point-source" in text


def test_residual_limit_argument_validation():
    cand = CandidateU(form=Power(c=1.0, a=1.0))
    with pytest.raises(ValueError):
        residual_limit(cand, a_start=1.0, ratio=1.5)
    with pytest.raises(ValueError):
        residual_limit(cand, a_start=1.0, n_steps=2)
    with pytest.raises(ValueError):
        sphere_residual(cand, -1.0)
