"""Indicial exponents and origin admissibility bands."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radialbc import (
    FallToCenterError,
    InverseSquare,
    OriginClass,
    UnsupportedClassError,
    admissibility_table,
    origin_class,
    solve_indicial,
)
from radialbc.indicial import (
    REGIME_BOTH_AMBIGUOUS,
    REGIME_FALL,
    REGIME_L2_ONLY,
    REGIME_UNIQUE,
)
from radialbc.potentials import REGULAR, TRANSITIVE_SINGULAR


def _origin(two_m_V0: float, mass: float = 1.0) -> OriginClass:
    if two_m_V0 == 0.0:
        return OriginClass(kind=REGULAR)
    return OriginClass(kind=TRANSITIVE_SINGULAR, V0=two_m_V0 / (2.0 * mass))


def test_zero_potential_exponents_are_exact_integers():
    for l in range(11):
        rep = solve_indicial(l, 1.0, OriginClass(kind=REGULAR))
        assert rep.a_plus == l + 1
        assert rep.a_minus == -l
        assert rep.P == l + 0.5


def test_roots_match_polynomial_solver():
    # independent oracle: the companion-matrix root finder on
    # a^2 - a - (l(l+1) - 2mV0) = 0
    rng = np.random.default_rng(20240817)
    for _ in range(100):
        l = int(rng.integers(0, 5))
        two_m_V0 = float(rng.uniform(-6.0, (l + 0.5) ** 2 - 1e-6))
        rep = solve_indicial(l, 1.0, _origin(two_m_V0))
        roots = np.sort(np.roots([1.0, -1.0, -(l * (l + 1) - two_m_V0)]))
        assert rep.a_minus == pytest.approx(roots[0], abs=1e-10)
        assert rep.a_plus == pytest.approx(roots[1], abs=1e-10)


@given(
    l=st.integers(min_value=0, max_value=6),
    x=st.floats(min_value=-30.0, max_value=30.0, allow_nan=False),
)
@settings(max_examples=200, deadline=None)
def test_vieta_identities(l, x):
    two_m_V0 = min(x, (l + 0.5) ** 2 - 1e-9)
    rep = solve_indicial(l, 1.0, _origin(two_m_V0))
    assert rep.a_plus + rep.a_minus == pytest.approx(1.0, abs=1e-12)
    assert rep.a_plus * rep.a_minus == pytest.approx(
        two_m_V0 - l * (l + 1), abs=1e-11 * (1 + abs(two_m_V0))
    )


@given(st.floats(min_value=-10.0, max_value=0.2499), st.floats(min_value=0.0, max_value=5.0))
@settings(max_examples=100, deadline=None)
def test_P_decreases_with_attraction(base, bump):
    # more attractive inverse-square core (larger 2mV0) pulls P down
    r1 = solve_indicial(0, 1.0, _origin(base))
    r2 = solve_indicial(0, 1.0, _origin(min(base + bump, 0.2499)))
    assert r2.P <= r1.P + 1e-15


def test_admissibility_band_edges():
    # P = 1/2 edge: both-criteria flag flips exactly there
    eps = 1e-9
    l = 0
    at_half = (l + 0.5) ** 2 - 0.25  # 2mV0 giving P = 1/2
    below = solve_indicial(l, 1.0, _origin(at_half + eps))   # P slightly < 1/2
    above = solve_indicial(l, 1.0, _origin(at_half - eps))   # P slightly > 1/2
    assert below.minus_bc and below.minus_l2
    assert not above.minus_bc and above.minus_l2

    # P = 1 edge: square-integrability of the minus branch flips
    at_one = (l + 0.5) ** 2 - 1.0
    below = solve_indicial(l, 1.0, _origin(at_one + eps))    # P slightly < 1
    above = solve_indicial(l, 1.0, _origin(at_one - eps))    # P slightly > 1
    assert below.minus_l2 and not below.minus_bc
    assert not above.minus_l2


def test_regime_labels():
    l = 0
    assert solve_indicial(l, 1.0, _origin(0.2)).regime == REGIME_BOTH_AMBIGUOUS
    assert solve_indicial(l, 1.0, _origin(-0.5)).regime == REGIME_L2_ONLY
    assert solve_indicial(l, 1.0, _origin(-2.0)).regime == REGIME_UNIQUE
    assert solve_indicial(l, 1.0, _origin(0.3)).regime == REGIME_FALL


def test_fall_to_center_report():
    rep = solve_indicial(0, 1.0, _origin(0.26))
    assert rep.fall_to_center
    assert rep.P is None
    assert not rep.minus_l2 and not rep.minus_bc


def test_degenerate_double_root():
    rep = solve_indicial(0, 1.0, _origin(0.25))
    assert rep.degenerate
    assert rep.P == 0.0
    assert rep.a_plus == rep.a_minus == 0.5
    # the logarithmic partner violates neither criterion at P = 0
    assert rep.minus_l2 and rep.minus_bc


def test_plus_branch_always_admissible():
    for two_m_V0 in (-8.0, -1.0, 0.0, 0.2, 0.2499):
        rep = solve_indicial(0, 1.0, _origin(two_m_V0))
        assert rep.plus_l2 and rep.plus_bc


def test_strongly_singular_rejected():
    from radialbc import PowerLaw

    with pytest.raises(UnsupportedClassError):
        solve_indicial(0, 1.0, origin_class(PowerLaw(coeff=-1.0, exponent=2.5)))


def test_mass_scales_strength_not_geometry():
    # P depends on 2mV0; doubling mass at fixed V0 doubles the pull
    oc = OriginClass(kind=TRANSITIVE_SINGULAR, V0=0.05)
    r1 = solve_indicial(0, 1.0, oc)
    r2 = solve_indicial(0, 2.0, oc)
    assert r1.two_m_V0 == pytest.approx(0.1)
    assert r2.two_m_V0 == pytest.approx(0.2)
    assert r2.P < r1.P


def test_table_preserves_grid_order_within_each_l():
    grid = [0.1, -1.0, 0.05]  # V0 values, not yet scaled by 2m
    rows = admissibility_table(1, 1.0, grid)
    assert [r.l for r in rows] == [0, 0, 0, 1, 1, 1]
    assert [r.two_m_V0 for r in rows[:3]] == pytest.approx([0.2, -2.0, 0.1])


def test_inverse_square_potential_connects_to_classifier():
    rep = solve_indicial(0, 1.0, origin_class(InverseSquare(g=-0.08)))
    assert rep.P == pytest.approx(0.3, abs=1e-15)


def test_fall_to_center_blocks_solver_construction():
    from radialbc import RadialProblem

    with pytest.raises(FallToCenterError):
        RadialProblem(mass=1.0, l=0, potential=InverseSquare(g=-0.2))
