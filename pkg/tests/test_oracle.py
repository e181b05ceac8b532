import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_height, brute_margin, coordinate_margin, f3_scaled, lagrange_generator
from sharplll.errors import DomainError, PreconditionError
from sharplll.geometry import (
    boundary_height_r3,
    boundary_point,
    dominates,
    generate,
    is_maximal,
    is_representable,
    maximal_from_multipliers,
    maximize_coordinate,
)
from strategies import generators, multipliers

# (0.26, 0.26) height frozen from the unscaled closed form: f(1.04, 1.04) / 4
HEIGHT_026 = 0.2304


def test_constant_quarter_is_member_with_half_witness():
    res = is_representable([0.25, 0.25, 0.25])
    assert res.member
    assert np.allclose(res.witness.weights[~np.eye(3, dtype=bool)], 0.5)
    assert dominates(generate(res.witness), [0.25] * 3)


def test_026_is_not_member():
    res = is_representable([0.26, 0.26, 0.26])
    assert not res.member and res.witness is None
    assert brute_margin([0.26] * 3) < 0
    assert f3_scaled(0.26, 0.26) < 0.26


def test_rank_two_budget():
    assert not is_representable([0.5, 0.6]).member
    assert is_representable([0.3, 0.7]).member


def test_coordinate_above_one_rejected_immediately():
    res = is_representable([1.2, 0.0, 0.0])
    assert not res.member and res.iterations == 0


def test_rank_one_convention():
    assert is_representable([1.0]).member
    assert not is_representable([1.0 + 1e-12]).member


def test_zero_tuple_member():
    assert is_representable([0.0, 0.0, 0.0, 0.0]).member


def test_invalid_inputs():
    with pytest.raises(PreconditionError):
        is_representable([-0.1, 0.2])
    with pytest.raises(PreconditionError):
        is_representable([0.1, 0.2], tol=0)
    with pytest.raises(PreconditionError):
        is_representable([])


@pytest.mark.parametrize("a,b,expected", [(0.25, 0.25, 0.25), (0.5, 0.5, 0.0), (0.26, 0.26, HEIGHT_026)])
def test_closed_form_spot_values(a, b, expected):
    assert boundary_height_r3(a, b) == pytest.approx(expected, abs=1e-12)
    assert maximize_coordinate([a, b], 2) == pytest.approx(expected, abs=1e-9)


def test_closed_form_matches_independent_formula():
    for a in np.linspace(0, 1, 21):
        for b in np.linspace(0, 1, 21):
            assert boundary_height_r3(a, b) == pytest.approx(f3_scaled(a, b), abs=1e-12)


def test_closed_form_domain_error():
    with pytest.raises(DomainError):
        boundary_height_r3(1.1, 0.2)
    with pytest.raises(DomainError):
        boundary_height_r3(0.2, -0.01)


def test_closed_form_zero_beyond_budget():
    # the raw formula is positive at (0.6, 0.6) but nothing is representable there
    assert boundary_height_r3(0.6, 0.6) == 0.0
    assert not is_representable([0.6, 0.6, 0.0]).member


def test_maximize_coordinate_examples():
    assert maximize_coordinate([0.25, 0.25], 2) == pytest.approx(0.25, abs=1e-12)
    assert maximize_coordinate([0.5, 0.5], 2) == 0.0
    assert maximize_coordinate([0.4], 1) == pytest.approx(0.6, abs=1e-12)


def test_maximize_coordinate_rank_four_vs_brute_force():
    prefix = [0.1, 0.15, 0.12]
    assert maximize_coordinate(prefix, 3) == pytest.approx(brute_height(prefix, 3), abs=1e-6)


@pytest.mark.parametrize("t", [[0.2, 0.3, 0.1], [0.1, 0.1, 0.35], [0.3, 0.3, 0.2], [0.05, 0.6, 0.1],
                               [0.1, 0.1, 0.1, 0.1], [0.2, 0.1, 0.05, 0.2], [0.15, 0.15, 0.15, 0.15]])
def test_membership_agrees_with_brute_force(t):
    res = is_representable(t)
    brute = brute_margin(t)
    assert res.member == (brute >= -1e-9)
    # the brute force maximises the margin, the library certifies a generator
    assert res.margin <= brute + 1e-9


def test_is_maximal_examples():
    assert is_maximal([0.25, 0.25, 0.25])
    assert not is_maximal([0.2, 0.2, 0.2])
    assert is_maximal([0.5, 0.5, 0.0])
    with pytest.raises(PreconditionError):
        is_maximal([0.3, 0.3, 0.3])


@given(generators(r_min=1, r_max=6))
def test_soundness_on_generated_tuples(g):
    t = generate(g)
    res = is_representable(t)
    assert res.member
    assert np.all(generate(res.witness) >= t - 1e-12)


@given(st.floats(0, 1), st.floats(0, 1))
def test_rank_two_exactness(a, b):
    assert is_representable([a, b]).member == (a + b <= 1 + 1e-9)


@settings(max_examples=40)
@given(st.floats(0, 0.5), st.floats(0, 0.5))
def test_rank_three_height_matches_closed_form(a, b):
    assert maximize_coordinate([a, b], 2) == pytest.approx(boundary_height_r3(a, b), abs=1e-9)


@given(multipliers())
def test_multiplier_tuples_are_maximal(lam):
    t, g = maximal_from_multipliers(lam)
    assert np.allclose(g.weights, lagrange_generator(lam), atol=1e-15)
    for k in range(t.size):
        assert maximize_coordinate(np.delete(t, k), k) <= t[k] + 1e-9


@given(multipliers(r_min=2, r_max=4), st.integers(0, 3))
def test_boundary_point_is_generated(lam, k):
    t, _ = maximal_from_multipliers(lam)
    k = k % t.size
    b, g = boundary_point(np.delete(t, k), k)
    assert np.array_equal(b, generate(g))
    assert b[k] == pytest.approx(t[k], rel=1e-8, abs=1e-12)


def test_height_and_membership_consistent():
    h = maximize_coordinate([0.2, 0.1, 0.15], 1)
    assert is_representable([0.2, h - 1e-9, 0.1, 0.15], tol=1e-12).member
    assert not is_representable([0.2, h + 1e-6, 0.1, 0.15], tol=1e-12).member
    assert math.isfinite(h)


def test_exact_boundary_point_beats_coordinate_search():
    # coordinate-wise ascent stalls at a kink of the max-min objective here,
    # while the point is generated exactly
    t, _ = boundary_point([0.1, 0.15, 0.12], 3)
    assert is_representable(t, tol=1e-12).member
    assert brute_margin(t) > -1e-9
    assert coordinate_margin(t) < -1e-4


@given(st.lists(st.sampled_from([0.0, 1e-300, 5e-311, 1e-40, 0.2, 0.5]), min_size=2, max_size=5))
def test_extreme_coordinates_are_finite(t):
    res = is_representable(t)
    assert np.isfinite(res.margin)
    if res.member:
        assert np.all(generate(res.witness) >= np.asarray(t) - 1e-12)
