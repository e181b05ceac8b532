import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharplll.errors import DegenerateGeneratorError, GeneratorError, PreconditionError
from sharplll.geometry import (
    Generator,
    admissible_trade_bound,
    generate,
    is_representable,
    shrink_to,
    strong_dominator,
    trade_epsilon,
)
from strategies import generators


def test_generate_constant_half():
    assert np.allclose(generate(Generator.constant(3, 0.5)), [0.25, 0.25, 0.25])


def test_generate_rank_two_single_factors():
    g = Generator.from_pairs(2, {(0, 1): 0.3, (1, 0): 0.7})
    assert generate(g).tolist() == [0.3, 0.7]


def test_zero_weight_kills_coordinate():
    w = np.full((3, 3), 0.5)
    w[0, 1] = 0.0
    assert np.allclose(generate(Generator(w)), [0.0, 0.25, 0.25])


def test_validation_names_pair():
    with pytest.raises(GeneratorError, match=r"pair \(0, 1\)"):
        Generator.from_pairs(2, {(0, 1): 0.6, (1, 0): 0.6})
    with pytest.raises(GeneratorError, match=r"a\[0,1\]"):
        Generator.from_pairs(2, {(0, 1): -0.1})
    with pytest.raises(GeneratorError):
        Generator.from_pairs(2, {(0, 0): 0.5})


def test_generator_is_read_only():
    g = Generator.constant(3, 0.5)
    with pytest.raises(ValueError):
        g.weights[0, 1] = 0.9


def test_tight_constructor():
    g = Generator.tight(3, [0.2, 0.3, 0.4])
    assert np.allclose(g.pair_sums()[~np.eye(3, dtype=bool)], 1.0)


@given(generators(r_min=1, r_max=6))
def test_generated_tuple_in_unit_cube(g):
    a = generate(g)
    assert np.all(a >= 0) and np.all(a <= 1)


@given(generators(), st.data())
def test_downward_closure(g, data):
    a = generate(g)
    frac = np.array(data.draw(st.lists(st.floats(0, 1), min_size=g.r, max_size=g.r)))
    target = a * frac
    h = shrink_to(g, target)
    assert np.allclose(generate(h), target, rtol=1e-12, atol=1e-15)
    assert is_representable(target).member


def test_trade_example():
    g = Generator.constant(3, 0.5)
    out = trade_epsilon([0.25] * 3, g, 0, 0.1)
    assert np.allclose(out, [0.16, 0.3, 0.3])


def test_trade_zero_delta_is_identity():
    t = np.array([0.25] * 3)
    assert np.array_equal(trade_epsilon(t, Generator.constant(3, 0.5), 1, 0.0), t)


def test_trade_range_error_reports_interval():
    with pytest.raises(PreconditionError, match=r"\[0, 0.5\)"):
        trade_epsilon([0.25] * 3, Generator.constant(3, 0.5), 0, 0.5)


def test_trade_needs_nonzero_generator():
    w = np.full((3, 3), 0.5)
    w[0, 1] = 0.0
    g = Generator(w)
    with pytest.raises(DegenerateGeneratorError):
        trade_epsilon(generate(g), g, 0, 0.01)


@given(generators(nonzero=True), st.data())
def test_trade_moves_coordinates_the_right_way(g, data):
    t = generate(g)
    k = data.draw(st.integers(0, g.r - 1))
    bound = admissible_trade_bound(g)
    delta = data.draw(st.floats(bound * 1e-3, bound * 0.999))
    out = trade_epsilon(t, g, k, delta)
    assert out[k] < t[k]
    assert all(out[i] > t[i] for i in range(g.r) if i != k)
    assert is_representable(out).member


def test_strong_dominator_example():
    g = Generator.constant(3, 0.5)
    t = np.array([0.2, 0.25, 0.25])
    b, h = strong_dominator(t, g)
    assert np.all(b > t)
    assert is_representable(b).member
    assert np.array_equal(generate(h), b)


def test_strong_dominator_rejects_non_dominated():
    with pytest.raises(PreconditionError):
        strong_dominator([0.3, 0.25, 0.25], Generator.constant(3, 0.5))
