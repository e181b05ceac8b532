import numpy as np
import pytest

from sharplll.errors import PreconditionError
from sharplll.geometry import convexity_probe, inside_margin


def test_rank_two_has_no_violations():
    rep = convexity_probe(2, 300, seed=1)
    assert rep.violations == 0 and rep.worst_margin <= rep.tol


def test_equal_endpoints_stay_outside():
    # x = y makes every combination the point itself
    x = np.array([0.3, 0.3, 0.3])
    assert inside_margin(x) < 0
    for lam in (0.0, 0.4, 1.0):
        assert inside_margin(lam * x + (1 - lam) * x) < 0


def test_inside_margin_signs():
    assert inside_margin([0.25, 0.25, 0.25]) == pytest.approx(0.0, abs=1e-12)
    assert inside_margin([0.1, 0.1, 0.1]) > 0
    assert inside_margin([0.6, 0.6, 0.0]) < 0
    assert inside_margin([0.1, 0.1, 0.1, 0.1]) > 0


def test_same_seed_same_report():
    a = convexity_probe(3, 50, seed=7)
    b = convexity_probe(3, 50, seed=7)
    assert a.worst_margin == b.worst_margin
    assert all(np.array_equal(p.z, q.z) for p, q in zip(a.rows, b.rows))


def test_samples_are_outside():
    rep = convexity_probe(4, 20, seed=3)
    assert all(inside_margin(row.x) < 0 and inside_margin(row.y) < 0 for row in rep.rows)


def test_bad_arguments():
    with pytest.raises(PreconditionError):
        convexity_probe(1, 10, 0)
    with pytest.raises(PreconditionError):
        convexity_probe(3, 0, 0)
