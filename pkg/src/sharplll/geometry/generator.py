"""Generators, the tuples they generate, and the perturbations that move them.

Indices are 0-based.  A generator of rank ``r`` is stored as an ``r x r``
matrix ``w`` with ``w[i, j]`` the weight on the ordered pair ``(i, j)``; the
diagonal is fixed to 1 so that row products give the generated tuple.
"""
from __future__ import annotations

import numpy as np

from ..errors import DegenerateGeneratorError, GeneratorError, PreconditionError

# float slack accepted when validating user supplied pair sums
PAIR_SLACK = 1e-12


class Generator:
    """Pair weights ``a_ij`` with ``0 <= a_ij <= 1`` and ``a_ij + a_ji <= 1``."""

    __slots__ = ("_w",)

    def __init__(self, weights, *, validate: bool = True):
        w = np.array(weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise GeneratorError(f"weights must be a square matrix, got shape {w.shape}")
        np.fill_diagonal(w, 1.0)
        if validate:
            _validate(w)
        w.setflags(write=False)
        self._w = w

    @classmethod
    def from_pairs(cls, r: int, pairs: dict) -> "Generator":
        """Build from ``{(i, j): a_ij}``; missing ordered pairs default to 0."""
        w = np.zeros((r, r))
        for (i, j), value in pairs.items():
            if i == j:
                raise GeneratorError(f"pair ({i}, {j}) is on the diagonal")
            w[i, j] = value
        return cls(w)

    @classmethod
    def constant(cls, r: int, value: float) -> "Generator":
        return cls(np.full((r, r), value))

    @classmethod
    def tight(cls, r: int, upper) -> "Generator":
        """Tight generator from the ``r(r-1)/2`` weights ``a_ij``, ``i < j``.

        The reverse weights are ``a_ji = 1 - a_ij``.
        """
        iu, ju = np.triu_indices(r, 1)
        upper = np.asarray(upper, dtype=float)
        if upper.shape != iu.shape:
            raise GeneratorError(f"expected {iu.size} upper weights, got {upper.size}")
        w = np.zeros((r, r))
        w[iu, ju] = upper
        w[ju, iu] = 1.0 - upper
        return cls(w)

    @property
    def r(self) -> int:
        return self._w.shape[0]

    @property
    def weights(self) -> np.ndarray:
        return self._w

    def __getitem__(self, ij):
        i, j = ij
        if i == j:
            raise KeyError(ij)
        return float(self._w[i, j])

    def is_nonzero(self) -> bool:
        off = ~np.eye(self.r, dtype=bool)
        return bool(np.all(self._w[off] > 0))

    def pair_sums(self) -> np.ndarray:
        return self._w + self._w.T

    def __eq__(self, other):
        return isinstance(other, Generator) and np.array_equal(self._w, other._w)

    def __hash__(self):
        return hash(self._w.tobytes())

    def __repr__(self):
        return f"Generator(r={self.r}, weights={self._w.tolist()})"

    def to_json(self) -> list:
        return self._w.tolist()


def _validate(w: np.ndarray) -> None:
    r = w.shape[0]
    if not np.all(np.isfinite(w)):
        raise GeneratorError("generator weights must be finite")
    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            if w[i, j] < 0 or w[i, j] > 1:
                raise GeneratorError(f"weight a[{i},{j}] = {w[i, j]!r} is outside [0, 1]")
            if j > i and w[i, j] + w[j, i] > 1 + PAIR_SLACK:
                raise GeneratorError(
                    f"pair ({i}, {j}) sums to {w[i, j] + w[j, i]!r} > 1"
                )


def generate(g: Generator) -> np.ndarray:
    """Tuple generated by ``g``: ``a_i = prod_{j != i} a_ij``."""
    return np.prod(g.weights, axis=1)


def sanitize_pairs(w: np.ndarray) -> np.ndarray:
    """Nudge weights down by ulps until every pair sum is <= 1 in float arithmetic."""
    w = np.array(w, dtype=float)
    np.fill_diagonal(w, 1.0)
    r = w.shape[0]
    for i in range(r):
        for j in range(i + 1, r):
            while w[i, j] + w[j, i] > 1.0:
                if w[i, j] >= w[j, i]:
                    w[i, j] = np.nextafter(w[i, j], 0.0)
                else:
                    w[j, i] = np.nextafter(w[j, i], 0.0)
    return w


def dominates(a, b) -> bool:
    """Component-wise ``a >= b`` in plain float arithmetic."""
    return bool(np.all(np.asarray(a) >= np.asarray(b)))


def shrink_to(g: Generator, target) -> Generator:
    """Generator of ``target`` obtained from a generator of a dominating tuple.

    For each ``i`` one weight of row ``i`` is scaled by ``target_i / a_i``,
    which keeps every pair sum within budget.
    """
    a = generate(g)
    target = np.asarray(target, dtype=float)
    if target.shape != a.shape:
        raise PreconditionError(f"target has rank {target.size}, generator has rank {g.r}")
    if np.any(target < 0) or not dominates(a, target):
        raise PreconditionError("target must satisfy 0 <= target <= generate(g)")
    w = g.weights.copy()
    r = g.r
    for i in range(r):
        if r == 1 or a[i] == 0:
            continue
        j = 1 if i == 0 else 0
        w[i, j] *= target[i] / a[i]
    return Generator(w)


def admissible_trade_bound(g: Generator) -> float:
    """``min_{i != j} min(a_ij, 1 - a_ij)``; trades need ``delta`` strictly below it."""
    off = ~np.eye(g.r, dtype=bool)
    vals = g.weights[off]
    return float(np.min(np.minimum(vals, 1.0 - vals)))


def trade_epsilon(t, g: Generator, k: int, delta: float) -> np.ndarray:
    """Shift ``delta`` of weight away from coordinate ``k`` on every pair touching ``k``.

    ``b_kj = a_kj - delta`` and ``b_jk = a_jk + delta``; all other weights are
    unchanged, so pair sums are preserved.  The returned tuple lowers
    coordinate ``k`` and raises every other coordinate.
    """
    t = np.asarray(t, dtype=float)
    if t.shape != (g.r,):
        raise PreconditionError(f"tuple has rank {t.size}, generator has rank {g.r}")
    if not 0 <= k < g.r:
        raise PreconditionError(f"index {k} out of range for rank {g.r}")
    if not g.is_nonzero():
        raise DegenerateGeneratorError("trade_epsilon needs a non-zero generator")
    if not np.allclose(generate(g), t, rtol=1e-9, atol=1e-12):
        raise PreconditionError("g does not generate t")
    bound = admissible_trade_bound(g)
    if not 0 <= delta < bound:
        raise PreconditionError(f"delta={delta!r} outside the admissible interval [0, {bound!r})")
    if delta == 0:
        return t.copy()
    w = g.weights.copy()
    others = [j for j in range(g.r) if j != k]
    w[k, others] -= delta
    w[others, k] += delta
    return generate(Generator(w))


def strong_dominator(t, g: Generator, max_halvings: int = 200):
    """Strict dominator of ``t`` from a generator of a weak dominator.

    ``generate(g)`` must weakly dominate ``t`` with ``0 < t < 1``.  Applies
    :func:`trade_epsilon` at a coordinate where the dominator is strictly
    larger, halving ``delta`` until every coordinate is strictly above ``t``.
    Returns ``(tuple, generator)``.
    """
    t = np.asarray(t, dtype=float)
    a = generate(g)
    if np.any(t <= 0) or np.any(t >= 1):
        raise PreconditionError("strong domination needs all coordinates in (0, 1)")
    gap = a - t
    if np.any(gap < 0) or not np.any(gap > 0):
        raise PreconditionError("generate(g) does not weakly dominate t")
    k = int(np.argmax(gap))
    delta = admissible_trade_bound(g) / 2
    others = [j for j in range(g.r) if j != k]
    for _ in range(max_halvings):
        w = g.weights.copy()
        w[k, others] -= delta
        w[others, k] += delta
        cand = Generator(w)
        b = generate(cand)
        if np.all(b > t):
            return b, cand
        delta /= 2
    raise PreconditionError("no admissible trade found; dominator gap below float resolution")
