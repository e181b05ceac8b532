"""Membership oracle for representable tuples.

Only tight generators matter (raising a weight never lowers a coordinate), so
with ``a_ji = 1 - a_ij`` the log of every generated coordinate is a concave
function of the ``r(r-1)/2`` free weights.  Deciding membership is therefore a
concave max-min problem.  Its Lagrangian dual has a closed-form inner
maximiser: for multipliers ``lam > 0`` the best generator is

    a_ij = lam_i / (lam_i + lam_j)

and the dual function is smooth and convex.  Both solvers below run a damped
Newton method on that dual.  Every dual iterate yields a valid generator
(a primal lower bound) and a dual value (an upper bound), so the answers come
with a two-sided certificate.

Two problems are solved:

* ray: the largest ``s`` such that ``s * t`` is representable
  (``t`` is representable iff ``s >= 1``);
* height: the largest coordinate ``k`` compatible with fixed other coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, PreconditionError
from .generator import Generator, generate, sanitize_pairs

TOL_CLOSED_FORM = 1e-9
TOL_SEARCH = 1e-6
MAX_NEWTON = 200
# positive coordinates below this are raised to it before solving; the dual
# multipliers scale like the coordinates and must stay well inside float range
COORD_FLOOR = 1e-30


def default_tol(r: int) -> float:
    return TOL_CLOSED_FORM if r <= 3 else TOL_SEARCH


@dataclass(frozen=True)
class OracleResult:
    member: bool
    witness: Generator | None
    # min_i (generated_i - t_i) for the best generator found
    margin: float
    iterations: int
    # largest s found with s * t dominated by the witness tuple (inf for the zero tuple)
    scale: float = field(default=math.inf)


def as_tuple(t) -> np.ndarray:
    arr = np.array(t, dtype=float).reshape(-1)
    if arr.size < 1:
        raise PreconditionError("a tuple needs rank >= 1")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise PreconditionError(f"tuple coordinates must be finite and >= 0, got {arr.tolist()}")
    return arr


# -- dual pieces --------------------------------------------------------------

def _log_pairs(lam: np.ndarray) -> np.ndarray:
    """``log(lam_i / (lam_i + lam_j))`` with a zero diagonal."""
    ll = np.log(lam)
    out = ll[:, None] - np.logaddexp(ll[:, None], ll[None, :])
    np.fill_diagonal(out, 0.0)
    return out


def _log_generated(lam: np.ndarray) -> np.ndarray:
    return _log_pairs(lam).sum(axis=1)


def _hessian(lam: np.ndarray) -> np.ndarray:
    s = lam[:, None] + lam[None, :]
    h = -1.0 / s
    diag = (lam[None, :] / (lam[:, None] * s))
    np.fill_diagonal(diag, 0.0)
    np.fill_diagonal(h, diag.sum(axis=1))
    return h


def pair_weights(lam) -> np.ndarray:
    """Generator weights ``lam_i / (lam_i + lam_j)`` (diagonal 1), pair sums <= 1 exactly."""
    lam = np.asarray(lam, dtype=float)
    w = np.exp(_log_pairs(lam))
    np.fill_diagonal(w, 1.0)
    return sanitize_pairs(w)


def _step_to_boundary(x: np.ndarray, d: np.ndarray) -> float:
    neg = d < 0
    if not np.any(neg):
        return 1.0
    return min(1.0, 0.95 * float(np.min(-x[neg] / d[neg])))


def _solve_ray(logt: np.ndarray, tol: float = 1e-14):
    """Minimise the dual over the simplex. Returns ``(lam, log_lower, log_upper, iters)``."""
    r = logt.size
    lam = np.exp(logt - logt.max())
    lam /= lam.sum()
    kkt = np.zeros((r + 1, r + 1))
    kkt[:r, r] = 1.0
    kkt[r, :r] = 1.0
    rhs = np.zeros(r + 1)
    it = 0
    for it in range(1, MAX_NEWTON + 1):
        g = _log_generated(lam) - logt
        dual = float(lam @ g)
        if g.max() - g.min() < tol:
            break
        kkt[:r, :r] = _hessian(lam)
        rhs[:r] = -g
        try:
            d = np.linalg.solve(kkt, rhs)[:r]
        except np.linalg.LinAlgError:
            break
        slope = float(g @ d)
        if slope >= 0:
            break
        step = _step_to_boundary(lam, d)
        while True:
            cand = lam + step * d
            cand /= cand.sum()
            cval = float(cand @ (_log_generated(cand) - logt))
            if cval <= dual + 1e-4 * step * slope + 1e-15 * (1.0 + abs(dual)) or step < 1e-14:
                break
            step *= 0.5
        lam = cand
    g = _log_generated(lam) - logt
    return lam, float(g.min()), float(lam @ g), it


def _solve_height(logt_rest: np.ndarray, tol: float = 1e-14):
    """Maximise the last coordinate with the others fixed.

    ``logt_rest`` holds log targets for indices ``0..m-1``; the free coordinate
    is index ``m`` with multiplier pinned to 1.  Returns ``(lam, iters)``.
    """
    m = logt_rest.size
    t_rest = np.exp(logt_rest)
    guess = max(1.0 - float(t_rest.sum()), 1e-3)
    lam = np.append(t_rest / guess, 1.0)

    def psi(lv):
        lp = _log_pairs(lv)
        return float(lv @ lp.sum(axis=1) - lv[:m] @ logt_rest)

    it = 0
    val = psi(lam)
    for it in range(1, MAX_NEWTON + 1):
        grad = _log_generated(lam)[:m] - logt_rest
        if np.max(np.abs(grad)) < tol:
            break
        hess = _hessian(lam)[:m, :m]
        try:
            d = -np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            break
        slope = float(grad @ d)
        if slope >= 0:
            break
        step = _step_to_boundary(lam[:m], d)
        while True:
            cand = lam.copy()
            cand[:m] += step * d
            cval = psi(cand)
            if cval <= val + 1e-4 * step * slope + 1e-15 * (1.0 + abs(val)) or step < 1e-14:
                break
            step *= 0.5
        lam, val = cand, cval
    return lam, it


def _embed(r: int, support: np.ndarray, sub: np.ndarray | None) -> Generator:
    """Full-rank generator: ``sub`` weights on ``support``, weight 1 from support to the rest."""
    w = np.full((r, r), 0.5)
    inside = np.zeros(r, dtype=bool)
    inside[support] = True
    w[np.ix_(inside, ~inside)] = 1.0
    w[np.ix_(~inside, inside)] = 0.0
    if sub is not None:
        w[np.ix_(support, support)] = sub
    np.fill_diagonal(w, 1.0)
    return Generator(sanitize_pairs(w), validate=False)


# -- public oracle ------------------------------------------------------------

def is_representable(t, tol: float | None = None) -> OracleResult:
    """Decide whether ``t`` is dominated by some generated tuple.

    ``member`` is ``margin >= -tol``; coordinates above 1 are rejected outright.
    """
    t = as_tuple(t)
    r = t.size
    if tol is None:
        tol = default_tol(r)
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    if np.any(t > 1):
        return OracleResult(False, None, float(1.0 - t.max()), 0, float(1.0 / t.max()))
    support = np.flatnonzero(t > 0)
    iters = 0
    if support.size <= 1:
        g = _embed(r, support, None)
    else:
        # raising a coordinate can only make membership harder, so a witness stays valid
        lam, _, _, iters = _solve_ray(np.log(np.maximum(t[support], COORD_FLOOR)))
        g = _embed(r, support, pair_weights(lam))
    gen = generate(g)
    margin = float(np.min(gen - t))
    with np.errstate(over="ignore"):
        scale = float(np.min(gen[support] / t[support])) if support.size else math.inf
    member = margin >= -tol
    return OracleResult(member, g if member else None, margin, iters, scale)


def boundary_height_r3(a: float, b: float) -> float:
    """Largest ``c`` with ``(a, b, c)`` representable, from the rank-3 closed form.

    Evaluated in the unscaled convention as ``f(4a, 4b) / 4`` with
    ``f(x, y) = 4 + (xy - 2x - 2y - sqrt(xy(4-x)(4-y))) / 2``.  For
    ``a + b >= 1`` no positive height exists and 0 is returned.
    """
    for name, v in (("a", a), ("b", b)):
        if not (0.0 <= v <= 1.0):
            raise DomainError(f"{name}={v!r} is outside [0, 1]")
    if a + b >= 1.0:
        return 0.0
    x, y = 4.0 * a, 4.0 * b
    rad = max(x * y * (4.0 - x) * (4.0 - y), 0.0)
    f = 4.0 + 0.5 * (x * y - 2.0 * x - 2.0 * y - math.sqrt(rad))
    return max(0.0, f / 4.0)


def _height_problem(prefix, k: int):
    prefix = as_tuple(prefix)
    r = prefix.size + 1
    if not 0 <= k < r:
        raise PreconditionError(f"index {k} out of range for rank {r}")
    full = np.insert(prefix, k, 0.0)
    return full, r


def _height_solution(full: np.ndarray, k: int):
    """``(height, generator)``; generator is None when no positive height exists."""
    r = full.size
    others = np.array([i for i in range(r) if i != k and full[i] > 0], dtype=int)
    if np.any(full > 1):
        return 0.0, None
    if others.size == 0:
        return 1.0, _embed(r, np.array([k]), None)
    if np.any(full[others] >= 1):
        return 0.0, None
    logs = np.log(np.maximum(full[others], COORD_FLOOR))
    if others.size >= 2:
        _, log_lo, log_hi, _ = _solve_ray(logs)
        if log_hi <= 1e-13:
            return 0.0, None
    lam, _ = _solve_height(logs)
    support = np.append(others, k)
    g = _embed(r, support, pair_weights(lam))
    return float(generate(g)[k]), g


def maximize_coordinate(prefix, k: int, tol: float = 1e-12) -> float:
    """Supremum of coordinate ``k`` over representable tuples extending ``prefix``.

    ``prefix`` lists the other ``r - 1`` coordinates in order; the result is
    inserted at position ``k``.  Returns 0 when no extension with a positive
    ``k``-th coordinate exists.  The Newton solve converges far below ``tol``.
    """
    full, _ = _height_problem(prefix, k)
    height, _ = _height_solution(full, k)
    return height


def boundary_point(prefix, k: int):
    """Maximal tuple above ``prefix`` in direction ``k`` and a generator of it.

    The tuple is ``generate(generator)``, so it is maximal by construction
    and agrees with ``prefix`` up to rounding.
    """
    full, _ = _height_problem(prefix, k)
    height, g = _height_solution(full, k)
    if g is None or height <= 0:
        raise PreconditionError("no boundary point with a positive coordinate above this prefix")
    return generate(g), g


def maximal_from_multipliers(lam):
    """Maximal tuple generated by ``a_ij = lam_i / (lam_i + lam_j)`` for ``lam > 0``.

    Such a generator maximises ``sum_i lam_i log a_i`` over all generators,
    so no generated tuple weakly dominates its output.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 1 or lam.size < 1 or np.any(lam <= 0) or not np.all(np.isfinite(lam)):
        raise PreconditionError("multipliers must be a finite positive vector")
    g = Generator(pair_weights(lam), validate=False)
    return generate(g), g


def is_maximal(t, tol: float | None = None) -> bool:
    """True iff no coordinate of ``t`` can be raised with the others held fixed."""
    t = as_tuple(t)
    if tol is None:
        tol = default_tol(t.size)
    res = is_representable(t, tol)
    if not res.member:
        raise PreconditionError("is_maximal needs a representable tuple")
    for k in range(t.size):
        if maximize_coordinate(np.delete(t, k), k) > t[k] + tol:
            return False
    return True
