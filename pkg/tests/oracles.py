"""Independent brute-force oracles used to freeze and cross-check library values.

Nothing here imports the package.  Membership is decided by maximising
``min_i(generated_i - t_i)`` over tight generators (``a_ji = 1 - a_ij``): a
coarse grid picks starts, then SLSQP polishes the epigraph form.
"""
from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import minimize, minimize_scalar


def tight_weights(r: int, upper) -> np.ndarray:
    w = np.ones((r, r))
    k = 0
    for i in range(r):
        for j in range(i + 1, r):
            w[i, j] = upper[k]
            w[j, i] = 1.0 - upper[k]
            k += 1
    return w


def generated(r: int, upper) -> np.ndarray:
    return np.prod(tight_weights(r, upper), axis=1)


def _batch_generated(r: int, uppers: np.ndarray) -> np.ndarray:
    """Row products for a batch of upper-triangle parameter vectors."""
    n = uppers.shape[0]
    out = np.ones((n, r))
    k = 0
    for i in range(r):
        for j in range(i + 1, r):
            out[:, i] *= uppers[:, k]
            out[:, j] *= 1.0 - uppers[:, k]
            k += 1
    return out


def _starts(r: int, rng: np.random.Generator) -> np.ndarray:
    m = r * (r - 1) // 2
    if r <= 3:
        axis = np.linspace(0.0, 1.0, 17)
    elif r == 4:
        axis = np.linspace(0.0, 1.0, 9)
    else:
        return rng.uniform(size=(20000, m))
    return np.array(list(itertools.product(axis, repeat=m)))


def _polish(t: np.ndarray, u0: np.ndarray) -> float:
    """Local solve of ``max s`` s.t. ``generated_i(u) - t_i >= s`` from ``u0`` (SLSQP)."""
    r = t.size
    m = u0.size

    def cons(z):
        return generated(r, z[:m]) - t - z[m]

    s0 = float(np.min(generated(r, u0) - t))
    res = minimize(lambda z: -z[m], np.append(u0, s0), method="SLSQP",
                   bounds=[(0.0, 1.0)] * m + [(-1.0, 1.0)],
                   constraints=[{"type": "ineq", "fun": cons}],
                   options={"ftol": 1e-15, "maxiter": 500})
    u = np.clip(res.x[:m], 0.0, 1.0)
    # score the clipped point honestly rather than trusting the solver's s
    return max(s0, float(np.min(generated(r, u) - t)))


def brute_margin(t, n_starts: int = 8, seed: int = 0) -> float:
    """Best ``min_i(generated_i - t_i)`` found over tight generators.

    Grid or random starts are ranked by their margin and the best few are
    polished with SLSQP on the epigraph form, which copes with the kinks of
    the max-min objective that stall coordinate-wise search.
    """
    t = np.asarray(t, dtype=float)
    r = t.size
    if r == 1:
        return 1.0 - t[0]
    rng = np.random.default_rng(seed)
    starts = _starts(r, rng)
    scores = np.min(_batch_generated(r, starts) - t[None, :], axis=1)
    return max(_polish(t, starts[idx].copy()) for idx in np.argsort(-scores)[:n_starts])


def coordinate_margin(t, n_starts: int = 6, sweeps: int = 40, seed: int = 0) -> float:
    """Multi-start coordinate-wise bounded scalar ascent on the raw max-min objective."""
    t = np.asarray(t, dtype=float)
    r = t.size
    m = r * (r - 1) // 2
    rng = np.random.default_rng(seed)
    starts = _starts(r, rng)
    scores = np.min(_batch_generated(r, starts) - t[None, :], axis=1)
    best = -math.inf
    for idx in np.argsort(-scores)[:n_starts]:
        u = starts[idx].copy()
        cur = float(np.min(generated(r, u) - t))
        for _ in range(sweeps):
            before = cur
            for k in range(m):
                def neg(val, k=k):
                    v = u.copy()
                    v[k] = val
                    return -float(np.min(generated(r, v) - t))
                res = minimize_scalar(neg, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-13})
                if -res.fun >= cur:
                    u[k] = res.x
                    cur = -res.fun
            if cur - before < 1e-15:
                break
        best = max(best, cur)
    return best


def brute_is_representable(t, tol: float = 1e-6) -> bool:
    t = np.asarray(t, dtype=float)
    if np.any(t > 1):
        return False
    return brute_margin(t) >= -tol


def brute_height(prefix, k: int, tol: float = 1e-7) -> float:
    """Largest coordinate ``k`` with the others fixed, by bisection on the brute-force margin."""
    prefix = list(prefix)
    lo, hi = 0.0, 1.0
    if brute_margin(np.insert(prefix, k, 0.0)) < -tol:
        return 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if brute_margin(np.insert(prefix, k, mid)) >= -1e-12:
            lo = mid
        else:
            hi = mid
    return lo


def f3(x: float, y: float) -> float:
    """Unscaled rank-3 boundary ``4 + (xy - 2x - 2y - sqrt(xy(4-x)(4-y)))/2``."""
    return 4.0 + 0.5 * (x * y - 2 * x - 2 * y - math.sqrt(x * y * (4 - x) * (4 - y)))


def f3_scaled(a: float, b: float) -> float:
    if a + b >= 1:
        return 0.0
    return max(0.0, f3(4 * a, 4 * b) / 4)


def lagrange_generator(lam) -> np.ndarray:
    """``a_ij = lam_i / (lam_i + lam_j)`` (diagonal 1)."""
    lam = np.asarray(lam, dtype=float)
    w = lam[:, None] / (lam[:, None] + lam[None, :])
    np.fill_diagonal(w, 1.0)
    return w
