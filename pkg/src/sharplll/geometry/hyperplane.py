"""Movement vectors and supporting hyperplanes at maximal tuples."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateGeneratorError, NotMaximalError, PreconditionError
from .generator import Generator, generate
from .oracle import as_tuple

ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True)
class MovementVector:
    i: int
    j: int
    vec: np.ndarray


@dataclass(frozen=True)
class Hyperplane:
    """``{x : h . x = b}`` with ``h >= 0`` scaled so that ``max(h) == 1``."""

    h: np.ndarray
    b: float

    def offset(self, x) -> float:
        return float(self.h @ np.asarray(x, dtype=float) - self.b)


def _check_pair(t, g: Generator) -> np.ndarray:
    t = as_tuple(t)
    if t.size != g.r:
        raise PreconditionError(f"tuple has rank {t.size}, generator has rank {g.r}")
    if not g.is_nonzero():
        raise DegenerateGeneratorError("movement vectors need a non-zero generator")
    if not np.allclose(generate(g), t, rtol=1e-9, atol=1e-15):
        raise PreconditionError("g does not generate t")
    return t


def _partials(g: Generator) -> np.ndarray:
    """``P[i, j] = prod_{l not in {i, j}} a_il``, i.e. ``a_i / a_ij`` without dividing."""
    w = g.weights
    r = g.r
    p = np.empty((r, r))
    for i in range(r):
        for j in range(r):
            p[i, j] = np.prod(np.delete(w[i], [i, j])) if i != j else 0.0
    return p


def movement_matrix(t, g: Generator) -> np.ndarray:
    """Array ``W`` of shape ``(r, r, r)`` with ``W[i, j]`` the vector ``w_ij``.

    ``w_ij`` is ``a_i / a_ij`` at ``i``, ``-a_j / a_ji`` at ``j`` and 0 elsewhere;
    ``W[i, i]`` is zero.
    """
    _check_pair(t, g)
    p = _partials(g)
    r = g.r
    out = np.zeros((r, r, r))
    for i in range(r):
        for j in range(r):
            if i != j:
                out[i, j, i] = p[i, j]
                out[i, j, j] = -p[j, i]
    return out


def movement_vectors(t, g: Generator) -> list[MovementVector]:
    w = movement_matrix(t, g)
    r = g.r
    return [MovementVector(i, j, w[i, j]) for i in range(r) for j in range(r) if i != j]


def supporting_hyperplane(t, g: Generator, tol: float = ORTHOGONALITY_TOL) -> Hyperplane:
    """Hyperplane through ``t`` spanned by the movement vectors.

    The normal is the null vector of ``w_01, ..., w_0(r-1)``, in closed form
    ``h_j / h_0 = P[0, j] / P[j, 0]``.  Raises
    :class:`NotMaximalError` when some pair sum is below 1 (a weight could be
    raised, so ``t`` is not maximal), some ``P[i, j]`` vanishes, or some
    other ``w_ij`` leaves the hyperplane.
    """
    t = _check_pair(t, g)
    r = g.r
    slack = 1.0 - g.pair_sums()[~np.eye(r, dtype=bool)]
    if r > 1 and slack.max() > 1e-9:
        raise NotMaximalError(f"generator is not tight (largest pair slack {slack.max():.3e}), so t is not maximal")
    w = movement_matrix(t, g)
    if r == 1:
        return Hyperplane(np.ones(1), float(t[0]))
    # w_0j only touches coordinates 0 and j, so h . w_0j = 0 fixes h_j / h_0
    # exactly; a ratio keeps full relative accuracy in tiny components
    p = _partials(g)
    if np.any(p[1:, 0] <= 0) or np.any(p[0, 1:] <= 0):
        raise NotMaximalError(f"movement vectors w_0j have numerical rank below {r - 1}")
    h = np.concatenate(([1.0], p[0, 1:] / p[1:, 0]))
    h = h / np.max(h)
    residual = np.abs(np.einsum("ijk,k->ij", w, h))
    if residual.max() > tol:
        raise NotMaximalError(f"movement vectors leave the hyperplane (max |h.w_ij| = {residual.max():.3e})")
    return Hyperplane(h, float(h @ t))


def decompose_in_hyperplane(t, g: Generator, target, tol: float = 1e-9) -> np.ndarray:
    """Coefficients ``alpha`` with ``target = t + sum alpha_ij w_ij``, sign-coherent per coordinate.

    Repair loop: starting from ``b = t``, pick ``k`` with ``b_k < target_k`` and
    ``l`` with ``b_l > target_l`` and move along ``w_kl`` by the largest step
    that overshoots neither coordinate.  Every iteration settles at least one
    coordinate, so at most ``r - 1`` iterations run.  Returns an ``r x r``
    array with ``alpha[i, j]`` the coefficient of ``w_ij``.
    """
    t = _check_pair(t, g)
    target = np.asarray(target, dtype=float).reshape(-1)
    r = g.r
    if target.shape != (r,):
        raise PreconditionError(f"target has rank {target.size}, expected {r}")
    plane = supporting_hyperplane(t, g)
    if abs(plane.offset(target)) > tol:
        raise PreconditionError(f"target is {plane.offset(target):.3e} off the hyperplane")
    # snap onto the plane by a uniform shift, the smallest max-norm correction;
    # otherwise the off-plane residue lands on one coordinate divided by its h_k
    target = target - plane.offset(target) / plane.h.sum()
    p = _partials(g)
    alpha = np.zeros((r, r))
    b = t.copy()
    # coordinates closer than a few ulps count as settled
    settled = 8 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(target))))
    for _ in range(r):
        diff = target - b
        up = np.flatnonzero(diff > settled)
        down = np.flatnonzero(diff < -settled)
        if up.size == 0 and down.size == 0:
            return alpha
        if up.size == 0 or down.size == 0:
            # only rounding residue along the normal remains
            if np.all(np.abs(diff) <= tol):
                return alpha
            raise PreconditionError("target is not reachable inside the hyperplane")
        k, l = int(up[0]), int(down[0])
        rise = p[k, l]   # (w_kl)_k
        fall = p[l, k]   # (w_lk)_l = -(w_kl)_l
        to_k = diff[k] / rise
        to_l = -diff[l] / fall
        step = min(to_k, to_l)
        alpha[k, l] += step
        b[k] += step * rise
        b[l] -= step * fall
        if to_k <= to_l:
            b[k] = target[k]
        if to_l <= to_k:
            b[l] = target[l]
    diff = target - b
    assert np.all(np.abs(diff) <= tol), "repair loop did not settle within r iterations"
    return alpha


def combine(t, g: Generator, alpha) -> np.ndarray:
    """``t + sum_{i != j} alpha_ij w_ij``."""
    w = movement_matrix(t, g)
    return as_tuple(t) + np.einsum("ij,ijk->k", np.asarray(alpha, float), w)


def sign_coherent(t, g: Generator, alpha, tol: float = 0.0) -> bool:
    """Per coordinate, all products ``alpha_ij (w_ij)_k`` share one sign."""
    w = movement_matrix(t, g)
    contrib = np.asarray(alpha, float)[:, :, None] * w
    flat = contrib.reshape(-1, g.r)
    pos = np.any(flat > tol, axis=0)
    neg = np.any(flat < -tol, axis=0)
    return not bool(np.any(pos & neg))


def local_representability_radius(t, g: Generator) -> float:
    """Radius around a maximal ``t`` within which the hyperplane stays representable.

    ``min(eps1, eps2)`` where ``c = max_i 1/t_i``,
    ``eps2 = min_k t_k / (2^r (2c)^r)`` bounds the higher-order terms and
    ``eps1 = min_{i != j} min(a_ij, 1 - a_ij) / (2c)`` keeps the perturbed
    generator inside ``[0, 1]``.
    """
    t = _check_pair(t, g)
    r = g.r
    c = float(np.max(1.0 / t))
    eps2 = float(np.min(t)) / (2.0 ** r * (2.0 * c) ** r)
    off = ~np.eye(r, dtype=bool)
    vals = g.weights[off]
    eps1 = float(np.min(np.minimum(vals, 1.0 - vals))) / (2.0 * c)
    return min(eps1, eps2)


def hyperplane_witness(t, g: Generator, target, tol: float = 1e-9) -> Generator:
    """Generator ``a_ij + alpha_ij - alpha_ji`` built from the sign-coherent decomposition.

    For ``target`` on the hyperplane within :func:`local_representability_radius`
    of ``t`` the result generates a tuple dominating ``target``.
    """
    alpha = decompose_in_hyperplane(t, g, target, tol=tol)
    w = g.weights + alpha - alpha.T
    np.fill_diagonal(w, 1.0)
    return Generator(w)
