"""Sampling probe for convexity of the non-representable region."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import PreconditionError
from .oracle import boundary_height_r3, default_tol, is_representable

# half of the sampled points are pushed to within this relative distance of the boundary
NEAR_BOUNDARY = 0.02


@dataclass
class ProbeRow:
    lam: float
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    margin: float


@dataclass
class ProbeReport:
    r: int
    n_samples: int
    seed: int
    tol: float
    violations: int
    worst_margin: float
    rejected: int
    rows: list[ProbeRow] = field(default_factory=list)


def inside_margin(z) -> float:
    """Signed depth of ``z`` inside the representable set (negative outside).

    Ranks 2 and 3 use exact descriptions; higher ranks use the oracle margin.
    """
    z = np.asarray(z, dtype=float)
    r = z.size
    if np.any(z > 1):
        return float(1.0 - z.max())
    if r == 1:
        return float(1.0 - z[0])
    if r == 2:
        return float(1.0 - z[0] - z[1])
    if r == 3:
        # symmetric in the coordinates, so test every choice of height
        best = -np.inf
        for k in range(3):
            a, b = np.delete(z, k)
            if a + b > 1:
                best = max(best, 1.0 - a - b)
            else:
                best = max(best, boundary_height_r3(a, b) - z[k])
        return float(best)
    return is_representable(z, tol=1e-12).margin


def _sample_outside(r: int, rng: np.random.Generator, near: bool, max_tries: int = 10_000):
    for tries in range(1, max_tries + 1):
        u = rng.uniform(0.0, 1.0, size=r)
        if near:
            s = is_representable(u, tol=1e-12).scale
            if not np.isfinite(s):
                continue
            u = u * s * (1.0 + rng.uniform(0.0, NEAR_BOUNDARY))
            if np.any(u > 1):
                continue
        if inside_margin(u) < 0:
            return u, tries - 1
    raise PreconditionError("rejection sampler found no non-representable point")


def convexity_probe(r: int, n_samples: int, seed: int, tol: float | None = None,
                    keep_rows: bool = True) -> ProbeReport:
    """Test convex combinations of non-representable pairs.

    Draws ``x, y`` outside the representable set (half of them close to the
    boundary) and ``lam`` uniform in (0, 1); a violation is a combination
    lying inside the representable set by more than ``tol``.
    """
    if r < 2:
        raise PreconditionError("convexity_probe needs r >= 2")
    if n_samples < 1:
        raise PreconditionError("n_samples must be >= 1")
    if tol is None:
        tol = default_tol(r)
    rng = np.random.default_rng(seed)
    violations = 0
    rejected = 0
    worst = -np.inf
    rows = []
    for i in range(n_samples):
        near = i % 2 == 1
        x, rx = _sample_outside(r, rng, near)
        y, ry = _sample_outside(r, rng, near)
        rejected += rx + ry
        lam = float(rng.uniform(0.0, 1.0))
        z = lam * x + (1.0 - lam) * y
        m = inside_margin(z)
        worst = max(worst, m)
        if m > tol:
            violations += 1
        if keep_rows:
            rows.append(ProbeRow(lam, x, y, z, m))
    return ProbeReport(r, n_samples, seed, tol, violations, float(worst), rejected, rows)
