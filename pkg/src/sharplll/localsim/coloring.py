"""Round-counted 2-hop coloring in the LOCAL model.

Phase 1 is Linial-style polynomial color reduction on ``G^2``.  A color
``c < q**(k+1)`` is read as a polynomial ``P_c`` of degree ``<= k`` over
``F_q`` (its base-``q`` digits).  Two distinct polynomials agree on at most
``k`` points, so with ``q > k * Delta`` every node finds an ``x`` where its
polynomial differs from all neighbours' and takes the color ``x * q + P_c(x)``.
Each iteration costs one round and shrinks the palette to ``q**2``.

Phase 2 removes one color per round: every node holding color ``c`` moves to
the smallest color in ``[0, Delta]`` unused by its neighbours.  It sweeps the
fixed range ``U - 1, ..., Delta + 1`` with ``U = (smallest prime > 2 Delta)**2``,
which bounds every palette phase 1 can stop at, so the number of phase-2 rounds
depends on ``Delta`` only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..errors import PreconditionError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than ``n``."""
    q = max(n + 1, 2)
    while not is_prime(q):
        q += 1
    return q


def reduction_ceiling(delta: int) -> int:
    """Palette size below which phase 1 cannot shrink further: ``(next_prime(2 delta))**2``."""
    return next_prime(2 * delta) ** 2


def linial_parameters(m: int, delta: int) -> tuple[int, int]:
    """``(k, q)`` minimising ``q**2`` subject to ``q > k delta`` prime and ``q**(k+1) >= m``."""
    best = None
    k = 1
    while True:
        q = next_prime(k * delta)
        while q ** (k + 1) < m:
            q = next_prime(q)
        if best is None or q * q < best[1] ** 2:
            best = (k, q)
        # q grows at least linearly in k, so once k * delta exceeds the best q nothing improves
        if k * delta >= best[1] or k > 64:
            return best
        k += 1


def square_graph(neighbors: Mapping) -> dict:
    """Neighbourhoods in ``G^2``: nodes at distance 1 or 2, excluding the node itself."""
    out = {}
    for v, nv in neighbors.items():
        s = set(nv)
        for u in nv:
            s.update(neighbors[u])
        s.discard(v)
        out[v] = tuple(sorted(s))
    return out


@dataclass
class ColoringResult:
    colors: dict
    delta: int  # degree bound of G^2 used for the schedule
    palette: int  # delta + 1
    linial_rounds: int
    reduction_rounds: int
    messages: list = field(default_factory=list)

    @property
    def rounds(self) -> int:
        return self.linial_rounds + self.reduction_rounds

    def classes(self) -> dict:
        out: dict = {}
        for v, c in sorted(self.colors.items()):
            out.setdefault(c, []).append(v)
        return out


def _poly_eval(colors: np.ndarray, k: int, q: int) -> np.ndarray:
    """``table[i, x] = P_{colors[i]}(x) mod q`` for ``x`` in ``0..q-1``."""
    digits = np.empty((colors.size, k + 1), dtype=np.int64)
    c = colors.copy()
    for j in range(k + 1):
        digits[:, j] = c % q
        c //= q
    xs = np.arange(q, dtype=np.int64)
    table = np.zeros((colors.size, q), dtype=np.int64)
    for j in range(k, -1, -1):  # Horner
        table = (table * xs[None, :] + digits[:, j:j + 1]) % q
    return table


def two_hop_coloring(neighbors: Mapping, ids: Mapping, max_degree: int | None = None) -> ColoringResult:
    """Proper coloring of ``G^2`` with colors in ``[0, Delta]``.

    ``ids`` must be distinct non-negative integers.  ``max_degree`` is the
    degree bound of ``G^2`` the nodes agree on; it defaults to the measured
    ``Delta(G^2)`` and may not be smaller.
    """
    nodes = sorted(neighbors)
    if not nodes:
        return ColoringResult({}, 0, 1, 0, 0, [])
    id_list = [ids[v] for v in nodes]
    if len(set(id_list)) != len(id_list):
        raise PreconditionError("LOCAL identifiers must be distinct")
    if any((not isinstance(i, (int, np.integer))) or i < 0 for i in id_list):
        raise PreconditionError("LOCAL identifiers must be non-negative integers")
    sq = square_graph(neighbors)
    measured = max(len(s) for s in sq.values())
    delta = measured if max_degree is None else int(max_degree)
    if delta < measured:
        raise PreconditionError(f"degree bound {delta} is below the measured Delta(G^2) = {measured}")
    pos = {v: i for i, v in enumerate(nodes)}
    nb_idx = [np.array([pos[u] for u in sq[v]], dtype=np.int64) for v in nodes]
    sends = sum(len(s) for s in sq.values())

    colors = np.array(id_list, dtype=np.int64)
    m = int(colors.max()) + 1
    messages = []
    linial = 0
    while True:
        k, q = linial_parameters(m, delta)
        if q * q >= m:
            break
        table = _poly_eval(colors, k, q)
        new = np.empty_like(colors)
        for i in range(len(nodes)):
            clash = np.zeros(q, dtype=bool)
            if nb_idx[i].size:
                clash = np.any(table[nb_idx[i]] == table[i][None, :], axis=0)
            x = int(np.flatnonzero(~clash)[0])
            new[i] = x * q + table[i, x]
        colors = new
        m = q * q
        linial += 1
        messages.append(sends)

    ceiling = max(reduction_ceiling(delta), m)
    reduction = 0
    by_color: dict = {}
    for i, c in enumerate(colors):
        by_color.setdefault(int(c), []).append(i)
    for c in range(ceiling - 1, delta, -1):
        movers = by_color.pop(c, [])
        for i in movers:
            used = {int(colors[j]) for j in nb_idx[i]}
            free = next(x for x in range(delta + 1) if x not in used)
            colors[i] = free
            by_color.setdefault(free, []).append(i)
        reduction += 1
        messages.append(sum(len(nb_idx[i]) for i in movers))
    result = {v: int(colors[pos[v]]) for v in nodes}
    return ColoringResult(result, delta, delta + 1, linial, reduction, messages)


def is_proper_two_hop(neighbors: Mapping, colors: Mapping) -> bool:
    sq = square_graph(neighbors)
    return all(colors[v] != colors[u] for v in sq for u in sq[v])
