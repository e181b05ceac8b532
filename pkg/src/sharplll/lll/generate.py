"""Seeded generators of criterion-passing LLL instances.

Families:

* ``shared-variable-random``: variables of random rank shared by random
  events, degree capped at ``d``; each event occurs on a random set of
  assignments filled up to ``0.95 / 2**d``.
* ``k-sat-like``: clauses over ``k`` uniform variables forbidding one value
  each, so ``p = q**-k``; ``k`` is the smallest value passing the criterion.
* ``star-hyperedge``: clusters of ``max_rank`` events around a hub
  variable, chained by rank-2 link variables, plus private variables.
* ``ring``: the circulant graph ``C_n(1, 2)``.  Variable ``i`` is shared by
  events ``i, i+1, i+2`` (mod n) with domain 4; an event occurs iff its three
  variables are all 0.  So ``p = 1/64`` and ``d = 4`` for ``n >= 5``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from ..errors import GenerationError, InstanceError
from .instance import Event, LLLInstance, Variable, check_criterion

FAMILIES = ("shared-variable-random", "k-sat-like", "star-hyperedge", "ring")
CRITERION_TARGET = Fraction(95, 100)
MAX_RETRIES = 20
# cap on the product space enumerated when filling an event's occurrence set
MAX_TABLE = 4096


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int
    max_rank: int = 3
    max_domain: int = 3
    d: int = 4
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InstanceError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.n < 1:
            raise InstanceError("n must be >= 1")
        if self.max_rank < 1 or self.max_domain < 2 or self.d < 0:
            raise InstanceError("need max_rank >= 1, max_domain >= 2 and d >= 0")


def _random_dist(rng, size: int) -> tuple:
    w = rng.integers(1, 10, size=size)
    total = int(w.sum())
    return tuple(Fraction(int(x), total) for x in w)


class _Builder:
    """Hypergraph under construction with a running degree count."""

    def __init__(self, n: int, dmax: int):
        self.n = n
        self.dmax = dmax
        self.nbrs = [set() for _ in range(n)]
        self.members: list[list[int]] = []  # events per variable
        self.vbl: list[list[int]] = [[] for _ in range(n)]

    def fits(self, events) -> bool:
        events = list(events)
        for e in events:
            new = {u for u in events if u != e} - self.nbrs[e]
            if len(self.nbrs[e]) + len(new) > self.dmax:
                return False
        return True

    def add(self, events) -> int:
        events = sorted(events)
        x = len(self.members)
        self.members.append(events)
        for e in events:
            self.vbl[e].append(x)
            self.nbrs[e].update(u for u in events if u != e)
        return x

    def degree(self) -> int:
        return max((len(s) for s in self.nbrs), default=0)


def _fill_events(rng, b: _Builder, variables: dict, target_of) -> list[Event]:
    """Occurrence sets filled greedily in random order up to ``target_of(d)``."""
    target = target_of(b.degree())
    events = []
    for e in range(b.n):
        vbl = b.vbl[e]
        sizes = [len(variables[x].domain) for x in vbl]
        space = math.prod(sizes)
        if space > MAX_TABLE:
            raise GenerationError(f"event {e} has a product space of {space} assignments")
        rows = list(product(*[range(s) for s in sizes]))
        order = rng.permutation(len(rows))
        total = Fraction(0)
        occ = []
        for i in order:
            row = rows[int(i)]
            w = math.prod((variables[x].probs[k] for x, k in zip(vbl, row)), start=Fraction(1))
            if total + w <= target:
                total += w
                occ.append(tuple(variables[x].domain[k] for x, k in zip(vbl, row)))
        events.append(Event(e, tuple(vbl), tuple(occ)))
    return events


def _shared_variable_random(rng, spec: GenSpec):
    b = _Builder(spec.n, spec.d)
    max_rank = min(spec.max_rank, spec.n)
    # variables per event, kept small enough that occurrence tables stay enumerable
    cap = 4
    while cap > 1 and spec.max_domain ** (cap + 1) > MAX_TABLE:
        cap -= 1
    for _ in range(3 * spec.n):
        r = int(rng.integers(2, max_rank + 1)) if max_rank >= 2 else 1
        centre = int(rng.integers(spec.n))
        # prefer nearby events so the graph has local structure
        pool = [(centre + off) % spec.n for off in range(-spec.d - 2, spec.d + 3)]
        cand = sorted(set(int(c) for c in rng.choice(pool, size=min(r, len(set(pool))), replace=False)))
        if len(cand) >= 2 and all(len(b.vbl[e]) < cap for e in cand) and b.fits(cand):
            b.add(cand)
    for e in range(spec.n):
        if not b.vbl[e]:
            b.add([e])
    variables = {}
    for x, ev in enumerate(b.members):
        q = int(rng.integers(2, spec.max_domain + 1))
        variables[x] = Variable(x, tuple(range(q)), _random_dist(rng, q))
    events = _fill_events(rng, b, variables, lambda d: CRITERION_TARGET / 2 ** d)
    return variables, events


def _k_sat_like(rng, spec: GenSpec):
    q = spec.max_domain
    dmax = spec.d
    # smallest k with q**-k * 2**dmax <= 0.95
    k = 1
    while Fraction(1, q ** k) * 2 ** dmax > CRITERION_TARGET:
        k += 1
    b = _Builder(spec.n, dmax)
    for e in range(spec.n):
        chosen: list[int] = []
        for _ in range(k):
            reused = None
            if rng.uniform() < 0.6 and b.members:
                for x in rng.permutation(len(b.members)):
                    x = int(x)
                    ev = b.members[x]
                    if x in chosen or len(ev) >= spec.max_rank:
                        continue
                    if b.fits(ev + [e]):
                        reused = x
                        break
            if reused is None:
                reused = b.add([e])
            else:
                ev = b.members[reused]
                ev.append(e)
                b.vbl[e].append(reused)
                for u in ev:
                    b.nbrs[u].update(w for w in ev if w != u)
            chosen.append(reused)
    variables = {x: Variable(x, tuple(range(q)), tuple(Fraction(1, q) for _ in range(q)))
                 for x in range(len(b.members))}
    events = []
    for e in range(spec.n):
        forbidden = tuple(int(rng.integers(q)) for _ in b.vbl[e])
        events.append(Event(e, tuple(b.vbl[e]), (forbidden,)))
    return variables, events


def _star_hyperedge(rng, spec: GenSpec):
    s = max(1, min(spec.max_rank, spec.n, spec.d + 1))
    b = _Builder(spec.n, spec.d)
    clusters = [list(range(i, min(i + s, spec.n))) for i in range(0, spec.n, s)]
    for c in clusters:
        b.add(c)
    for a, c in zip(clusters, clusters[1:]):
        pair = [a[-1], c[0]]
        if len(set(pair)) == 2 and b.fits(pair):
            b.add(pair)
    for e in range(spec.n):
        b.add([e])
    variables = {}
    for x in range(len(b.members)):
        q = int(rng.integers(2, spec.max_domain + 1))
        variables[x] = Variable(x, tuple(range(q)), _random_dist(rng, q))
    events = _fill_events(rng, b, variables, lambda d: CRITERION_TARGET / 2 ** d)
    return variables, events


def _ring(rng, spec: GenSpec):
    n = spec.n
    if n < 5:
        raise GenerationError("the ring family needs n >= 5")
    uniform = tuple(Fraction(1, 4) for _ in range(4))
    variables = {i: Variable(i, (0, 1, 2, 3), uniform) for i in range(n)}
    events = []
    for e in range(n):
        vbl = tuple(sorted(((e - 2) % n, (e - 1) % n, e)))
        events.append(Event(e, vbl, ((0, 0, 0),)))
    return variables, events


_BUILDERS = {
    "shared-variable-random": _shared_variable_random,
    "k-sat-like": _k_sat_like,
    "star-hyperedge": _star_hyperedge,
    "ring": _ring,
}


def generate_instance(spec: GenSpec, max_retries: int = MAX_RETRIES) -> LLLInstance:
    """Build a criterion-passing instance; retries with derived seeds before giving up."""
    for attempt in range(max_retries):
        rng = np.random.default_rng([spec.seed, attempt])
        variables, events = _BUILDERS[spec.family](rng, spec)
        meta = {"family": spec.family, "seed": spec.seed, "params": asdict(spec)}
        inst = LLLInstance(variables.values(), events, meta)
        if check_criterion(inst).passed:
            return inst
    raise GenerationError(
        f"no criterion-passing {spec.family} instance after {max_retries} attempts; "
        "try a smaller d, a larger domain or a smaller max rank"
    )
