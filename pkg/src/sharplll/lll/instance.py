"""LLL instances over finite-domain variables with exact rational distributions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable, Mapping

from ..errors import CriterionError, InstanceError

Symbol = Any  # a JSON scalar: int or str


@dataclass(frozen=True)
class Variable:
    id: int
    domain: tuple
    probs: tuple  # Fraction per symbol, aligned with domain

    def __post_init__(self):
        if len(self.domain) == 0:
            raise InstanceError(f"variable {self.id} has an empty domain")
        if len(self.domain) != len(self.probs):
            raise InstanceError(f"variable {self.id}: {len(self.domain)} symbols but {len(self.probs)} probabilities")
        if len(set(self.domain)) != len(self.domain):
            raise InstanceError(f"variable {self.id} has repeated symbols")
        for s, q in zip(self.domain, self.probs):
            if not isinstance(q, Fraction):
                raise InstanceError(f"variable {self.id}: probability of {s!r} is not a Fraction")
            if q <= 0:
                raise InstanceError(f"variable {self.id}: probability of {s!r} must be positive, got {q}")
        if sum(self.probs) != 1:
            raise InstanceError(f"variable {self.id}: probabilities sum to {sum(self.probs)}, not 1")

    def index(self, symbol) -> int:
        try:
            return self.domain.index(symbol)
        except ValueError:
            raise InstanceError(f"symbol {symbol!r} is not in the domain of variable {self.id}") from None

    def prob(self, symbol) -> Fraction:
        return self.probs[self.index(symbol)]


@dataclass(frozen=True)
class Event:
    id: int
    vbl: tuple  # variable ids
    occurring: tuple  # assignments (tuples of symbols aligned with vbl), deduplicated

    def __post_init__(self):
        if len(set(self.vbl)) != len(self.vbl):
            raise InstanceError(f"event {self.id} lists a variable twice")


def _sorted_occurrences(event_id, vbl, occurring, variables) -> tuple:
    """Deduplicate and order occurrences by domain index so the order is canonical."""
    keyed = {}
    for occ in occurring:
        occ = tuple(occ)
        if len(occ) != len(vbl):
            raise InstanceError(f"event {event_id}: assignment {list(occ)} has the wrong length for vbl {list(vbl)}")
        key = tuple(variables[x].index(s) for x, s in zip(vbl, occ))
        keyed[key] = occ
    return tuple(keyed[k] for k in sorted(keyed))


@dataclass(frozen=True)
class GraphSummary:
    nodes: tuple  # event ids
    edges: tuple  # (u, v) with u < v
    hyperedges: dict  # variable id -> sorted tuple of event ids
    neighbors: dict  # event id -> sorted tuple of event ids
    d: int
    p: Fraction


class LLLInstance:
    """Immutable instance: variables, events and the derived dependency graph."""

    def __init__(self, variables: Iterable[Variable], events: Iterable[Event], meta: Mapping | None = None):
        vs = sorted(variables, key=lambda v: v.id)
        es = sorted(events, key=lambda e: e.id)
        self.variables: dict[int, Variable] = {}
        for v in vs:
            if v.id in self.variables:
                raise InstanceError(f"duplicate variable id {v.id}")
            self.variables[v.id] = v
        self.events: dict[int, Event] = {}
        for e in es:
            if e.id in self.events:
                raise InstanceError(f"duplicate event id {e.id}")
            for x in e.vbl:
                if x not in self.variables:
                    raise InstanceError(f"event {e.id} depends on unknown variable {x}")
            occ = _sorted_occurrences(e.id, e.vbl, e.occurring, self.variables)
            self.events[e.id] = Event(e.id, tuple(e.vbl), occ)
        self.meta = dict(meta or {})
        # occurrence tables in domain-index space, used by the fixing engine
        self.occ_index = {
            e.id: tuple(tuple(self.variables[x].index(s) for x, s in zip(e.vbl, occ)) for occ in e.occurring)
            for e in self.events.values()
        }
        self.graph = build_dependency_graph(self)

    @property
    def p(self) -> Fraction:
        return self.graph.p

    @property
    def d(self) -> int:
        return self.graph.d

    def event_probability(self, event_id: int) -> Fraction:
        return conditional_probability(self, event_id, {})

    def __repr__(self):
        return f"LLLInstance(variables={len(self.variables)}, events={len(self.events)}, p={self.p}, d={self.d})"


def build_dependency_graph(instance: LLLInstance) -> GraphSummary:
    """Edges between events sharing a variable, one hyperedge per variable, ``d`` and ``p``."""
    hyper: dict[int, list] = {x: [] for x in instance.variables}
    for e in instance.events.values():
        for x in e.vbl:
            hyper[x].append(e.id)
    hyperedges = {x: tuple(sorted(ids)) for x, ids in hyper.items()}
    nbrs: dict[int, set] = {e: set() for e in instance.events}
    for ids in hyperedges.values():
        for u, v in combinations(ids, 2):
            nbrs[u].add(v)
            nbrs[v].add(u)
    edges = tuple(sorted((u, v) for u in nbrs for v in nbrs[u] if u < v))
    neighbors = {u: tuple(sorted(s)) for u, s in nbrs.items()}
    d = max((len(s) for s in neighbors.values()), default=0)
    p = max((conditional_probability(instance, e, {}) for e in instance.events), default=Fraction(0))
    return GraphSummary(tuple(instance.events), edges, hyperedges, neighbors, d, p)


@dataclass(frozen=True)
class CriterionReport:
    p: Fraction
    d: int
    value: Fraction
    passed: bool


def check_criterion(instance: LLLInstance) -> CriterionReport:
    """Exact test of ``p * 2**d < 1``."""
    value = instance.p * 2 ** instance.d
    return CriterionReport(instance.p, instance.d, value, value < 1)


def require_criterion(instance: LLLInstance) -> None:
    rep = check_criterion(instance)
    if not rep.passed:
        raise CriterionError(f"p * 2^d = {rep.value} >= 1 (p = {rep.p}, d = {rep.d})")


def conditional_probability(instance: LLLInstance, event, fixed: Mapping) -> Fraction:
    """``P(E | fixed)`` by enumerating the occurrence table.

    Sums, over occurring assignments consistent with ``fixed``, the product of
    the probabilities of the variables that ``fixed`` leaves open.
    """
    e = instance.events[event.id if isinstance(event, Event) else event]
    total = Fraction(0)
    for occ in e.occurring:
        weight = Fraction(1)
        for x, s in zip(e.vbl, occ):
            if x in fixed:
                if fixed[x] != s:
                    weight = Fraction(0)
                    break
            else:
                weight *= instance.variables[x].prob(s)
        total += weight
    return total


def occurring_events(instance: LLLInstance, assignment: Mapping) -> list[int]:
    """Ids of events whose occurrence set contains the restriction of ``assignment``."""
    missing = [x for x in instance.variables if x not in assignment]
    if missing:
        raise InstanceError(f"assignment is partial; unassigned variables {missing[:10]}")
    out = []
    for e in instance.events.values():
        for x in e.vbl:
            instance.variables[x].index(assignment[x])
        restricted = tuple(assignment[x] for x in e.vbl)
        if restricted in set(e.occurring):
            out.append(e.id)
    return out


verify_assignment = occurring_events
