"""Property P* state and the invariant-preserving variable-fixing step.

Edge values are stored per endpoint: ``phi[(v, u)]`` is the value of the
dependency edge ``{u, v}`` held by ``v``.  The two conditions checked are

1. ``phi[(v, u)] + phi[(u, v)] <= 2`` for every edge, and
2. ``P(E_v | fixed) <= p * prod_u phi[(v, u)]`` for every event ``v``.

Fixing a variable ``X`` with hyperedge ``v_0 < ... < v_{r-1}`` picks the first
symbol whose requirement tuple is representable and writes twice the witness
weights onto the skeleton: ``phi[(v_i, v_j)] = 2 * a_ij``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from ..errors import InvariantCorruption, TheoremViolation
from ..geometry.generator import Generator, dominates, generate
from ..geometry.oracle import default_tol, is_representable
from .instance import LLLInstance, conditional_probability, require_criterion, verify_assignment

PSTAR_SLACK = 1e-7
# extra height asked of the oracle when its first witness falls short in float arithmetic
WITNESS_INFLATION = 1e-9
# last-resort acceptance of a witness that misses the requirement by at most this much
WITNESS_SHORTFALL = 1e-9


class PStarState:
    """Edge values, the partial assignment and cached conditional probabilities.

    ``cond[v]`` is ``P(E_v | fixed)`` and ``alive[v]`` the occurrence rows of
    ``E_v`` (domain indices) still consistent with ``fixed``.  A state may be a
    partial view holding only the entries of a few events.
    """

    def __init__(self, instance: LLLInstance, phi: dict, fixed: dict, cond: dict, alive: dict):
        self.instance = instance
        self.phi = phi
        self.fixed = fixed
        self.cond = cond
        self.alive = alive

    @classmethod
    def initial(cls, instance: LLLInstance) -> "PStarState":
        nbrs = instance.graph.neighbors
        phi = {(v, u): 1.0 for v in nbrs for u in nbrs[v]}
        cond = {e: conditional_probability(instance, e, {}) for e in instance.events}
        alive = {e: list(rows) for e, rows in instance.occ_index.items()}
        return cls(instance, phi, {}, cond, alive)

    def copy(self) -> "PStarState":
        return PStarState(self.instance, dict(self.phi), dict(self.fixed), dict(self.cond),
                          {e: list(r) for e, r in self.alive.items()})

    def view(self, nodes: Iterable[int]) -> "PStarState":
        """Copy of the entries owned by ``nodes``: their edge values, caches and variables."""
        inst = self.instance
        nodes = set(nodes)
        phi = {(v, u): self.phi[(v, u)] for v in nodes for u in inst.graph.neighbors[v]}
        vars_ = {x for v in nodes for x in inst.events[v].vbl}
        fixed = {x: self.fixed[x] for x in vars_ if x in self.fixed}
        cond = {v: self.cond[v] for v in nodes}
        alive = {v: list(self.alive[v]) for v in nodes}
        return PStarState(inst, phi, fixed, cond, alive)

    def phi_product(self, v: int, exclude: Iterable[int] = ()) -> float:
        skip = set(exclude)
        out = 1.0
        for u in self.instance.graph.neighbors[v]:
            if u not in skip:
                out *= self.phi[(v, u)]
        return out


@dataclass
class PStarReport:
    passed: bool
    worst_slack: float
    # (condition number, location, slack) for every violated constraint
    failures: list = field(default_factory=list)


def check_pstar(state: PStarState, nodes: Iterable[int] | None = None, slack: float = PSTAR_SLACK) -> PStarReport:
    """Evaluate both conditions, on all events or only around ``nodes``."""
    inst = state.instance
    nbrs = inst.graph.neighbors
    nodes = list(inst.events) if nodes is None else sorted(set(nodes))
    p = float(inst.p)
    worst = np.inf
    failures = []
    seen = set()
    for v in nodes:
        for u in nbrs[v]:
            key = (min(u, v), max(u, v))
            if key in seen:
                continue
            seen.add(key)
            s = 2.0 - (state.phi[(v, u)] + state.phi[(u, v)])
            worst = min(worst, s)
            if s < -slack:
                failures.append((1, key, s))
        s = p * state.phi_product(v) - float(state.cond[v])
        worst = min(worst, s)
        if s < -slack:
            failures.append((2, v, s))
    return PStarReport(not failures, float(worst), failures)


def symbol_conditionals(state: PStarState, x: int) -> dict:
    """``{v: [P(E_v | fixed, X = s) for s in domain]}`` for each endpoint ``v`` of ``x``.

    Uses the cached consistent rows, so the cost is one pass over them.
    """
    inst = state.instance
    var = inst.variables[x]
    out = {}
    for v in inst.graph.hyperedges[x]:
        ev = inst.events[v]
        pos = ev.vbl.index(x)
        probs = [None if y in state.fixed else inst.variables[y].probs for y in ev.vbl]
        bucket = [Fraction(0)] * len(var.domain)
        for row in state.alive[v]:
            w = Fraction(1)
            for j, pr in enumerate(probs):
                if j != pos and pr is not None:
                    w *= pr[row[j]]
            bucket[row[pos]] += w
        out[v] = bucket
    return out


def _requirement(state: PStarState, x: int, conds: dict, k: int) -> np.ndarray:
    inst = state.instance
    ends = inst.graph.hyperedges[x]
    r = len(ends)
    scale = 2.0 ** (r - 1)
    p = float(inst.p)
    t = np.empty(r)
    for i, v in enumerate(ends):
        c = conds[v][k]
        denom = p * state.phi_product(v, exclude=ends)
        if denom <= 0:
            if c > 0:
                raise InvariantCorruption(
                    f"event {v}: conditional probability {c} > 0 but its non-skeleton bound is 0")
            t[i] = 0.0
        else:
            t[i] = float(c) / denom / scale
    return t


def requirement_tuple(state: PStarState, x: int, symbol) -> np.ndarray:
    """Scaled requirement tuple of ``X = symbol`` over the endpoints of ``X`` (sorted by id)."""
    if x in state.fixed:
        raise InvariantCorruption(f"variable {x} is already fixed")
    k = state.instance.variables[x].index(symbol)
    return _requirement(state, x, symbol_conditionals(state, x), k)


@dataclass
class FixStep:
    variable: int
    symbol: object
    endpoints: tuple
    # requirement tuple per domain symbol, in domain order
    tuples: list
    witness: Generator | None
    # "exact", "inflated", "shortfall" or "free" (variable in no event)
    tier: str
    # conditional probabilities before the step and per symbol after it
    before: dict
    after: dict
    # assignment restricted to the variables of the endpoints, before the step
    fixed_before: dict


def _exact_witness(t: np.ndarray):
    r = t.size
    res = is_representable(t, tol=default_tol(r))
    if res.member and dominates(generate(res.witness), t):
        return res.witness, "exact"
    lifted = t + WITNESS_INFLATION
    if np.all(lifted <= 1.0):
        res = is_representable(lifted, tol=default_tol(r))
        if res.member and dominates(generate(res.witness), t):
            return res.witness, "inflated"
    return None, None


def _close_witness(t: np.ndarray):
    if np.any(t > 1.0 + WITNESS_SHORTFALL):
        return None
    res = is_representable(np.minimum(t, 1.0), tol=WITNESS_SHORTFALL)
    if res.member and np.all(generate(res.witness) >= t - WITNESS_SHORTFALL):
        return res.witness
    return None


def fix_variable(state: PStarState, x: int) -> FixStep:
    """Fix ``x`` to the first symbol with a representable requirement tuple; mutates ``state``."""
    inst = state.instance
    if x in state.fixed:
        raise InvariantCorruption(f"variable {x} is already fixed")
    var = inst.variables[x]
    ends = inst.graph.hyperedges[x]
    fixed_before = {y: state.fixed[y] for v in ends for y in inst.events[v].vbl if y in state.fixed}
    if not ends:
        state.fixed[x] = var.domain[0]
        return FixStep(x, var.domain[0], (), [], None, "free", {}, {}, fixed_before)

    conds = symbol_conditionals(state, x)
    tuples = [_requirement(state, x, conds, k) for k in range(len(var.domain))]
    choice = witness = tier = None
    for k, t in enumerate(tuples):
        witness, tier = _exact_witness(t)
        if witness is not None:
            choice = k
            break
    if choice is None:
        for k, t in enumerate(tuples):
            witness = _close_witness(t)
            if witness is not None:
                choice, tier = k, "shortfall"
                break
    if choice is None:
        margins = [is_representable(t, tol=default_tol(t.size)).margin if np.all(t <= 1) else float(1 - t.max())
                   for t in tuples]
        raise TheoremViolation(
            f"no symbol of variable {x} has a representable requirement tuple",
            {
                "variable": x,
                "endpoints": list(ends),
                "domain": list(var.domain),
                "tuples": [t.tolist() for t in tuples],
                "margins": margins,
                "conditionals": {v: [str(c) for c in conds[v]] for v in ends},
                "skeleton_phi": {f"{v},{u}": state.phi[(v, u)] for v in ends for u in ends if u != v},
                "fixed": dict(fixed_before),
            },
        )

    w = witness.weights
    for i, v in enumerate(ends):
        for j, u in enumerate(ends):
            if i != j:
                state.phi[(v, u)] = 2.0 * float(w[i, j])
    before = {v: state.cond[v] for v in ends}
    after = {var.domain[k]: {v: conds[v][k] for v in ends} for k in range(len(var.domain))}
    for v in ends:
        pos = inst.events[v].vbl.index(x)
        state.alive[v] = [row for row in state.alive[v] if row[pos] == choice]
        state.cond[v] = conds[v][choice]
    symbol = var.domain[choice]
    state.fixed[x] = symbol
    return FixStep(x, symbol, tuple(ends), tuples, witness, tier, before, after, fixed_before)


def total_probability_holds(instance: LLLInstance, step: FixStep) -> bool:
    """``sum_s P(X = s) P(E_v | fixed, X = s) == P(E_v | fixed)`` exactly, for every endpoint.

    The right side is recomputed from the occurrence table, independently of
    the cached values used during the step.
    """
    var = instance.variables[step.variable]
    for v in step.endpoints:
        lhs = sum((q * step.after[s][v] for s, q in zip(var.domain, var.probs)), Fraction(0))
        if lhs != conditional_probability(instance, v, step.fixed_before):
            return False
    return True


def run_sequential(instance: LLLInstance, order: Iterable[int] | None = None, *,
                   on_step: Callable[[PStarState, FixStep], None] | None = None,
                   force: bool = False) -> dict:
    """Fix every variable in ``order`` (default: increasing id) and return the assignment."""
    if not force:
        require_criterion(instance)
    order = list(instance.variables) if order is None else list(order)
    if sorted(order) != sorted(instance.variables):
        raise ValueError("order must be a permutation of the variable ids")
    state = PStarState.initial(instance)
    for x in order:
        step = fix_variable(state, x)
        if on_step is not None:
            on_step(state, step)
    return dict(sorted(state.fixed.items()))


__all__ = [
    "PSTAR_SLACK",
    "FixStep",
    "PStarReport",
    "PStarState",
    "check_pstar",
    "fix_variable",
    "requirement_tuple",
    "run_sequential",
    "symbol_conditionals",
    "total_probability_holds",
    "verify_assignment",
]
