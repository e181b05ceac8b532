"""Color-class parallel variable fixing in the LOCAL model.

Each event is a node.  After a 2-hop coloring, colors are processed one at
a time, three rounds each:

1. collect: every node of the class receives the edge values, cached
   conditionals and assignments owned by its neighbours;
2. fix: the node fixes its unfixed incident variables, in id order, on its
   private copy of that view (no communication);
3. write back: the rewritten values are sent to their owners.

Write-backs of one class are merged in LOCAL-identifier order.  A write
landing on state that another node of the same class read aborts the run.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Mapping

from ..errors import InvariantCorruption, IsolationViolation
from ..lll.fileio import node_ids
from ..lll.fixing import FixStep, PStarState, check_pstar, fix_variable
from ..lll.instance import LLLInstance, require_criterion
from .coloring import ColoringResult, two_hop_coloring

ROUNDS_PER_COLOR = 3


@dataclass
class RoundLog:
    coloring_rounds: int
    fixing_rounds: int
    colors_used: int  # palette size; every palette color gets its three rounds
    colors_present: int  # colors actually held by some node
    linial_rounds: int
    reduction_rounds: int
    messages: list = field(default_factory=list)  # per round, coloring rounds first
    transcript: list = field(default_factory=list)  # [color, node, variable, symbol] per fix

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def closed_neighborhood(instance: LLLInstance, v: int) -> tuple:
    return tuple(sorted((v,) + instance.graph.neighbors[v]))


def write_owners(instance: LLLInstance, v: int) -> set:
    """Events whose state ``v`` may rewrite: endpoints of the variables of ``v``."""
    out = set()
    for x in instance.events[v].vbl:
        out.update(instance.graph.hyperedges[x])
    return out


def isolation_check(classes: Mapping, instance: LLLInstance) -> bool:
    """True iff no node writes state that a different node of its class reads.

    Node ``v`` reads everything owned by its closed neighbourhood and writes
    only state owned by endpoints of its variables.
    """
    for members in classes.values():
        readers: dict = {}
        for v in members:
            for u in closed_neighborhood(instance, v):
                readers.setdefault(u, set()).add(v)
        for v in members:
            for u in write_owners(instance, v):
                if readers.get(u, set()) - {v}:
                    return False
    return True


def run_local(instance: LLLInstance, ids: Mapping | None = None, *, force: bool = False,
              coloring: Callable[..., ColoringResult] = two_hop_coloring,
              on_class: Callable[[int, PStarState], None] | None = None,
              on_step: Callable[[int, FixStep], None] | None = None,
              check: bool = True) -> tuple[dict, RoundLog]:
    """Run the color-class fixing algorithm; returns the assignment and its round log.

    The coloring uses the degree bound ``d**2`` on ``G^2`` that every node can
    compute from ``d``, so the palette size depends on ``d`` only.
    ``on_step(node, step)`` sees every fix in merge order; ``on_class(color,
    state)`` sees the global state after each class.
    """
    if not force:
        require_criterion(instance)
    ids = node_ids(instance) if ids is None else dict(ids)
    nbrs = instance.graph.neighbors
    bound = instance.d ** 2
    col = coloring(nbrs, ids, max_degree=bound)
    classes = col.classes()
    if not isolation_check(classes, instance):
        raise IsolationViolation("coloring leaves same-class nodes within distance 2")

    state = PStarState.initial(instance)
    messages = list(col.messages)
    transcript = []
    palette = col.palette
    for c in range(palette):
        members = sorted(classes.get(c, []), key=lambda v: ids[v])
        # round 1: collect
        views = {v: state.view(closed_neighborhood(instance, v)) for v in members}
        messages.append(sum(len(nbrs[v]) for v in members))
        # round 2: local fixing
        writes = {}
        for v in members:
            view = views[v]
            steps = []
            for x in sorted(instance.events[v].vbl):
                if x not in view.fixed:
                    steps.append(fix_variable(view, x))
            writes[v] = steps
        messages.append(0)
        # round 3: write back, merged in identifier order
        read_by = {}
        for v in members:
            for u in closed_neighborhood(instance, v):
                read_by.setdefault(u, set()).add(v)
        written: dict = {}
        for v in members:
            view = views[v]
            for step in writes[v]:
                for u in step.endpoints:
                    if read_by.get(u, set()) - {v} or written.get(u, v) != v:
                        raise IsolationViolation(f"node {v} writes state of event {u} that another class member touches")
                    written[u] = v
                    for w in step.endpoints:
                        if w != u:
                            state.phi[(u, w)] = view.phi[(u, w)]
                    state.cond[u] = view.cond[u]
                    state.alive[u] = list(view.alive[u])
                state.fixed[step.variable] = step.symbol
                transcript.append([c, v, step.variable, step.symbol])
                if on_step is not None:
                    on_step(v, step)
        messages.append(sum(len(nbrs[v]) for v in members))
        if check and written:
            rep = check_pstar(state, written)
            if not rep.passed:
                raise InvariantCorruption(f"Property P* fails after color {c}: {rep.failures[:5]}")
        if on_class is not None:
            on_class(c, state)

    # variables in no event belong to no node; they take their first symbol
    for x, var in instance.variables.items():
        if x not in state.fixed:
            if instance.graph.hyperedges[x]:
                raise InvariantCorruption(f"variable {x} was left unfixed")
            state.fixed[x] = var.domain[0]

    present = len(set(col.colors.values()))
    log = RoundLog(
        coloring_rounds=col.rounds,
        fixing_rounds=ROUNDS_PER_COLOR * palette,
        colors_used=palette,
        colors_present=present,
        linial_rounds=col.linial_rounds,
        reduction_rounds=col.reduction_rounds,
        messages=messages,
        transcript=transcript,
    )
    return dict(sorted(state.fixed.items())), log


def color_classes(colors: Mapping) -> dict:
    out: dict = {}
    for v, c in sorted(colors.items()):
        out.setdefault(c, []).append(v)
    return out


__all__ = [
    "ROUNDS_PER_COLOR",
    "RoundLog",
    "closed_neighborhood",
    "color_classes",
    "isolation_check",
    "run_local",
    "write_owners",
]
