"""Exact LLL instances, Property P* and variable fixing."""
from .fileio import dump, dumps, load, loads, node_ids
from .fixing import (
    PSTAR_SLACK,
    FixStep,
    PStarReport,
    PStarState,
    check_pstar,
    fix_variable,
    requirement_tuple,
    run_sequential,
    symbol_conditionals,
    total_probability_holds,
)
from .generate import FAMILIES, GenSpec, generate_instance
from .instance import (
    CriterionReport,
    Event,
    GraphSummary,
    LLLInstance,
    Variable,
    build_dependency_graph,
    check_criterion,
    conditional_probability,
    occurring_events,
    verify_assignment,
)

__all__ = [name for name in dir() if not name.startswith("_")]
