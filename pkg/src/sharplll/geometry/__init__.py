"""Generators, representable tuples and supporting hyperplanes."""
from .generator import (
    Generator,
    admissible_trade_bound,
    dominates,
    generate,
    sanitize_pairs,
    shrink_to,
    strong_dominator,
    trade_epsilon,
)
from .hyperplane import (
    ORTHOGONALITY_TOL,
    Hyperplane,
    MovementVector,
    combine,
    decompose_in_hyperplane,
    hyperplane_witness,
    local_representability_radius,
    movement_matrix,
    movement_vectors,
    sign_coherent,
    supporting_hyperplane,
)
from .oracle import (
    TOL_CLOSED_FORM,
    TOL_SEARCH,
    OracleResult,
    boundary_height_r3,
    boundary_point,
    default_tol,
    is_maximal,
    is_representable,
    maximal_from_multipliers,
    maximize_coordinate,
)
from .probe import ProbeReport, convexity_probe, inside_margin

__all__ = [name for name in dir() if not name.startswith("_")]
