"""LOCAL-model simulation: 2-hop coloring and color-class parallel fixing."""
from .coloring import (
    ColoringResult,
    is_proper_two_hop,
    linial_parameters,
    next_prime,
    reduction_ceiling,
    square_graph,
    two_hop_coloring,
)
from .simulator import ROUNDS_PER_COLOR, RoundLog, color_classes, isolation_check, run_local

__all__ = [name for name in dir() if not name.startswith("_")]
