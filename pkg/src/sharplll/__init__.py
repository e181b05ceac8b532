"""Representable-tuple geometry and deterministic distributed LLL fixing."""
from . import geometry, lll, localsim
from .errors import (
    CriterionError,
    DegenerateGeneratorError,
    DomainError,
    GenerationError,
    GeneratorError,
    InstanceError,
    InvariantCorruption,
    IsolationViolation,
    NotMaximalError,
    PreconditionError,
    SharpLLLError,
    TheoremViolation,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
