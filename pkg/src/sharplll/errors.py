"""Exception hierarchy shared by the geometry, LLL and simulator layers."""


class SharpLLLError(Exception):
    pass


class GeneratorError(SharpLLLError, ValueError):
    """Invalid generator weights (negative, above one, or a pair summing above one)."""


class DegenerateGeneratorError(GeneratorError):
    """A zero weight where the operation needs a non-zero generator."""


class PreconditionError(SharpLLLError, ValueError):
    pass


class NotMaximalError(PreconditionError):
    """The tuple/generator pair does not behave like a maximal tuple."""


class DomainError(SharpLLLError, ValueError):
    pass


class InstanceError(SharpLLLError, ValueError):
    """Malformed LLL instance or instance file."""


class CriterionError(InstanceError):
    """The instance violates p * 2**d < 1."""


class InvariantCorruption(SharpLLLError, RuntimeError):
    pass


class TheoremViolation(SharpLLLError, RuntimeError):
    """No domain value of a variable has a representable requirement tuple.

    On instances satisfying the criterion this means a bug (or a counterexample
    to the convexity theorem); ``diagnostic`` carries everything needed to replay it.
    """

    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class IsolationViolation(SharpLLLError, RuntimeError):
    """Two same-colour nodes touched overlapping state in one parallel step."""


class GenerationError(SharpLLLError, ValueError):
    """The generator could not produce a criterion-passing instance within its retry budget."""
