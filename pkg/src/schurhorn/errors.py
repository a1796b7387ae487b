"""Exception hierarchy.

``FeasibilityError`` marks conditions where the requested construction is
mathematically impossible (or outside the guarded regime) for the given
input, as opposed to misuse or internal failure. The CLI maps feasibility
errors to exit code 2 and everything else to exit code 1.
"""


class SchurHornError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(SchurHornError):
    """Operands have incompatible sizes or kinds."""


class NonConvergence(SchurHornError):
    """Eigensolver failed to reduce off-diagonal mass within the sweep budget."""


class PartitionMismatch(SchurHornError):
    """Block partition does not cover the data it is applied to."""


class UnknownFamily(SchurHornError):
    """Instance generator asked for an unrecognized family name."""


class InsufficientGrid(SchurHornError):
    """Slope regression needs at least two usable grid points."""


class EmptySample(SchurHornError):
    """A sampling routine was asked for zero samples."""


class FeasibilityError(SchurHornError):
    """The requested construction is infeasible for this input."""


class MajorizationFails(FeasibilityError):
    """An operation required a majorization relation that does not hold."""


class MajorizationViolated(FeasibilityError):
    """Majorization precondition fails; carries the first offending index."""

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"majorization violated at index {index}")


class Infeasible(FeasibilityError):
    """The two-by-two correction problem has no real rotation angle."""


class TraceMismatch(FeasibilityError):
    """Target spectrum does not preserve the trace."""


class NotIrreducible(FeasibilityError):
    """Matrix was expected to have a connected nonzero pattern."""


class EdgeVanished(FeasibilityError):
    """A required coupling entry dropped below the structural threshold."""


class WindowsDisjoint(FeasibilityError):
    """Spectrum windows of two blocks have zero-measure intersection."""


class ScalarOutsideWindow(FeasibilityError):
    """Scalar block does not lie strictly inside the companion window."""


class NotStronglyCorrectable(FeasibilityError):
    """Necessary strictness condition for a strong correction fails."""

    def __init__(self, index: int | None = None, message: str = ""):
        self.index = index
        super().__init__(
            message or (f"non-strict majorization at index {index}" if index is not None else "not strongly correctable")
        )


class NoEqualityAtI(FeasibilityError):
    """Violation generator needs partial-sum equality at the chosen index."""


class ScalarSpectrum(FeasibilityError):
    """Violation generator cannot perturb a constant spectrum."""
