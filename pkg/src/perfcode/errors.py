"""Exception types shared across the package."""


class PerfcodeError(Exception):
    """Base class for all package errors."""


class BudgetExceeded(PerfcodeError):
    """A size, time, or materialization budget was exhausted."""


class NotInvertible(PerfcodeError):
    """Matrix inversion requested for a singular matrix."""


class DimensionMismatch(PerfcodeError):
    """Operands live over binary spaces of different dimension."""


class LengthMismatch(PerfcodeError):
    """Codes of different lengths were combined."""


class ZeroNotFixed(PerfcodeError):
    """A permutation required to fix the zero vector does not."""


class AffineInput(PerfcodeError):
    """A linear permutation was passed where a non-linear one is required."""


class MixedDimensions(PerfcodeError):
    """A batch operation received permutations over different dimensions."""


class InconsistentInput(PerfcodeError):
    """Structured inputs that must agree (e.g. coset reps vs. the permutation) do not."""


class NotAnAutomorphism(PerfcodeError):
    """The supplied map does not preserve the group product."""


class ExcludedLength(PerfcodeError):
    """The requested code length is excluded from the series construction."""


class MalformedInput(PerfcodeError):
    """A file or serialized object could not be parsed."""
