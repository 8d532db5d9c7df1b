"""Exception hierarchy.

Every failure mode that an operation can report has its own class so that
callers (and the CLI) can distinguish "the input was wrong" from "the
computation could not be certified within its budget".
"""


class CantorDiophError(Exception):
    """Base class for all library errors."""


class UsageError(CantorDiophError, ValueError):
    """Malformed or out-of-contract input."""


class EnclosureExhausted(CantorDiophError):
    """A target real could not be refined enough to decide the next step."""


class RationalTargetError(CantorDiophError):
    """The target is exactly the rational being compared against."""


class NotCoprime(UsageError):
    pass


class FactorizationLimit(CantorDiophError):
    """Integer factoring gave up within the configured budget."""


class Undecided(CantorDiophError):
    """Interval refinement hit its depth limit without separating."""


class IndexOutOfRange(UsageError, IndexError):
    pass


class NotInAttractor(CantorDiophError):
    pass


class NotUnimodular(UsageError):
    pass


class AmbiguousBranch(CantorDiophError):
    """The branch selector could not decide which image holds a point."""


class InsufficientPoints(UsageError):
    pass


class NonPrimitivePeriod(UsageError):
    pass


class NotADivisor(UsageError):
    pass


class MemberInput(UsageError):
    """An operation that quantifies over non-members received a member."""


class AddressTooShort(CantorDiophError):
    pass


class BoundViolation(CantorDiophError, AssertionError):
    """An internal certificate failed. This indicates a bug, never bad input."""


class BudgetExceeded(CantorDiophError):
    pass


class InsufficientData(UsageError):
    pass


class Exhausted(CantorDiophError):
    """A bounded search ran out of candidates."""


class ScheduleNotDecreasing(UsageError):
    pass


class FixedPointNotRational(UsageError):
    pass


class ExactHit(CantorDiophError):
    """m*xi == n exactly, so a logarithm of zero would be needed."""


class SearchExhausted(CantorDiophError):
    pass


class DepthTooSmall(CantorDiophError):
    pass
