"""Exception types shared across the package.

Domain errors (a legitimate "no" answer, or an input that violates a
precondition) derive from DomainError; resource limits derive from
BudgetError.  The CLI maps these two families to distinct exit codes.
"""


class DomainError(Exception):
    pass


class BudgetError(Exception):
    pass


class NoSolution(DomainError):
    pass


class Invalid(DomainError):
    """Raised when a presentation fails validation; ``witness`` says where."""

    def __init__(self, reason, witness=None):
        super().__init__(reason)
        self.reason = reason
        self.witness = witness


class NotPositiveDefinite(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class NotFullRank(DomainError):
    pass


class InfiniteGroup(DomainError):
    pass


class NotCoprime(DomainError):
    pass


class NotAutomorphism(DomainError):
    pass


class NotPrimePower(DomainError):
    pass


class BadRadical(DomainError):
    pass


class EvenIndex(DomainError):
    pass


class NoPrimitiveFound(BudgetError):
    def __init__(self, bound):
        super().__init__(f"no primitive element with coefficients bounded by {bound}")
        self.bound = bound


class OracleBudgetExceeded(BudgetError):
    pass


class PrecisionBudgetExceeded(BudgetError):
    pass


class Cancelled(Exception):
    """A cooperative cancellation token was triggered."""


class ParseError(ValueError):
    """Malformed input to the command-line front end."""
