"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI:
  0 success, 1 verified negative, 2 inconclusive (budget / precision / non-split
  evidence), 3 bad input.
"""


class MatsplitError(Exception):
    """Base class for all library errors."""


class InputError(MatsplitError):
    """Malformed or invalid input (parse errors, broken invariants).  Exit 3."""


class DimensionError(InputError):
    """Shape mismatch in exact linear algebra."""


class StructuralError(MatsplitError):
    """The input violates the structural promise (e.g. not isomorphic to M_n(K))
    in a way detected by an exact check."""


class NonSplitEvidence(MatsplitError):
    """A certificate that the algebra is not a full matrix algebra (e.g. the
    maximal-order discriminant misses the split target).  Reported as
    inconclusive/non-split by `split` and `zerodiv` (exit 2); converted to a
    verified negative by the norm-equation solver."""

    def __init__(self, message, discriminant=None, target=None):
        super().__init__(message)
        self.discriminant = discriminant
        self.target = target


class InconclusiveError(MatsplitError):
    """Search budget exhausted without a witness.  Exit 2, never a 'no'."""


class BudgetExhausted(InconclusiveError):
    """Wall-clock or iteration budget ran out."""


class PrecisionError(InconclusiveError):
    """Certified numerics could not reach a decision at the precision ceiling."""


class FactoringBudgetError(InconclusiveError):
    """Integer factoring budget exceeded; carries the unfactored cofactor."""

    def __init__(self, cofactor):
        super().__init__(f"factoring budget exceeded, unfactored cofactor {cofactor}")
        self.cofactor = cofactor


class UnsolvableError(MatsplitError):
    """Verified negative answer (e.g. norm equation has no solution).  Exit 1."""
