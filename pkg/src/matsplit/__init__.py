"""Exact splitting of full matrix algebras over Q and small number fields."""

from .errors import (
    BudgetExhausted,
    FactoringBudgetError,
    InconclusiveError,
    InputError,
    MatsplitError,
    NonSplitEvidence,
    PrecisionError,
    StructuralError,
    UnsolvableError,
)

__all__ = [
    "BudgetExhausted",
    "FactoringBudgetError",
    "InconclusiveError",
    "InputError",
    "MatsplitError",
    "NonSplitEvidence",
    "PrecisionError",
    "StructuralError",
    "UnsolvableError",
]

__version__ = "0.1.0"
