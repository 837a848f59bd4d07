"""Exceptions shared across the package."""


class AxiomError(ValueError):
    """A structural invariant of an algebraic object does not hold.

    The message names the violated axiom and the basis indices or elements
    that witness the violation.
    """


class BudgetError(RuntimeError):
    """An exhaustive search would exceed its configured enumeration bound."""
