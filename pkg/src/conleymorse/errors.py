"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ConleyError(ValueError):
    """Base class for all domain errors raised by this package."""


class EmptyInput(ConleyError):
    pass


class DuplicateSimplex(ConleyError):
    pass


class NotClosed(ConleyError):
    pass


class NotNested(ConleyError):
    pass


class NotSubpair(ConleyError):
    pass


class NotSimplicial(ConleyError):
    pass


class NotPartition(ConleyError):
    pass


class NotConvex(ConleyError):
    def __init__(self, vector: int, witness: int) -> None:
        super().__init__(f"vector {vector} is not convex: simplex {witness} lies strictly between two of its members")
        self.vector = vector
        self.witness = witness


class DifferentComplex(ConleyError):
    pass


class NotContained(ConleyError):
    pass


class NotInvariant(ConleyError):
    pass


class NotIsolated(ConleyError):
    pass


class ValidationFailed(ConleyError):
    pass


class DifferentN(ConleyError):
    pass


class InteriorEscapes(ConleyError):
    pass


class InvariantChanged(ConleyError):
    pass


class MissingIndexPair(ConleyError):
    pass


class TooLarge(ConleyError):
    pass


class OrderCycle(ConleyError):
    pass
