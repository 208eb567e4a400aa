"""Exception hierarchy.

Every validator raises a subclass of :class:`CoarsemonError`; the class name
is the error code reported by the law suites and the CLI.
"""

from __future__ import annotations


class CoarsemonError(Exception):
    """Base class; ``witness`` carries whatever data pins down the failure."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness

    @property
    def code(self):
        return type(self).__name__


# group-set
class GroupError(CoarsemonError):
    pass


class NotClosed(GroupError):
    pass


class NoIdentity(GroupError):
    pass


class NoInverse(GroupError):
    pass


class NotAssociative(GroupError):
    pass


class NotAnAction(CoarsemonError):
    pass


class NotBijective(CoarsemonError):
    pass


class ShapeError(CoarsemonError):
    """A point, entourage or map does not fit the ambient set it is used on."""


# coarse-born
class SearchBoundExceeded(CoarsemonError):
    """Membership could not be decided within the search bound (verdict unknown)."""


class NotCompatible(CoarsemonError):
    pass


class NotEquivariant(CoarsemonError):
    pass


class NotControlled(CoarsemonError):
    pass


class NotProper(CoarsemonError):
    pass


# additive
class ShapeMismatch(CoarsemonError):
    pass


class LawViolation(CoarsemonError):
    def __init__(self, law, message="", witness=None):
        super().__init__(f"{law}: {message}" if message else law, witness)
        self.law = law


# controlled
class SupportNotInvariant(CoarsemonError):
    pass


class CocycleViolation(CoarsemonError):
    pass


class NotInvertible(CoarsemonError):
    pass


class HullNotEntourage(CoarsemonError):
    pass


class NotComposable(CoarsemonError):
    pass


# monoidal-groth
class NoFactorization(CoarsemonError):
    pass


# verify-cli
class UnknownSuite(CoarsemonError):
    pass


class ScenarioError(CoarsemonError):
    """Scenario file could not be parsed, validated or resolved."""
