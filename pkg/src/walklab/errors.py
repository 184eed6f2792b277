"""Exception types shared across walklab modules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class WalklabError(Exception):
    """Base class for all walklab errors."""


@dataclass(frozen=True)
class Violation:
    """One violated spec invariant.

    kind is one of "NonStochastic", "ForbiddenMove", "NegativeProbability".
    """

    kind: str
    region: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} in {self.region}: {self.detail}"


class SpecValidationError(WalklabError):
    """Raised when a walk specification violates its invariants.

    Carries the full list of violations, not just the first one found.
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))

    def kinds(self):
        return {v.kind for v in self.violations}


class ShapeMismatch(WalklabError):
    """Two specs do not share an environment shape (kind, thickness, tree)."""


class PreconditionFailed(WalklabError):
    """A documented operation precondition does not hold.

    The message names the violated predicate.
    """


class UnknownExample(WalklabError, KeyError):
    """Requested catalog entry does not exist."""


class NotSummable(WalklabError):
    """A candidate measure or conductance series fails to be summable."""


class NonPositiveDrift(WalklabError):
    """A transience certificate was requested for a non-positive mean drift."""


class NoCertificate(WalklabError):
    """Certificate conditions fail; carries the offending exact value."""

    def __init__(self, message: str, value: Fraction | None = None):
        super().__init__(message)
        self.value = value


class DeltaOutOfRange(WalklabError):
    """Tree counterexample parameter outside (0, 1/7)."""


class ZeroParentProbability(WalklabError):
    """Conductance recursion hit a vertex with zero parent transition."""


class NonSummable(WalklabError):
    """Total conductance mass of a tree network cannot be certified finite."""


class OrderViolation(WalklabError):
    """A comparison operation's order precondition fails."""


class TooManyGenerators(WalklabError):
    """Support enumeration guard exceeded (exponential blowup)."""
