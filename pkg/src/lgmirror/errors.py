"""Exception hierarchy.

Domain errors (bad input, degenerate potentials) derive from ``DomainError``;
failures of a verification step derive from ``VerificationError``.  The CLI
maps the two families to exit codes 1 and 2.
"""

from __future__ import annotations


class LGMirrorError(Exception):
    """Base class for every error raised by the package."""


class DomainError(LGMirrorError):
    pass


class VerificationError(LGMirrorError):
    pass


class ParseError(DomainError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariable(DomainError):
    pass


class DegenerateWeights(DomainError):
    pass


class NotInvertible(DomainError):
    pass


class NonUnitCoefficients(DomainError):
    pass


class DegeneratePotential(DomainError):
    pass


class DegenerateRestriction(DomainError):
    pass


class OutOfTableRange(DomainError):
    pass


class LengthMismatch(DomainError):
    pass


class NotInGroup(DomainError):
    pass


class MissingJ(DomainError):
    pass


class WrongShape(DomainError):
    pass


class BasisMismatch(DomainError):
    pass


class AxiomConflict(VerificationError):
    """Two applicable axioms assign different values to one correlator."""


class PowerRuleViolation(VerificationError):
    pass


class RelationViolation(VerificationError):
    pass


class CrossCheckMismatch(VerificationError):
    pass
