"""Exception types shared across the library."""


class CharpError(Exception):
    """Base class for all library errors."""


class ShapeMismatch(CharpError):
    """Operands disagree in prime, length, or ambient field."""


class NegativeValuation(CharpError):
    """Residue requested for an element outside the valuation ring."""


class ExprSyntaxError(CharpError):
    """Malformed input expression; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariable(ExprSyntaxError):
    pass


class EmptyList(CharpError):
    """An operation that needs at least one element got none."""


class Undecided(CharpError):
    """The question falls outside the certified decision fragment."""


class ShiftConditionFailed(CharpError):
    """Proposed automorphism shift does not satisfy s^p - s = sigma(r) - r."""


class NotCyclic(CharpError):
    """Tower automorphism order does not match the tower degree."""


class TraceNotZero(CharpError):
    """Additive Hilbert-90 input must have trace zero."""


class PIndependenceFailed(CharpError):
    """Residue classes are not p-independent over k^p."""


class DegenerateSymbol(CharpError):
    """Witt symbol does not define a field extension of full degree."""


class CertificateError(CharpError):
    """A certification check failed or a stored certificate does not re-verify."""


class MissingCertificate(CharpError):
    """Operation needs a certificate the object does not carry."""


class MissingWitness(CharpError):
    """Operation needs an explicit witness that was not supplied."""


class SlotValuationDivisible(CharpError):
    """Slot valuation is divisible by p, so the ramification argument fails."""


class ZeroSlot(CharpError):
    """Cyclic algebra slot must be a nonzero element."""
