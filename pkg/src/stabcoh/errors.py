"""Exception types shared across the package."""


class StabcohError(Exception):
    """Base class for all package-specific errors."""


class PrecisionExhausted(StabcohError):
    """A p-adic rank or torsion decision could not be certified at the
    working precision.  Callers should raise the precision and retry."""


class OutsideAtomClass(StabcohError):
    """The requested operation leaves the closed class of module atoms."""


class NotProjective(StabcohError):
    """Hom was asked for a source module outside the projective class."""


class BudgetExceeded(StabcohError):
    """A bar-complex computation would exceed the configured size budget."""


class NoStabilization(StabcohError):
    """The finite-quotient sweep hit its budget before answers stabilized."""


class UnsupportedPrime(StabcohError):
    """The requested table is only available at p = 2."""


class WindowMismatch(StabcohError):
    """Two bigraded tables cover different (s, t) windows."""


class ModuleExprParseError(StabcohError):
    """A module expression string failed to parse; carries the offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
