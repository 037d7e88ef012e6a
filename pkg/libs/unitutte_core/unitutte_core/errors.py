from __future__ import annotations


class UnitutteError(Exception):
    """Base class for every error raised by the library."""


# --- Algebra ---

class AlgebraDomainError(UnitutteError):
    """An exponent or integer left its admissible domain."""


class SignatureMismatchError(UnitutteError):
    pass


class MissingAssignmentError(UnitutteError):
    pass


class InversionError(UnitutteError):
    """A negative exponent met a value that is not a unit."""


class RingModeError(UnitutteError):
    pass


# --- Structures ---

class StructureError(UnitutteError):
    """Input violates the axioms of its structure family."""


class SizeLimitError(UnitutteError):
    pass


class UnsupportedSystemError(UnitutteError):
    pass


class InvariantViolation(UnitutteError):
    """A property guaranteed by a theorem failed on a concrete instance."""


def check_size(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise SizeLimitError(f"{what}: size {n} exceeds cap {cap}")
