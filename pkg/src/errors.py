"""Exception hierarchy.

Everything derives from ValueError so callers can keep catching ValueError.
"""

from __future__ import annotations


class OpMomentError(ValueError):
    """Base class for toolkit errors."""


class DimensionError(OpMomentError):
    """Shapes, matrix dimensions or variable counts do not match."""


class SymmetryError(OpMomentError):
    """A matrix that must be Hermitian is not."""

    def __init__(self, defect: float, tolerance: float | None = None):
        self.defect = defect
        self.tolerance = tolerance
        if tolerance is None:
            msg = f"Matrix is not Hermitian (symmetry defect {defect})"
        else:
            msg = f"Matrix is not Hermitian (symmetry defect {defect:.3e} exceeds {tolerance:.3e})"
        super().__init__(msg)


class DegreeOverflowError(OpMomentError):
    """A polynomial exceeds the degree an operator is truncated at."""

    def __init__(self, degree: int, max_deg: int):
        self.degree = degree
        self.max_deg = max_deg
        super().__init__(f"Polynomial degree {degree} exceeds operator truncation degree {max_deg}")


class OrderError(OpMomentError):
    """A moment sequence is too short for the requested matrix."""


class RegionError(OpMomentError):
    """Invalid region, or a point outside the region it must belong to."""


class DocumentError(OpMomentError):
    """A problem document could not be parsed; `field` names the offending location."""

    def __init__(self, message: str, field: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class DemoError(OpMomentError):
    """Unknown demo name."""


class ScalarRangeError(OpMomentError):
    """An exact value does not fit in a double."""

    def __init__(self, value):
        self.value = value
        digits = len(str(abs(int(value))))
        super().__init__(f"Entry with {digits} digits exceeds double range; use the exact backend")
