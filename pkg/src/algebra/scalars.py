"""Scalar backends: exact rationals (Fraction in numpy object arrays) or double precision."""

from __future__ import annotations

import numbers
from enum import Enum
from fractions import Fraction
from typing import Any, Union

import numpy as np

from ..errors import ScalarRangeError

Number = Union[int, float, Fraction]

MACHINE_EPS = float(np.finfo(np.float64).eps)
DEFAULT_PSD_TOL = 1e-9


class Backend(str, Enum):
    """Arithmetic backend of a value."""
    EXACT = "exact"
    APPROX = "approx"


def parse_number(value: Any) -> Number:
    """Parse a document number: int, float, or a "p/q" / decimal string."""
    if isinstance(value, bool):
        raise ValueError(f"Not a number: {value!r}")
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Rational):
        return Fraction(value)
    if isinstance(value, numbers.Real):
        return float(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Not a number: {value!r}") from e
    raise ValueError(f"Not a number: {value!r}")


def to_scalar(value: Any, backend: Backend) -> Number:
    """Coerce a number into the backend's scalar type."""
    value = parse_number(value)
    if backend is Backend.EXACT:
        return value if isinstance(value, Fraction) else Fraction(value)
    try:
        return float(value)
    except OverflowError:
        raise ScalarRangeError(value) from None


def format_number(value: Number, backend: Backend) -> str | float:
    """Render a scalar for documents: "p/q" strings when exact, floats otherwise."""
    if backend is Backend.EXACT:
        return str(Fraction(value))
    return float(value)


def as_array(rows: Any, backend: Backend) -> np.ndarray:
    """Build a 1-d or 2-d array of backend scalars."""
    if backend is Backend.EXACT:
        src = np.asarray(rows, dtype=object)
        out = np.empty(src.shape, dtype=object)
        for idx, v in np.ndenumerate(src):
            out[idx] = to_scalar(v, backend)
        return out
    if isinstance(rows, np.ndarray) and rows.dtype != object:
        return rows.astype(np.float64)
    src = np.asarray(rows, dtype=object)
    out = np.empty(src.shape, dtype=np.float64)
    for idx, v in np.ndenumerate(src):
        out[idx] = to_scalar(v, backend)
    return out


def zeros(shape: int | tuple[int, ...], backend: Backend) -> np.ndarray:
    if backend is Backend.EXACT:
        return np.full(shape, Fraction(0), dtype=object)
    return np.zeros(shape, dtype=np.float64)


def eye(n: int, backend: Backend) -> np.ndarray:
    out = zeros((n, n), backend)
    for i in range(n):
        out[i, i] = Fraction(1) if backend is Backend.EXACT else 1.0
    return out


def convert_array(arr: np.ndarray, backend: Backend) -> np.ndarray:
    """Convert an array between backends (float -> Fraction is exact)."""
    return as_array(arr, backend)


def scalar_sign(value: Number) -> int:
    return (value > 0) - (value < 0)
