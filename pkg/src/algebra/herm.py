"""Hermitian d x d matrices over a scalar backend, stored as real and imaginary parts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from ..errors import DimensionError, SymmetryError
from .scalars import Backend, Number, as_array, convert_array, eye, to_scalar, zeros

HERMITIAN_RTOL = 1e-12


def _split_complex(rows: Any, backend: Backend) -> tuple[np.ndarray, np.ndarray]:
    """Split nested rows of (possibly complex) numbers into real and imaginary arrays."""
    src = np.asarray(rows, dtype=object)
    re = np.empty(src.shape, dtype=object)
    im = np.empty(src.shape, dtype=object)
    for idx, v in np.ndenumerate(src):
        if isinstance(v, complex):
            re[idx], im[idx] = v.real, v.imag
        else:
            re[idx], im[idx] = v, 0
    return as_array(re, backend), as_array(im, backend)


@dataclass(frozen=True)
class ComplexVector:
    """A vector of C^d kept as real and imaginary parts (exact or floating)."""
    re: np.ndarray
    im: np.ndarray

    @classmethod
    def of(cls, values: Sequence, backend: Backend = Backend.EXACT) -> "ComplexVector":
        re, im = _split_complex(list(values), backend)
        return cls(re, im)

    @classmethod
    def from_parts(cls, re: Sequence, im: Sequence | None, backend: Backend) -> "ComplexVector":
        re_arr = as_array(list(re), backend)
        im_arr = as_array(list(im), backend) if im is not None else zeros(len(re_arr), backend)
        return cls(re_arr, im_arr)

    @property
    def dim(self) -> int:
        return len(self.re)

    def to_complex(self) -> np.ndarray:
        return np.asarray(self.re, dtype=float) + 1j * np.asarray(self.im, dtype=float)

    def to_backend(self, backend: Backend) -> "ComplexVector":
        return ComplexVector(convert_array(self.re, backend), convert_array(self.im, backend))


@dataclass(frozen=True, eq=False)
class HermMatrix:
    """A d x d Hermitian matrix M = re + i*im (re symmetric, im antisymmetric).

    The raw constructor does not validate; use `of`, `from_parts` or `check_hermitian`.
    """
    re: np.ndarray
    im: np.ndarray
    backend: Backend

    # Construction

    @classmethod
    def of(cls, rows: Any, backend: Backend = Backend.EXACT, check: bool = True) -> "HermMatrix":
        """Build from nested rows; complex entries are accepted."""
        re, im = _split_complex(rows, backend)
        return cls.from_parts(re, im, backend, check=check)

    @classmethod
    def from_parts(
        cls,
        re: Any,
        im: Any = None,
        backend: Backend = Backend.EXACT,
        check: bool = True,
    ) -> "HermMatrix":
        re_arr = as_array(re, backend)
        if re_arr.ndim != 2 or re_arr.shape[0] != re_arr.shape[1]:
            raise DimensionError(f"Expected a square matrix, got shape {re_arr.shape}")
        im_arr = zeros(re_arr.shape, backend) if im is None else as_array(im, backend)
        if im_arr.shape != re_arr.shape:
            raise DimensionError(f"Real part {re_arr.shape} and imaginary part {im_arr.shape} differ")
        out = cls(re_arr, im_arr, backend)
        if check:
            out.check_hermitian()
        return out

    @classmethod
    def zero(cls, dim: int, backend: Backend = Backend.EXACT) -> "HermMatrix":
        return cls(zeros((dim, dim), backend), zeros((dim, dim), backend), backend)

    @classmethod
    def identity(cls, dim: int, backend: Backend = Backend.EXACT) -> "HermMatrix":
        return cls(eye(dim, backend), zeros((dim, dim), backend), backend)

    @classmethod
    def diag(cls, values: Sequence, backend: Backend = Backend.EXACT) -> "HermMatrix":
        d = len(values)
        re = zeros((d, d), backend)
        for i, v in enumerate(values):
            re[i, i] = to_scalar(v, backend)
        return cls(re, zeros((d, d), backend), backend)

    # Properties

    @property
    def dim(self) -> int:
        return self.re.shape[0]

    @property
    def is_real(self) -> bool:
        return not np.any(self.im != 0)

    def max_abs(self) -> float:
        if self.dim == 0:
            return 0.0
        return float(max(np.max(np.abs(self.re)), np.max(np.abs(self.im))))

    def symmetry_defect(self) -> Number:
        """max |M_ij - conj(M_ji)| over real and imaginary parts."""
        if self.dim == 0:
            return 0
        return max(np.max(np.abs(self.re - self.re.T)), np.max(np.abs(self.im + self.im.T)))

    def check_hermitian(self) -> "HermMatrix":
        """Exact symmetry in the exact backend, 1e-12 * maxAbsEntry otherwise."""
        defect = self.symmetry_defect()
        if self.backend is Backend.EXACT:
            if defect != 0:
                raise SymmetryError(float(defect))
        else:
            tol = HERMITIAN_RTOL * self.max_abs()
            if float(defect) > tol:
                raise SymmetryError(float(defect), tol)
        return self

    # Arithmetic (real-linear space)

    def _same_shape(self, other: "HermMatrix") -> None:
        if self.dim != other.dim:
            raise DimensionError(f"Matrix dimensions differ: {self.dim} vs {other.dim}")

    def _backend_with(self, other: "HermMatrix") -> Backend:
        return Backend.EXACT if self.backend is other.backend is Backend.EXACT else Backend.APPROX

    def __add__(self, other: "HermMatrix") -> "HermMatrix":
        self._same_shape(other)
        b = self._backend_with(other)
        return HermMatrix(self.re + other.re, self.im + other.im, b)

    def __sub__(self, other: "HermMatrix") -> "HermMatrix":
        self._same_shape(other)
        b = self._backend_with(other)
        return HermMatrix(self.re - other.re, self.im - other.im, b)

    def __neg__(self) -> "HermMatrix":
        return HermMatrix(-self.re, -self.im, self.backend)

    def scale(self, c: Number) -> "HermMatrix":
        c = to_scalar(c, self.backend)
        return HermMatrix(self.re * c, self.im * c, self.backend)

    def __mul__(self, c: Number) -> "HermMatrix":
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HermMatrix):
            return NotImplemented
        if other.dim != self.dim:
            return False
        return bool(np.all(self.re == other.re) and np.all(self.im == other.im))

    __hash__ = None

    def is_zero(self) -> bool:
        return not (np.any(self.re != 0) or np.any(self.im != 0))

    def allclose(self, other: "HermMatrix", atol: float = 1e-10) -> bool:
        self._same_shape(other)
        a, b = self.to_complex(), other.to_complex()
        return bool(np.all(np.abs(a - b) <= atol * (1.0 + max(np.max(np.abs(a), initial=0), np.max(np.abs(b), initial=0)))))

    # Conversions

    def to_backend(self, backend: Backend) -> "HermMatrix":
        if backend is self.backend:
            return self
        return HermMatrix(convert_array(self.re, backend), convert_array(self.im, backend), backend)

    def to_complex(self) -> np.ndarray:
        return np.asarray(self.re, dtype=np.float64) + 1j * np.asarray(self.im, dtype=np.float64)

    def real_embedding(self) -> np.ndarray:
        """[[re, -im], [im, re]], real symmetric of size 2d with the spectrum of M doubled."""
        return np.block([[self.re, -self.im], [self.im, self.re]])

    # Scalars derived from M

    def trace(self) -> Number:
        return sum(self.re[i, i] for i in range(self.dim))

    def inner(self, other: "HermMatrix") -> Number:
        """tr(M N), real for Hermitian M, N."""
        self._same_shape(other)
        return np.sum(self.re * other.re.T) - np.sum(self.im * other.im.T)

    def quad_form(self, v: ComplexVector) -> Number:
        """<M v, v> = v* M v (real)."""
        if v.dim != self.dim:
            raise DimensionError(f"Vector of length {v.dim} against matrix of dimension {self.dim}")
        u, w = v.re, v.im
        return u.dot(self.re.dot(u)) - u.dot(self.im.dot(w)) + w.dot(self.re.dot(w)) + w.dot(self.im.dot(u))

    def __repr__(self) -> str:
        return f"HermMatrix(dim={self.dim}, backend={self.backend.value}, re={self.re.tolist()}, im={self.im.tolist()})"


# General complex matrices (re, im) used by Choi maps and matrix-polynomial factors.

ComplexArray = tuple[np.ndarray, np.ndarray]


def cmatmul(a: ComplexArray, b: ComplexArray) -> ComplexArray:
    ar, ai = a
    br, bi = b
    return ar.dot(br) - ai.dot(bi), ar.dot(bi) + ai.dot(br)


def cadjoint(a: ComplexArray) -> ComplexArray:
    return a[0].T, -a[1].T


# Fixed real basis of Herm_d

def hermitian_basis(dim: int, backend: Backend = Backend.EXACT) -> tuple[HermMatrix, ...]:
    """Row-major over index pairs (j, k): E_jj, E_jk + E_kj (j < k), i(E_kj - E_jk) (j > k).

    For dim = 2 the order is H11, H12, H21, H22. The basis is orthogonal under
    tr(XY); off-diagonal members have squared norm 2 so all coordinates stay rational.
    Against the orthonormal basis (off-diagonal members divided by sqrt(2)) the
    off-diagonal coordinates here are smaller by a factor sqrt(2).
    """
    one = Fraction(1) if backend is Backend.EXACT else 1.0
    out = []
    for j in range(dim):
        for k in range(dim):
            re, im = zeros((dim, dim), backend), zeros((dim, dim), backend)
            if j == k:
                re[j, j] = one
            elif j < k:
                re[j, k] = re[k, j] = one
            else:
                im[k, j] = one
                im[j, k] = -one
            out.append(HermMatrix(re, im, backend))
    return tuple(out)


def basis_coordinates(a: HermMatrix) -> list[Number]:
    """Coordinates c with a = sum_i c_i * hermitian_basis(d)[i]."""
    d = a.dim
    coords = []
    for j in range(d):
        for k in range(d):
            if j == k:
                coords.append(a.re[j, j])
            elif j < k:
                coords.append(a.re[j, k])
            else:
                coords.append(a.im[k, j])
    return coords


def basis_label(index: int, dim: int) -> str:
    j, k = divmod(index, dim)
    return f"H{j + 1}{k + 1}" if dim < 10 else f"H{j + 1},{k + 1}"
