"""Finitely atomic operator-valued and map-valued measures and their integrals."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .algebra import (
    DEFAULT_PSD_TOL,
    Backend,
    ComplexVector,
    HermMatrix,
    MultiIndex,
    Number,
    psd_check,
    to_scalar,
)
from .algebra.herm import ComplexArray, cadjoint, cmatmul
from .algebra.psd import PsdVerdict
from .algebra.sampling import make_rng, random_complex_matrix, random_psd
from .algebra.scalars import as_array, eye, zeros
from .errors import DimensionError, RegionError
from .matpoly import MatrixPolynomial, RegionK, ScalarPolynomial

logger = logging.getLogger(__name__)

Point = tuple[Number, ...]


def _point(x: Sequence, nvars: int, backend: Backend) -> Point:
    if len(x) != nvars:
        raise DimensionError(f"Atom point {tuple(x)} has {len(x)} coordinates, expected {nvars}")
    return tuple(to_scalar(v, backend) for v in x)


# Completely positive maps

@dataclass(frozen=True, eq=False)
class ChoiMap:
    """A Hermiticity-preserving map on d x d matrices, stored as its Choi matrix.

    C[(i, k), (j, l)] = Phi(E_ij)[k, l] with row index i*d + k, so
    Phi(A)[k, l] = sum_ij A_ij C[(i, k), (j, l)]. C is PSD iff Phi is completely positive.
    """
    choi: HermMatrix
    dim: int

    @classmethod
    def of(cls, choi: HermMatrix) -> "ChoiMap":
        d = int(round(choi.dim ** 0.5))
        if d * d != choi.dim:
            raise DimensionError(f"Choi matrix dimension {choi.dim} is not a square d^2")
        return cls(choi, d)

    @classmethod
    def identity(cls, dim: int, backend: Backend = Backend.EXACT) -> "ChoiMap":
        return cls.from_kraus([(eye(dim, backend), zeros((dim, dim), backend))], backend)

    @classmethod
    def depolarizing(cls, dim: int, backend: Backend = Backend.EXACT) -> "ChoiMap":
        """A -> tr(A) I / d."""
        scale = Fraction(1, dim) if backend is Backend.EXACT else 1.0 / dim
        return cls(HermMatrix.identity(dim * dim, backend).scale(scale), dim)

    @classmethod
    def congruence(cls, s: Any, backend: Backend = Backend.EXACT, s_im: Any = None) -> "ChoiMap":
        """A -> S A S* for a square matrix S = s + i*s_im."""
        re = as_array(s, backend)
        im = zeros(re.shape, backend) if s_im is None else as_array(s_im, backend)
        return cls.from_kraus([(re, im)], backend)

    @classmethod
    def from_kraus(cls, kraus: Sequence[ComplexArray], backend: Backend = Backend.EXACT) -> "ChoiMap":
        """A -> sum_k K_k A K_k*; the Choi matrix is sum_k vec(K_k) vec(K_k)* with vec(K)_(i,k) = K[k, i]."""
        if not kraus:
            raise DimensionError("At least one Kraus operator is needed")
        d = as_array(kraus[0][0], backend).shape[0]
        re_acc, im_acc = zeros((d * d, d * d), backend), zeros((d * d, d * d), backend)
        for k_re, k_im in kraus:
            k_re, k_im = as_array(k_re, backend), as_array(k_im, backend)
            if k_re.shape != (d, d) or k_im.shape != (d, d):
                raise DimensionError(f"Kraus operators must be {d} x {d}")
            v = (k_re.T.reshape(d * d, 1), k_im.T.reshape(d * d, 1))
            re, im = cmatmul(v, cadjoint(v))
            re_acc, im_acc = re_acc + re, im_acc + im
        return cls(HermMatrix(re_acc, im_acc, backend), d)

    @property
    def backend(self) -> Backend:
        return self.choi.backend

    def apply(self, a: HermMatrix) -> HermMatrix:
        """Phi(A) by contracting the Choi tensor against A."""
        d = self.dim
        if a.dim != d:
            raise DimensionError(f"Map acts on {d} x {d} matrices, got dimension {a.dim}")
        backend = Backend.EXACT if self.backend is a.backend is Backend.EXACT else Backend.APPROX
        choi = self.choi.to_backend(backend)
        a = a.to_backend(backend)
        # [i, k, j, l] -> [i, j, k, l]
        c_re = choi.re.reshape(d, d, d, d).transpose(0, 2, 1, 3)
        c_im = choi.im.reshape(d, d, d, d).transpose(0, 2, 1, 3)
        axes = ([0, 1], [0, 1])
        re = np.tensordot(a.re, c_re, axes=axes) - np.tensordot(a.im, c_im, axes=axes)
        im = np.tensordot(a.re, c_im, axes=axes) + np.tensordot(a.im, c_re, axes=axes)
        return HermMatrix(re, im, backend)

    __call__ = apply

    def is_completely_positive(self, tol: float | None = None) -> bool:
        return psd_check(self.choi, tol).is_psd

    def scale(self, c: Any) -> "ChoiMap":
        return ChoiMap(self.choi.scale(c), self.dim)

    def __add__(self, other: "ChoiMap") -> "ChoiMap":
        return ChoiMap(self.choi + other.choi, self.dim)

    def to_backend(self, backend: Backend) -> "ChoiMap":
        return ChoiMap(self.choi.to_backend(backend), self.dim)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChoiMap):
            return NotImplemented
        return self.dim == other.dim and self.choi == other.choi

    __hash__ = None


def apply_choi_map(phi: ChoiMap, a: HermMatrix) -> HermMatrix:
    return phi.apply(a)


# Measures

def _require_psd(m: HermMatrix, what: str, tol: float | None) -> None:
    verdict: PsdVerdict = psd_check(m, tol)
    if not verdict.is_psd:
        raise ValueError(f"{what} is not positive semidefinite")


@dataclass(frozen=True)
class ScalarAtomicMeasure:
    """sum_i m_i delta_{t_i} with m_i >= 0."""
    nvars: int
    atoms: tuple[tuple[Point, Number], ...]

    def __post_init__(self) -> None:
        for t, m in self.atoms:
            if len(t) != self.nvars:
                raise DimensionError(f"Atom point {t} has {len(t)} coordinates, expected {self.nvars}")
            if m < 0 and not (isinstance(m, float) and m > -1e-12):
                raise ValueError(f"Negative mass {m} at {t}")

    def moment(self, alpha: Sequence[int]) -> Number:
        a = MultiIndex(alpha)
        return sum((m * a.evaluate(t) for t, m in self.atoms), 0)

    def total_mass(self) -> Number:
        return sum((m for _, m in self.atoms), 0)


@dataclass(frozen=True, eq=False)
class AtomicOperatorMeasure:
    """mu = sum_i W_i delta_{t_i} with PSD weights W_i; mu(S) = sum over atoms in S."""
    nvars: int
    dim: int
    backend: Backend
    atoms: tuple[tuple[Point, HermMatrix], ...]
    support: RegionK | None = None

    @classmethod
    def create(
        cls,
        atoms: Sequence[tuple[Sequence, HermMatrix]],
        nvars: int,
        dim: int,
        backend: Backend = Backend.EXACT,
        support: RegionK | None = None,
        check: bool = True,
        tol: float | None = None,
    ) -> "AtomicOperatorMeasure":
        norm = []
        for t, w in atoms:
            if w.dim != dim:
                raise DimensionError(f"Weight of dimension {w.dim}, expected {dim}")
            norm.append((_point(t, nvars, backend), w.to_backend(backend).check_hermitian()))
        out = cls(nvars, dim, backend, tuple(norm), support)
        if check:
            out.validate(tol)
        return out

    def validate(self, tol: float | None = None) -> "AtomicOperatorMeasure":
        for t, w in self.atoms:
            _require_psd(w, f"Weight at {t}", tol)
            if self.support is not None and not self.support.contains(t):
                raise RegionError(f"Atom {t} lies outside {self.support.describe()}")
        return self

    def total_mass(self) -> HermMatrix:
        return self.mass_of(None)

    def mass_of(self, region: RegionK | None) -> HermMatrix:
        """mu(S) for S a region (None = everything)."""
        acc = HermMatrix.zero(self.dim, self.backend)
        for t, w in self.atoms:
            if region is None or region.contains(t):
                acc = acc + w
        return acc

    def integrate_monomial(self, alpha: Sequence[int]) -> HermMatrix:
        """sum_i t_i^alpha W_i."""
        a = MultiIndex(alpha)
        if len(a) != self.nvars:
            raise DimensionError(f"Exponent {tuple(a)} for a measure on R^{self.nvars}")
        acc = HermMatrix.zero(self.dim, self.backend)
        for t, w in self.atoms:
            v = a.evaluate(t)
            if v != 0:
                acc = acc + w.scale(v)
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AtomicOperatorMeasure):
            return NotImplemented
        if (self.nvars, self.dim, len(self.atoms)) != (other.nvars, other.dim, len(other.atoms)):
            return False
        return all(t == s and w == v for (t, w), (s, v) in zip(self.atoms, other.atoms)) and self.support == other.support

    __hash__ = None


@dataclass(frozen=True, eq=False)
class AtomicMapMeasure:
    """nu = sum_i Phi_i delta_{t_i} with completely positive Phi_i; nu[A] = sum_i Phi_i(A) delta_{t_i}."""
    nvars: int
    dim: int
    backend: Backend
    atoms: tuple[tuple[Point, ChoiMap], ...]
    support: RegionK | None = None

    @classmethod
    def create(
        cls,
        atoms: Sequence[tuple[Sequence, ChoiMap]],
        nvars: int,
        dim: int,
        backend: Backend = Backend.EXACT,
        support: RegionK | None = None,
        check: bool = True,
        tol: float | None = None,
    ) -> "AtomicMapMeasure":
        norm = []
        for t, phi in atoms:
            if phi.dim != dim:
                raise DimensionError(f"Map on dimension {phi.dim}, expected {dim}")
            norm.append((_point(t, nvars, backend), phi.to_backend(backend)))
        out = cls(nvars, dim, backend, tuple(norm), support)
        if check:
            out.validate(tol)
        return out

    def validate(self, tol: float | None = None) -> "AtomicMapMeasure":
        for t, phi in self.atoms:
            _require_psd(phi.choi, f"Choi matrix at {t}", tol)
            if self.support is not None and not self.support.contains(t):
                raise RegionError(f"Atom {t} lies outside {self.support.describe()}")
        return self

    def operator_measure(self, a: HermMatrix) -> AtomicOperatorMeasure:
        """nu[A]: the operator-valued measure S -> sum_{t_i in S} Phi_i(A) (PSD when A is)."""
        return AtomicOperatorMeasure(
            self.nvars, self.dim, self.backend,
            tuple((t, phi.apply(a)) for t, phi in self.atoms), self.support,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AtomicMapMeasure):
            return NotImplemented
        if (self.nvars, self.dim, len(self.atoms)) != (other.nvars, other.dim, len(other.atoms)):
            return False
        return all(t == s and p == q for (t, p), (s, q) in zip(self.atoms, other.atoms)) and self.support == other.support

    __hash__ = None


AnyMeasure = AtomicOperatorMeasure | AtomicMapMeasure


# Integration

def integrate_monomial(mu: AtomicOperatorMeasure, alpha: Sequence[int]) -> HermMatrix:
    return mu.integrate_monomial(alpha)


def integrate_poly_map_measure(nu: AtomicMapMeasure, p: MatrixPolynomial) -> HermMatrix:
    """int p dnu = sum_i Phi_i(p(t_i)), independent of how p is decomposed."""
    if (p.nvars, p.dim) != (nu.nvars, nu.dim):
        raise DimensionError("Polynomial and measure differ in variables or dimension")
    backend = Backend.EXACT if nu.backend is p.backend is Backend.EXACT else Backend.APPROX
    acc = HermMatrix.zero(nu.dim, backend)
    for t, phi in nu.atoms:
        acc = acc + phi.apply(p.eval(t))
    return acc


def integrate_decomposition(nu: AtomicMapMeasure, terms: Sequence[tuple[HermMatrix, ScalarPolynomial]]) -> HermMatrix:
    """int p_1 dnu[A_1] + ... + int p_m dnu[A_m] for p = A_1 p_1 + ... + A_m p_m."""
    acc = HermMatrix.zero(nu.dim, nu.backend)
    for a, g in terms:
        if g.nvars != nu.nvars:
            raise DimensionError("Scalar polynomial and measure differ in variables")
        for t, w in nu.operator_measure(a).atoms:
            v = g(t)
            if v != 0:
                acc = acc + w.scale(v)
    return acc


def pair_functional(mu: AtomicOperatorMeasure, p: MatrixPolynomial) -> Number:
    """sum_i tr(W_i p(t_i)): a functional-valued measure realised by trace pairing."""
    if (p.nvars, p.dim) != (mu.nvars, mu.dim):
        raise DimensionError("Polynomial and measure differ in variables or dimension")
    return sum((w.inner(p.eval(t)) for t, w in mu.atoms), 0)


def pushforward_shift(mu: AnyMeasure, y: Sequence) -> AnyMeasure:
    """Translate every atom t -> t - y; the support becomes K - y."""
    ys = _point(y, mu.nvars, mu.backend)
    atoms = tuple((tuple(a - b for a, b in zip(t, ys)), w) for t, w in mu.atoms)
    support = mu.support.shifted([-v for v in ys]) if mu.support is not None else None
    return type(mu)(mu.nvars, mu.dim, mu.backend, atoms, support)


def compress(mu: AtomicOperatorMeasure, a: ComplexVector) -> ScalarAtomicMeasure:
    """mu_a = <mu(.) a, a>: atoms (t_i, <W_i a, a>)."""
    a = a.to_backend(mu.backend)
    if mu.backend is Backend.EXACT:
        return ScalarAtomicMeasure(mu.nvars, tuple((t, w.quad_form(a)) for t, w in mu.atoms))
    norm_sq = float(np.sum(a.re**2) + np.sum(a.im**2))
    atoms = []
    for t, w in mu.atoms:
        m = w.quad_form(a)
        # rounding on a PSD weight; scale with |W| |a|^2
        if -DEFAULT_PSD_TOL * (1.0 + w.max_abs() * norm_sq) <= m < 0:
            m = 0.0
        atoms.append((t, m))
    return ScalarAtomicMeasure(mu.nvars, tuple(atoms))


# Random instances

def _random_points(rng: np.random.Generator, n_atoms: int, region: RegionK, backend: Backend) -> list[Point]:
    return [tuple(to_scalar(v, backend) for v in region.sample_point(rng)) for _ in range(n_atoms)]


def random_operator_measure(
    nvars: int,
    dim: int,
    n_atoms: int,
    seed: int | np.random.Generator | None = None,
    region: RegionK | None = None,
    backend: Backend = Backend.EXACT,
) -> AtomicOperatorMeasure:
    """Rational atoms inside `region` (default [-1, 1]^n) with random PSD weights G*G."""
    rng = make_rng(seed)
    region = region or RegionK.box([-1] * nvars, [1] * nvars)
    points = _random_points(rng, n_atoms, region, backend)
    atoms = tuple((t, random_psd(rng, dim, backend, rank=int(rng.integers(1, dim + 1)))) for t in points)
    return AtomicOperatorMeasure(nvars, dim, backend, atoms, region)


def random_choi_map(rng: np.random.Generator, dim: int, backend: Backend = Backend.EXACT, n_kraus: int | None = None) -> ChoiMap:
    n_kraus = n_kraus or int(rng.integers(1, 3))
    return ChoiMap.from_kraus([random_complex_matrix(rng, dim, dim, backend) for _ in range(n_kraus)], backend)


def random_map_measure(
    nvars: int,
    dim: int,
    n_atoms: int,
    seed: int | np.random.Generator | None = None,
    region: RegionK | None = None,
    backend: Backend = Backend.EXACT,
) -> AtomicMapMeasure:
    """Rational atoms inside `region` (default [-1, 1]^n) carrying random Kraus-form CP maps."""
    rng = make_rng(seed)
    region = region or RegionK.box([-1] * nvars, [1] * nvars)
    points = _random_points(rng, n_atoms, region, backend)
    atoms = tuple((t, random_choi_map(rng, dim, backend)) for t in points)
    return AtomicMapMeasure(nvars, dim, backend, atoms, region)
