"""Matrix-valued multivariate polynomials, regions K and grid-sampled positivity."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Iterable, Iterator, Literal, Mapping, Sequence

import numpy as np

from .algebra import (
    DEFAULT_PSD_TOL,
    Backend,
    HermMatrix,
    MultiIndex,
    Number,
    basis_coordinates,
    grlex_key,
    hermitian_basis,
    to_scalar,
)
from .algebra.jacobi import jacobi_eigh
from .algebra.scalars import zeros
from .config import settings
from .errors import DimensionError, RegionError

logger = logging.getLogger(__name__)

NEG_INF = float("-inf")


def _index(alpha: Sequence[int], nvars: int) -> MultiIndex:
    a = alpha if isinstance(alpha, MultiIndex) else MultiIndex(alpha)
    if len(a) != nvars:
        raise DimensionError(f"Exponent {tuple(a)} has {len(a)} entries, expected {nvars}")
    return a


def _coerce(value: Any) -> Number:
    """Keep floats as floats, everything else becomes a Fraction."""
    if isinstance(value, (float, np.floating)):
        return float(value)
    return to_scalar(value, Backend.EXACT)


def _points(x: Sequence, nvars: int, backend: Backend) -> list[Number]:
    if len(x) != nvars:
        raise DimensionError(f"Point {tuple(x)} has {len(x)} coordinates, expected {nvars}")
    return [to_scalar(v, backend) for v in x]


def _monomial_values(exponents: np.ndarray, points: np.ndarray) -> np.ndarray:
    """(P, T) table of x^alpha for float points (P, n) and exponents (T, n)."""
    return np.prod(points[:, None, :] ** exponents[None, :, :], axis=2)


# Scalar polynomials

@dataclass(frozen=True, eq=False)
class ScalarPolynomial:
    """Real polynomial sum_alpha c_alpha x^alpha (constraint polynomials, coordinates)."""
    nvars: int
    coeffs: Mapping[MultiIndex, Number]

    @classmethod
    def of(cls, coeffs: Mapping[Sequence[int], Any] | Iterable[tuple[Sequence[int], Any]], nvars: int) -> "ScalarPolynomial":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        out: dict[MultiIndex, Number] = {}
        for alpha, c in items:
            a = _index(alpha, nvars)
            out[a] = out.get(a, 0) + _coerce(c)
        return cls._build(nvars, out)

    @classmethod
    def _build(cls, nvars: int, coeffs: dict[MultiIndex, Number]) -> "ScalarPolynomial":
        kept = {a: c for a, c in coeffs.items() if c != 0}
        return cls(nvars, dict(sorted(kept.items(), key=lambda kv: grlex_key(kv[0]))))

    @classmethod
    def constant(cls, c: Any, nvars: int) -> "ScalarPolynomial":
        return cls.of({MultiIndex.zero(nvars): c}, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "ScalarPolynomial":
        return cls.of({MultiIndex.unit(nvars, i): 1}, nvars)

    @classmethod
    def monomial(cls, alpha: Sequence[int], c: Any = 1) -> "ScalarPolynomial":
        return cls.of({tuple(alpha): c}, len(alpha))

    @property
    def degree(self) -> int | float:
        return max((a.degree for a in self.coeffs), default=NEG_INF)

    def is_zero(self) -> bool:
        return not self.coeffs

    def items(self) -> Iterator[tuple[MultiIndex, Number]]:
        return iter(self.coeffs.items())

    def __call__(self, x: Sequence) -> Number:
        if len(x) != self.nvars:
            raise DimensionError(f"Point has {len(x)} coordinates, expected {self.nvars}")
        return sum((c * a.evaluate(x) for a, c in self.coeffs.items()), 0)

    def evaluate_grid(self, points: np.ndarray) -> np.ndarray:
        if not self.coeffs:
            return np.zeros(len(points))
        exps = np.array(list(self.coeffs), dtype=np.float64)
        vals = np.array([float(c) for c in self.coeffs.values()])
        return _monomial_values(exps, np.asarray(points, dtype=np.float64)).dot(vals)

    def _check(self, other: "ScalarPolynomial") -> None:
        if other.nvars != self.nvars:
            raise DimensionError(f"Variable counts differ: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "ScalarPolynomial | Number") -> "ScalarPolynomial":
        if not isinstance(other, ScalarPolynomial):
            other = ScalarPolynomial.constant(other, self.nvars)
        self._check(other)
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, 0) + c
        return ScalarPolynomial._build(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "ScalarPolynomial":
        return ScalarPolynomial(self.nvars, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other: "ScalarPolynomial | Number") -> "ScalarPolynomial":
        return self + (-other)

    def __rsub__(self, other: Number) -> "ScalarPolynomial":
        return (-self) + other

    def __mul__(self, other: "ScalarPolynomial | Number") -> "ScalarPolynomial":
        if not isinstance(other, ScalarPolynomial):
            c = _coerce(other)
            return ScalarPolynomial._build(self.nvars, {a: v * c for a, v in self.coeffs.items()})
        self._check(other)
        out: dict[MultiIndex, Number] = {}
        for a, c in self.coeffs.items():
            for b, e in other.coeffs.items():
                ab = a.add(b)
                out[ab] = out.get(ab, 0) + c * e
        return ScalarPolynomial._build(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScalarPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and dict(self.coeffs) == dict(other.coeffs)

    __hash__ = None

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*x^{tuple(a)}" for a, c in self.coeffs.items())


# Matrix polynomials

class PolynomialBuilder:
    """Mutable accumulator of matrix coefficients; `build()` gives the canonical polynomial."""

    def __init__(self, nvars: int, dim: int, backend: Backend = Backend.EXACT):
        self.nvars = nvars
        self.dim = dim
        self.backend = backend
        self._re: dict[MultiIndex, np.ndarray] = {}
        self._im: dict[MultiIndex, np.ndarray] = {}

    def add(self, alpha: Sequence[int], coeff: HermMatrix, factor: Any = 1) -> "PolynomialBuilder":
        a = _index(alpha, self.nvars)
        if coeff.dim != self.dim:
            raise DimensionError(f"Coefficient of dimension {coeff.dim}, expected {self.dim}")
        if coeff.backend is not self.backend:
            coeff = coeff.to_backend(self.backend)
        f = to_scalar(factor, self.backend)
        if f == 0:
            return self
        re, im = coeff.re * f, coeff.im * f
        if a in self._re:
            self._re[a] = self._re[a] + re
            self._im[a] = self._im[a] + im
        else:
            self._re[a], self._im[a] = re, im
        return self

    def add_polynomial(self, p: "MatrixPolynomial", factor: Any = 1, shift: Sequence[int] | None = None) -> "PolynomialBuilder":
        """Add factor * x^shift * p."""
        for alpha, c in p.terms.items():
            self.add(alpha if shift is None else alpha.add(shift), c, factor)
        return self

    def build(self) -> "MatrixPolynomial":
        terms = {a: HermMatrix(self._re[a], self._im[a], self.backend) for a in self._re}
        return MatrixPolynomial._build(self.nvars, self.dim, self.backend, terms)


@dataclass(frozen=True, eq=False)
class MatrixPolynomial:
    """p = sum_alpha p_alpha x^alpha with Hermitian d x d coefficients.

    Terms are kept in graded-lex order and zero coefficients are never stored.
    """
    nvars: int
    dim: int
    backend: Backend
    terms: Mapping[MultiIndex, HermMatrix] = field(default_factory=dict)

    # Construction

    @classmethod
    def _build(cls, nvars: int, dim: int, backend: Backend, terms: Mapping[MultiIndex, HermMatrix]) -> "MatrixPolynomial":
        kept = {a: c for a, c in terms.items() if not c.is_zero()}
        return cls(nvars, dim, backend, dict(sorted(kept.items(), key=lambda kv: grlex_key(kv[0]))))

    @classmethod
    def of(
        cls,
        terms: Mapping[Sequence[int], HermMatrix] | Iterable[tuple[Sequence[int], HermMatrix]],
        nvars: int,
        dim: int,
        backend: Backend = Backend.EXACT,
    ) -> "MatrixPolynomial":
        builder = PolynomialBuilder(nvars, dim, backend)
        for alpha, c in (terms.items() if isinstance(terms, Mapping) else terms):
            builder.add(alpha, c.check_hermitian())
        return builder.build()

    @classmethod
    def zero(cls, nvars: int, dim: int, backend: Backend = Backend.EXACT) -> "MatrixPolynomial":
        return cls(nvars, dim, backend, {})

    @classmethod
    def constant(cls, a: HermMatrix, nvars: int) -> "MatrixPolynomial":
        return cls.monomial(a, MultiIndex.zero(nvars))

    @classmethod
    def monomial(cls, a: HermMatrix, alpha: Sequence[int]) -> "MatrixPolynomial":
        alpha = MultiIndex(alpha)
        return cls._build(len(alpha), a.dim, a.backend, {alpha: a})

    @classmethod
    def from_coordinates(cls, polys: Sequence[ScalarPolynomial], dim: int, backend: Backend = Backend.EXACT) -> "MatrixPolynomial":
        """sum_i E_i (x) p_i over the fixed Hermitian basis."""
        if len(polys) != dim * dim:
            raise DimensionError(f"Expected {dim * dim} coordinate polynomials, got {len(polys)}")
        nvars = polys[0].nvars
        builder = PolynomialBuilder(nvars, dim, backend)
        for e, p in zip(hermitian_basis(dim, backend), polys):
            for alpha, c in p.items():
                builder.add(alpha, e, c)
        return builder.build()

    # Inspection

    @property
    def degree(self) -> int | float:
        """max |alpha| over the support; -inf for the zero polynomial."""
        return max((a.degree for a in self.terms), default=NEG_INF)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, alpha: Sequence[int]) -> HermMatrix:
        c = self.terms.get(_index(alpha, self.nvars))
        return c if c is not None else HermMatrix.zero(self.dim, self.backend)

    def items(self) -> Iterator[tuple[MultiIndex, HermMatrix]]:
        return iter(self.terms.items())

    def coordinate_polys(self) -> list[ScalarPolynomial]:
        """p_i with p = sum_i E_i (x) p_i."""
        coords: list[dict[MultiIndex, Number]] = [dict() for _ in range(self.dim * self.dim)]
        for alpha, c in self.terms.items():
            for i, v in enumerate(basis_coordinates(c)):
                if v != 0:
                    coords[i][alpha] = v
        return [ScalarPolynomial._build(self.nvars, c) for c in coords]

    # Evaluation

    def eval(self, x: Sequence) -> HermMatrix:
        """p(x) by direct monomial evaluation."""
        xs = _points(x, self.nvars, self.backend)
        re, im = zeros((self.dim, self.dim), self.backend), zeros((self.dim, self.dim), self.backend)
        for alpha, c in self.terms.items():
            v = alpha.evaluate(xs)
            re = re + c.re * v
            im = im + c.im * v
        return HermMatrix(re, im, self.backend)

    __call__ = eval

    def eval_grid(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Float real and imaginary parts of p at each row of `points`, shape (P, d, d)."""
        points = np.asarray(points, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != self.nvars:
            raise DimensionError(f"Expected points of shape (P, {self.nvars}), got {points.shape}")
        shape = (len(points), self.dim, self.dim)
        if not self.terms:
            return np.zeros(shape), np.zeros(shape)
        exps = np.array(list(self.terms), dtype=np.float64)
        vals = _monomial_values(exps, points)
        re = np.array([np.asarray(c.re, dtype=np.float64) for c in self.terms.values()])
        im = np.array([np.asarray(c.im, dtype=np.float64) for c in self.terms.values()])
        return np.tensordot(vals, re, axes=1), np.tensordot(vals, im, axes=1)

    # Calculus

    def derivative(self, alpha: Sequence[int]) -> "MatrixPolynomial":
        """d^alpha p: the coefficient of x^gamma is p_{gamma+alpha} * (gamma+alpha)!/gamma!."""
        alpha = _index(alpha, self.nvars)
        builder = PolynomialBuilder(self.nvars, self.dim, self.backend)
        for beta, c in self.terms.items():
            if alpha.precedes(beta):
                builder.add(beta.sub(alpha), c, beta.falling(alpha))
        return builder.build()

    def shift_arg(self, y: Sequence) -> "MatrixPolynomial":
        """q with q(x) = p(x + y), by binomial expansion of each monomial."""
        ys = _points(y, self.nvars, self.backend)
        if all(v == 0 for v in ys):
            return self
        builder = PolynomialBuilder(self.nvars, self.dim, self.backend)
        for beta, c in self.terms.items():
            for alpha in beta.lower_set():
                builder.add(alpha, c, beta.binom(alpha) * beta.sub(alpha).evaluate(ys))
        return builder.build()

    # Arithmetic

    def _check(self, other: "MatrixPolynomial") -> None:
        if (self.nvars, self.dim) != (other.nvars, other.dim):
            raise DimensionError(
                f"Polynomials differ in shape: (n={self.nvars}, d={self.dim}) vs (n={other.nvars}, d={other.dim})"
            )

    def __add__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        self._check(other)
        backend = Backend.EXACT if self.backend is other.backend is Backend.EXACT else Backend.APPROX
        return PolynomialBuilder(self.nvars, self.dim, backend).add_polynomial(self).add_polynomial(other).build()

    def __neg__(self) -> "MatrixPolynomial":
        return MatrixPolynomial(self.nvars, self.dim, self.backend, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        return self + (-other)

    def scale(self, c: Any) -> "MatrixPolynomial":
        return PolynomialBuilder(self.nvars, self.dim, self.backend).add_polynomial(self, c).build()

    def __mul__(self, c: Any) -> "MatrixPolynomial":
        if isinstance(c, ScalarPolynomial):
            return self.times_scalar_poly(c)
        return self.scale(c)

    __rmul__ = __mul__

    def times_monomial(self, beta: Sequence[int]) -> "MatrixPolynomial":
        beta = _index(beta, self.nvars)
        return MatrixPolynomial(self.nvars, self.dim, self.backend, {a.add(beta): c for a, c in self.terms.items()})

    def times_scalar_poly(self, g: ScalarPolynomial) -> "MatrixPolynomial":
        if g.nvars != self.nvars:
            raise DimensionError(f"Variable counts differ: {self.nvars} vs {g.nvars}")
        builder = PolynomialBuilder(self.nvars, self.dim, self.backend)
        for gamma, v in g.items():
            builder.add_polynomial(self, v, shift=gamma)
        return builder.build()

    def to_backend(self, backend: Backend) -> "MatrixPolynomial":
        if backend is self.backend:
            return self
        return MatrixPolynomial._build(self.nvars, self.dim, backend, {a: c.to_backend(backend) for a, c in self.terms.items()})

    # Comparison

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        if (self.nvars, self.dim) != (other.nvars, other.dim) or set(self.terms) != set(other.terms):
            return False
        return all(c == other.terms[a] for a, c in self.terms.items())

    __hash__ = None

    def allclose(self, other: "MatrixPolynomial", atol: float = 1e-10) -> bool:
        self._check(other)
        zero = HermMatrix.zero(self.dim, Backend.APPROX)
        return all(
            self.terms.get(a, zero).allclose(other.terms.get(a, zero), atol)
            for a in set(self.terms) | set(other.terms)
        )

    def __repr__(self) -> str:
        return f"MatrixPolynomial(nvars={self.nvars}, dim={self.dim}, backend={self.backend.value}, terms={len(self.terms)})"


# Regions

RegionKind = Literal["all", "box", "ball"]


def _fractions(values: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(to_scalar(v, Backend.EXACT)) for v in values)


@dataclass(frozen=True)
class RegionK:
    """A closed set K: all of R^n, a box or a ball, translated by `shift`.

    Points of the region are base points plus `shift`, so K - y is `K.shifted(-y)`.
    Bounds are stored as Fractions so membership tests are exact.
    """
    kind: RegionKind
    nvars: int
    lo: tuple[Fraction, ...] = ()
    hi: tuple[Fraction, ...] = ()
    center: tuple[Fraction, ...] = ()
    radius: Fraction | None = None
    shift: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        if self.nvars < 1:
            raise RegionError("A region needs at least one variable")
        object.__setattr__(self, "shift", _fractions(self.shift) if self.shift else (Fraction(0),) * self.nvars)
        if len(self.shift) != self.nvars:
            raise RegionError(f"Shift has {len(self.shift)} coordinates, expected {self.nvars}")
        if self.kind == "box":
            object.__setattr__(self, "lo", _fractions(self.lo))
            object.__setattr__(self, "hi", _fractions(self.hi))
            if not (len(self.lo) == len(self.hi) == self.nvars):
                raise RegionError(f"Box bounds must both have {self.nvars} entries")
            if any(a > b for a, b in zip(self.lo, self.hi)):
                raise RegionError("Box bounds need lo <= hi in every coordinate")
        elif self.kind == "ball":
            object.__setattr__(self, "center", _fractions(self.center))
            if len(self.center) != self.nvars:
                raise RegionError(f"Ball center must have {self.nvars} entries")
            if self.radius is None or to_scalar(self.radius, Backend.EXACT) <= 0:
                raise RegionError("Ball radius must be positive")
            object.__setattr__(self, "radius", Fraction(to_scalar(self.radius, Backend.EXACT)))
        elif self.kind != "all":
            raise RegionError(f"Unknown region kind: {self.kind!r}")

    @classmethod
    def all_space(cls, nvars: int = 1) -> "RegionK":
        return cls("all", nvars)

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "RegionK":
        return cls("box", len(lo), lo=tuple(lo), hi=tuple(hi))

    @classmethod
    def interval(cls, lo: Any, hi: Any) -> "RegionK":
        return cls.box([lo], [hi])

    @classmethod
    def ball(cls, center: Sequence, radius: Any) -> "RegionK":
        return cls("ball", len(center), center=tuple(center), radius=radius)

    @property
    def is_bounded(self) -> bool:
        return self.kind != "all"

    def shifted(self, v: Sequence) -> "RegionK":
        """The region translated by v (points x + v)."""
        if len(v) != self.nvars:
            raise DimensionError(f"Shift has {len(v)} coordinates, expected {self.nvars}")
        new = tuple(s + f for s, f in zip(self.shift, _fractions(v)))
        return RegionK(self.kind, self.nvars, self.lo, self.hi, self.center, self.radius, new)

    def _lo(self) -> tuple[Fraction, ...]:
        return tuple(a + s for a, s in zip(self.lo, self.shift))

    def _hi(self) -> tuple[Fraction, ...]:
        return tuple(b + s for b, s in zip(self.hi, self.shift))

    def _center(self) -> tuple[Fraction, ...]:
        return tuple(c + s for c, s in zip(self.center, self.shift))

    def contains(self, x: Sequence) -> bool:
        """Exact membership test (float inputs are converted exactly)."""
        if len(x) != self.nvars:
            raise DimensionError(f"Point has {len(x)} coordinates, expected {self.nvars}")
        xs = _fractions(x)
        if self.kind == "all":
            return True
        if self.kind == "box":
            return all(a <= v <= b for a, v, b in zip(self._lo(), xs, self._hi()))
        return sum((v - c) ** 2 for v, c in zip(xs, self._center())) <= self.radius ** 2

    def contains_many(self, points: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
        """Float membership mask for grid sampling; boundary points within rtol count as inside."""
        points = np.asarray(points, dtype=np.float64)
        if self.kind == "all":
            return np.ones(len(points), dtype=bool)
        if self.kind == "box":
            lo = np.array([float(v) for v in self._lo()])
            hi = np.array([float(v) for v in self._hi()])
            slack = rtol * (1.0 + np.maximum(np.abs(lo), np.abs(hi)))
            return np.all((points >= lo - slack) & (points <= hi + slack), axis=1)
        c = np.array([float(v) for v in self._center()])
        r2 = float(self.radius) ** 2
        return np.sum((points - c) ** 2, axis=1) <= r2 * (1.0 + rtol) + rtol

    def constraints(self) -> list[ScalarPolynomial]:
        """Defining polynomials g with K = {g >= 0}: one per coordinate for boxes, one for balls."""
        n = self.nvars
        if self.kind == "all":
            return []
        if self.kind == "box":
            out = []
            for i, (a, b) in enumerate(zip(self._lo(), self._hi())):
                x = ScalarPolynomial.variable(i, n)
                out.append((x - a) * (b - x))
            return out
        g = ScalarPolynomial.constant(self.radius ** 2, n)
        for i, c in enumerate(self._center()):
            xc = ScalarPolynomial.variable(i, n) - c
            g = g - xc * xc
        return [g]

    def bounding_box(self) -> list[tuple[Fraction, Fraction]] | None:
        if self.kind == "all":
            return None
        if self.kind == "box":
            return list(zip(self._lo(), self._hi()))
        return [(c - self.radius, c + self.radius) for c in self._center()]

    def sample_point(self, rng: np.random.Generator, denominator: int = 8, max_tries: int = 1000) -> tuple[Fraction, ...]:
        """A random rational point of the region (all-space draws from [-1, 1]^n)."""
        box = self.bounding_box() or [(Fraction(-1), Fraction(1))] * self.nvars
        for _ in range(max_tries):
            ks = rng.integers(0, denominator + 1, size=self.nvars)
            x = tuple(a + (b - a) * Fraction(int(k), denominator) for (a, b), k in zip(box, ks))
            if self.contains(x):
                return x
        return self._center()

    def describe(self) -> str:
        if self.kind == "all":
            return f"R^{self.nvars}"
        if self.kind == "box":
            return " x ".join(f"[{str(a)}, {str(b)}]" for a, b in zip(self._lo(), self._hi()))
        return f"ball(center=({', '.join(str(c) for c in self._center())}), radius={str(self.radius)})"


# Grid sampling

@dataclass(frozen=True)
class GridSpec:
    """Tensor grid with `points_per_axis` points on each axis of `bounds` (or of K's bounding box)."""
    points_per_axis: int = field(default_factory=lambda: settings.grid_points)
    bounds: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self) -> None:
        if self.points_per_axis < 2:
            raise RegionError("A grid needs at least 2 points per axis")
        if self.bounds is not None:
            object.__setattr__(self, "bounds", tuple((float(a), float(b)) for a, b in self.bounds))
            if any(a > b for a, b in self.bounds):
                raise RegionError("Grid bounds need lo <= hi")

    def points(self, region: RegionK) -> np.ndarray:
        """Grid points inside the region, ordered graded-lex by grid index."""
        if self.bounds is not None:
            if len(self.bounds) != region.nvars:
                raise DimensionError(f"Grid has {len(self.bounds)} axes, region has {region.nvars} variables")
            box = self.bounds
        else:
            bb = region.bounding_box()
            if bb is None:
                raise RegionError("Sampling all of R^n needs explicit grid bounds")
            box = tuple((float(a), float(b)) for a, b in bb)
        axes = [np.linspace(a, b, self.points_per_axis) for a, b in box]
        index = sorted(product(range(self.points_per_axis), repeat=region.nvars), key=grlex_key)
        pts = np.array([[axes[i][k] for i, k in enumerate(idx)] for idx in index], dtype=np.float64)
        return pts[region.contains_many(pts)]


def min_eigenvalues(re: np.ndarray, im: np.ndarray) -> np.ndarray:
    """Smallest eigenvalue of each Hermitian re + i*im in a (P, d, d) stack."""
    if re.shape[0] == 0:
        return np.zeros(0)
    if np.any(im != 0):
        stack = np.concatenate(
            [np.concatenate([re, -im], axis=2), np.concatenate([im, re], axis=2)], axis=1
        )
    else:
        stack = re
    w, _ = jacobi_eigh(stack)
    return w.min(axis=1)


@dataclass(frozen=True)
class PositivityReport:
    """Worst grid point of a Pos(K) sample; a fail certifies p is not in Pos(K)."""
    passed: bool
    worst_point: tuple[float, ...]
    min_eigenvalue: float
    tolerance: float
    points_tested: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "worstPoint": list(self.worst_point),
            "minEigenvalue": self.min_eigenvalue,
            "tolerance": self.tolerance,
            "pointsTested": self.points_tested,
        }


def pos_sample(
    p: MatrixPolynomial,
    region: RegionK,
    grid: GridSpec | None = None,
    tol: float | None = None,
) -> PositivityReport:
    """Sample p on grid points inside K; pass iff the worst minimum eigenvalue is >= -tol.

    tol defaults to 1e-9 * (1 + largest entry seen on the grid). Ties between
    equally bad points go to the first grid point in graded-lex order.
    """
    if region.nvars != p.nvars:
        raise DimensionError(f"Region has {region.nvars} variables, polynomial has {p.nvars}")
    grid = grid or GridSpec()
    pts = grid.points(region)
    if len(pts) == 0:
        raise RegionError(f"No grid point lies in {region.describe()}")
    re, im = p.eval_grid(pts)
    mins = min_eigenvalues(re, im)
    if tol is None:
        scale = float(max(np.max(np.abs(re), initial=0.0), np.max(np.abs(im), initial=0.0)))
        tol = DEFAULT_PSD_TOL * (1.0 + scale)
    k = int(np.argmin(mins))
    worst = float(mins[k])
    logger.debug(f"pos_sample: {len(pts)} points, worst min eigenvalue {worst:.3e}")
    return PositivityReport(
        passed=bool(worst >= -tol),
        worst_point=tuple(float(v) for v in pts[k]),
        min_eigenvalue=worst,
        tolerance=float(tol),
        points_tested=len(pts),
    )
