"""Degree-truncated linear operators on Herm_d (x) R[x_1..x_n] and their canonical representation.

An operator is stored extensionally by the images T(E_i (x) x^alpha) of the fixed
Hermitian basis {E_i} for |alpha| <= D. The canonical representation is the
family of maps Q_beta with T = sum_beta (1/beta!) Q_beta x d^beta, recovered by
the binomial transform

    Q_beta(E_i) = sum_{alpha <= beta} binom(beta, alpha) (-1)^|beta-alpha| T(E_i (x) x^alpha) x^(beta-alpha).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .algebra import (
    Backend,
    HermMatrix,
    MultiIndex,
    basis_coordinates,
    hermitian_basis,
    monomials,
    to_scalar,
)
from .algebra.sampling import make_rng, random_hermitian
from .errors import DegreeOverflowError, DimensionError
from .matpoly import MatrixPolynomial, PolynomialBuilder
from .measures import ChoiMap
from .moments import OperatorSequence

logger = logging.getLogger(__name__)

ImageKey = tuple[int, MultiIndex]


def _check_keys(nvars: int, dim: int, max_deg: int) -> list[ImageKey]:
    if nvars < 1 or dim < 1 or max_deg < 0:
        raise DimensionError(f"Invalid operator shape: nvars={nvars}, dim={dim}, maxDeg={max_deg}")
    return [(i, a) for a in monomials(nvars, max_deg) for i in range(dim * dim)]


@dataclass(frozen=True, eq=False)
class PolyOperator:
    """T on polynomials of degree <= max_deg, given by images[(i, alpha)] = T(E_i (x) x^alpha)."""
    nvars: int
    dim: int
    max_deg: int
    backend: Backend
    images: Mapping[ImageKey, MatrixPolynomial]

    @classmethod
    def of(
        cls,
        images: Mapping[tuple[int, Sequence[int]], MatrixPolynomial],
        nvars: int,
        dim: int,
        max_deg: int,
        backend: Backend = Backend.EXACT,
    ) -> "PolyOperator":
        """Missing images are zero."""
        keys = _check_keys(nvars, dim, max_deg)
        given: dict[ImageKey, MatrixPolynomial] = {}
        for (i, alpha), p in images.items():
            key = (int(i), MultiIndex(alpha))
            if not 0 <= key[0] < dim * dim:
                raise DimensionError(f"Basis index {i} outside 0..{dim * dim - 1}")
            if len(key[1]) != nvars:
                raise DimensionError(f"Exponent {tuple(key[1])} for an operator in {nvars} variables")
            if key[1].degree > max_deg:
                raise DegreeOverflowError(key[1].degree, max_deg)
            if (p.nvars, p.dim) != (nvars, dim):
                raise DimensionError(f"Image for {key} has shape (n={p.nvars}, d={p.dim})")
            given[key] = p.to_backend(backend)
        zero = MatrixPolynomial.zero(nvars, dim, backend)
        return cls(nvars, dim, max_deg, backend, {k: given.get(k, zero) for k in keys})

    def image(self, i: int, alpha: Sequence[int]) -> MatrixPolynomial:
        return self.images[(i, MultiIndex(alpha))]

    def apply(self, p: MatrixPolynomial) -> MatrixPolynomial:
        return apply_operator(self, p)

    __call__ = apply

    def to_backend(self, backend: Backend) -> "PolyOperator":
        if backend is self.backend:
            return self
        return PolyOperator(
            self.nvars, self.dim, self.max_deg, backend,
            {k: p.to_backend(backend) for k, p in self.images.items()},
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyOperator):
            return NotImplemented
        if (self.nvars, self.dim, self.max_deg) != (other.nvars, other.dim, other.max_deg):
            return False
        return all(p == other.images[k] for k, p in self.images.items())

    __hash__ = None

    def __repr__(self) -> str:
        return f"PolyOperator(nvars={self.nvars}, dim={self.dim}, maxDeg={self.max_deg}, backend={self.backend.value})"


def _check_input(nvars: int, dim: int, max_deg: int, p: MatrixPolynomial) -> None:
    if (p.nvars, p.dim) != (nvars, dim):
        raise DimensionError(f"Operator on (n={nvars}, d={dim}) applied to a polynomial with (n={p.nvars}, d={p.dim})")
    if p.degree > max_deg:
        raise DegreeOverflowError(int(p.degree), max_deg)


def apply_operator(T: PolyOperator, p: MatrixPolynomial) -> MatrixPolynomial:
    """Linear extension of the stored basis images."""
    _check_input(T.nvars, T.dim, T.max_deg, p)
    builder = PolynomialBuilder(T.nvars, T.dim, T.backend)
    for alpha, c in p.items():
        for i, v in enumerate(basis_coordinates(c)):
            if v != 0:
                builder.add_polynomial(T.images[(i, alpha)], v)
    return builder.build()


# Canonical representation

@dataclass(frozen=True, eq=False)
class CanonicalRep:
    """Q_beta for |beta| <= max_deg, stored as q[(beta, i)] = Q_beta(E_i)."""
    nvars: int
    dim: int
    max_deg: int
    backend: Backend
    q: Mapping[tuple[MultiIndex, int], MatrixPolynomial]

    def q_of(self, beta: Sequence[int], a: HermMatrix) -> MatrixPolynomial:
        """Q_beta(A) for an arbitrary Hermitian A, by real-linear expansion in {E_i}."""
        beta = MultiIndex(beta)
        builder = PolynomialBuilder(self.nvars, self.dim, self.backend)
        for i, v in enumerate(basis_coordinates(a)):
            if v != 0:
                builder.add_polynomial(self.q[(beta, i)], v)
        return builder.build()

    def apply(self, p: MatrixPolynomial) -> MatrixPolynomial:
        """sum_beta (1/beta!) Q_beta(d^beta p), i.e. T(A x^gamma) = sum_{beta <= gamma} binom(gamma, beta) Q_beta(A) x^(gamma-beta)."""
        _check_input(self.nvars, self.dim, self.max_deg, p)
        builder = PolynomialBuilder(self.nvars, self.dim, self.backend)
        for gamma, c in p.items():
            for beta in gamma.lower_set():
                builder.add_polynomial(self.q_of(beta, c), gamma.binom(beta), shift=gamma.sub(beta))
        return builder.build()

    def sequence_at(self, a: HermMatrix, y: Sequence, order: int | None = None) -> OperatorSequence:
        """(Q_alpha(A)(y))_{|alpha| <= order}."""
        order = self.max_deg if order is None else order
        if order > self.max_deg:
            raise DegreeOverflowError(order, self.max_deg)
        entries = {beta: self.q_of(beta, a).eval(y) for beta in monomials(self.nvars, order)}
        return OperatorSequence(self.nvars, self.dim, order, self.backend, entries)

    def scaled(self, signs: Mapping[MultiIndex, Any]) -> "CanonicalRep":
        """Q_beta -> signs[beta] * Q_beta (missing betas unchanged)."""
        q = {}
        for (beta, i), p in self.q.items():
            s = signs.get(beta, 1)
            q[(beta, i)] = p if s == 1 else p.scale(s)
        return CanonicalRep(self.nvars, self.dim, self.max_deg, self.backend, q)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CanonicalRep):
            return NotImplemented
        if (self.nvars, self.dim, self.max_deg) != (other.nvars, other.dim, other.max_deg):
            return False
        return all(p == other.q[k] for k, p in self.q.items())

    __hash__ = None


def extract_canonical(T: PolyOperator) -> CanonicalRep:
    """Q_beta(E_i) = sum_{alpha <= beta} binom(beta, alpha) (-1)^|beta-alpha| T(E_i x^alpha) x^(beta-alpha)."""
    q = {}
    for beta in monomials(T.nvars, T.max_deg):
        lower = beta.lower_set()
        for i in range(T.dim * T.dim):
            builder = PolynomialBuilder(T.nvars, T.dim, T.backend)
            for alpha in lower:
                rest = beta.sub(alpha)
                sign = -1 if rest.degree % 2 else 1
                builder.add_polynomial(T.images[(i, alpha)], sign * beta.binom(alpha), shift=rest)
            q[(beta, i)] = builder.build()
    logger.debug(f"Extracted canonical form: {len(q)} maps Q_beta(E_i)")
    return CanonicalRep(T.nvars, T.dim, T.max_deg, T.backend, q)


def reconstruct(C: CanonicalRep) -> PolyOperator:
    """T(E_i x^beta) = sum_{alpha <= beta} binom(beta, alpha) Q_alpha(E_i) x^(beta-alpha)."""
    images = {}
    for beta in monomials(C.nvars, C.max_deg):
        lower = beta.lower_set()
        for i in range(C.dim * C.dim):
            builder = PolynomialBuilder(C.nvars, C.dim, C.backend)
            for alpha in lower:
                builder.add_polynomial(C.q[(alpha, i)], beta.binom(alpha), shift=beta.sub(alpha))
            images[(i, beta)] = builder.build()
    return PolyOperator(C.nvars, C.dim, C.max_deg, C.backend, images)


def canonical_from_constants(
    constants: Mapping[tuple[Sequence[int], int], HermMatrix],
    nvars: int,
    dim: int,
    max_deg: int,
    backend: Backend = Backend.EXACT,
) -> CanonicalRep:
    """Canonical data with constant Q_beta(E_i) = constants[(beta, i)]; missing entries are zero."""
    norm = {(MultiIndex(beta), int(i)): m for (beta, i), m in constants.items()}
    zero = MatrixPolynomial.zero(nvars, dim, backend)
    q = {}
    for beta in monomials(nvars, max_deg):
        for i in range(dim * dim):
            m = norm.get((beta, i))
            q[(beta, i)] = zero if m is None else MatrixPolynomial.constant(m.to_backend(backend), nvars)
    return CanonicalRep(nvars, dim, max_deg, backend, q)


# Operator constructors

def operator_from_function(
    fn: Callable[[int, MultiIndex, HermMatrix], MatrixPolynomial],
    nvars: int,
    dim: int,
    max_deg: int,
    backend: Backend = Backend.EXACT,
) -> PolyOperator:
    """Tabulate T from fn(i, alpha, E_i) = T(E_i (x) x^alpha)."""
    basis = hermitian_basis(dim, backend)
    images = {(i, a): fn(i, a, basis[i]) for i, a in _check_keys(nvars, dim, max_deg)}
    return PolyOperator.of(images, nvars, dim, max_deg, backend)


def identity_operator(nvars: int, dim: int, max_deg: int, backend: Backend = Backend.EXACT) -> PolyOperator:
    return operator_from_function(lambda i, a, e: MatrixPolynomial.monomial(e, a), nvars, dim, max_deg, backend)


def negation_operator(nvars: int, dim: int, max_deg: int, backend: Backend = Backend.EXACT) -> PolyOperator:
    """Q_0(A) = -A (x) 1, all other Q_beta = 0."""
    return operator_from_function(lambda i, a, e: MatrixPolynomial.monomial(-e, a), nvars, dim, max_deg, backend)


def multiplication_operator(var: int, nvars: int, dim: int, max_deg: int, backend: Backend = Backend.EXACT) -> PolyOperator:
    """p -> x_var * p."""
    unit = MultiIndex.unit(nvars, var)
    return operator_from_function(
        lambda i, a, e: MatrixPolynomial.monomial(e, a.add(unit)), nvars, dim, max_deg, backend
    )


def shift_example_operator(ttilde: ChoiMap, y: Any, max_deg: int) -> PolyOperator:
    """T(A (x) x^k) = T~(A) (x) (x + y)^k; y is a number (univariate) or a point."""
    ys = list(y) if isinstance(y, (list, tuple)) else [y]
    nvars, backend = len(ys), ttilde.backend
    ys = [to_scalar(v, backend) for v in ys]
    mapped = [ttilde.apply(e) for e in hermitian_basis(ttilde.dim, backend)]
    return operator_from_function(
        lambda i, a, e: MatrixPolynomial.monomial(mapped[i], a).shift_arg(ys),
        nvars, ttilde.dim, max_deg, backend,
    )


def random_operator(
    nvars: int,
    dim: int,
    max_deg: int,
    seed: int | np.random.Generator | None = None,
    backend: Backend = Backend.EXACT,
    image_deg: int | None = None,
    density: float = 0.5,
) -> PolyOperator:
    """Random rational images of degree <= image_deg (default max_deg)."""
    rng = make_rng(seed)
    image_deg = max_deg if image_deg is None else image_deg
    support = monomials(nvars, image_deg)

    def image(i: int, a: MultiIndex, e: HermMatrix) -> MatrixPolynomial:
        terms = [(g, random_hermitian(rng, dim, backend)) for g in support if rng.random() < density]
        return MatrixPolynomial.of(terms, nvars, dim, backend)

    return operator_from_function(image, nvars, dim, max_deg, backend)
