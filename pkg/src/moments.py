"""Truncated operator moment sequences and their moment / localizing matrix tests."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal, Mapping, Sequence

import numpy as np

from .algebra import (
    Backend,
    ComplexVector,
    HermMatrix,
    MultiIndex,
    PsdVerdict,
    monomials,
    psd_check_many,
    to_scalar,
)
from .algebra.scalars import zeros
from .config import settings
from .errors import DimensionError, OrderError
from .matpoly import RegionK, ScalarPolynomial
from .measures import AtomicOperatorMeasure

logger = logging.getLogger(__name__)

Mode = Literal["block", "compression"]

BISGAARD_HEAD = (
    ((4, 0), (0, 1)),
    ((0, 2), (2, 0)),
    ((1, 0), (0, 4)),
)


@dataclass(frozen=True, eq=False)
class OperatorSequence:
    """(S_alpha) for |alpha| <= order, every entry a Hermitian d x d matrix."""
    nvars: int
    dim: int
    order: int
    backend: Backend
    entries: Mapping[MultiIndex, HermMatrix]

    @classmethod
    def of(
        cls,
        entries: Mapping[Sequence[int], HermMatrix],
        nvars: int,
        dim: int,
        order: int,
        backend: Backend = Backend.EXACT,
        fill_zero: bool = False,
    ) -> "OperatorSequence":
        """Validate completeness up to `order`; `fill_zero` supplies missing entries as 0."""
        if order < 0:
            raise OrderError("Sequence order must be nonnegative")
        given: dict[MultiIndex, HermMatrix] = {}
        for alpha, m in entries.items():
            a = MultiIndex(alpha)
            if len(a) != nvars:
                raise DimensionError(f"Exponent {tuple(a)} for a sequence in {nvars} variables")
            if a.degree > order:
                raise OrderError(f"Entry {tuple(a)} exceeds the sequence order {order}")
            if m.dim != dim:
                raise DimensionError(f"Entry {tuple(a)} has dimension {m.dim}, expected {dim}")
            given[a] = m.to_backend(backend).check_hermitian()
        out = {}
        for a in monomials(nvars, order):
            if a in given:
                out[a] = given[a]
            elif fill_zero:
                out[a] = HermMatrix.zero(dim, backend)
            else:
                raise OrderError(f"Sequence is missing entry {tuple(a)}")
        return cls(nvars, dim, order, backend, out)

    def __getitem__(self, alpha: Sequence[int]) -> HermMatrix:
        a = MultiIndex(alpha)
        if a.degree > self.order:
            raise OrderError(f"Entry {tuple(a)} beyond sequence order {self.order}")
        return self.entries[a]

    def truncate(self, order: int) -> "OperatorSequence":
        if order > self.order:
            raise OrderError(f"Cannot extend a sequence of order {self.order} to {order}")
        return OperatorSequence(
            self.nvars, self.dim, order, self.backend,
            {a: m for a, m in self.entries.items() if a.degree <= order},
        )

    def to_backend(self, backend: Backend) -> "OperatorSequence":
        if backend is self.backend:
            return self
        return OperatorSequence(
            self.nvars, self.dim, self.order, backend,
            {a: m.to_backend(backend) for a, m in self.entries.items()},
        )

    def scale(self, c: Any) -> "OperatorSequence":
        return OperatorSequence(
            self.nvars, self.dim, self.order, self.backend,
            {a: m.scale(c) for a, m in self.entries.items()},
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OperatorSequence):
            return NotImplemented
        if (self.nvars, self.dim, self.order) != (other.nvars, other.dim, other.order):
            return False
        return all(m == other.entries[a] for a, m in self.entries.items())

    __hash__ = None

    def __repr__(self) -> str:
        return f"OperatorSequence(nvars={self.nvars}, dim={self.dim}, order={self.order}, backend={self.backend.value})"


# Moment and localizing matrices

def _block_matrix(S: OperatorSequence, D: int, g: ScalarPolynomial | None) -> HermMatrix:
    basis = monomials(S.nvars, D)
    d, n = S.dim, len(basis)
    re = zeros((d * n, d * n), S.backend)
    im = zeros((d * n, d * n), S.backend)
    g_terms = list(g.items()) if g is not None else [(MultiIndex.zero(S.nvars), 1)]
    cache: dict[MultiIndex, tuple[np.ndarray, np.ndarray]] = {}
    for r, alpha in enumerate(basis):
        for c in range(r, n):
            ab = alpha.add(basis[c])
            if ab not in cache:
                block_re = zeros((d, d), S.backend)
                block_im = zeros((d, d), S.backend)
                for gamma, v in g_terms:
                    entry = S[ab.add(gamma)]
                    v = to_scalar(v, S.backend)
                    block_re = block_re + entry.re * v
                    block_im = block_im + entry.im * v
                cache[ab] = (block_re, block_im)
            block_re, block_im = cache[ab]
            re[r * d:(r + 1) * d, c * d:(c + 1) * d] = block_re
            im[r * d:(r + 1) * d, c * d:(c + 1) * d] = block_im
            if c != r:
                # block (beta, alpha) = S_{alpha+beta} = (block (alpha, beta))*
                re[c * d:(c + 1) * d, r * d:(r + 1) * d] = block_re.T
                im[c * d:(c + 1) * d, r * d:(r + 1) * d] = -block_im.T
    return HermMatrix(re, im, S.backend)


def moment_matrix(S: OperatorSequence, D: int) -> HermMatrix:
    """Block matrix (S_{alpha+beta}) over monomials |alpha|, |beta| <= D, graded-lex layout."""
    if D < 0 or 2 * D > S.order:
        raise OrderError(f"Moment matrix of order {D} needs a sequence of order {2 * D}, have {S.order}")
    return _block_matrix(S, D, None)


def localizing_matrix(S: OperatorSequence, g: ScalarPolynomial, D: int) -> HermMatrix:
    """Block matrix (sum_gamma g_gamma S_{alpha+beta+gamma}) over |alpha|, |beta| <= D."""
    if g.nvars != S.nvars:
        raise DimensionError(f"Constraint in {g.nvars} variables for a sequence in {S.nvars}")
    deg = max(g.degree, 0)
    if D < 0 or 2 * D + deg > S.order:
        raise OrderError(f"Localizing matrix of order {D} with deg g = {deg} needs order {2 * D + deg}, have {S.order}")
    return _block_matrix(S, D, g)


def localizing_order(D: int, g: ScalarPolynomial) -> int:
    """D_g = D - ceil(deg g / 2)."""
    return D - math.ceil(max(g.degree, 0) / 2)


# Compression

def compress_sequence(S: OperatorSequence, a: ComplexVector) -> OperatorSequence:
    """The scalar sequence <S_alpha a, a> as 1 x 1 matrices."""
    if a.dim != S.dim:
        raise DimensionError(f"Probe of length {a.dim} for a sequence of dimension {S.dim}")
    a = a.to_backend(S.backend)
    entries = {
        alpha: HermMatrix.from_parts([[m.quad_form(a)]], None, S.backend, check=False)
        for alpha, m in S.entries.items()
    }
    return OperatorSequence(S.nvars, 1, S.order, S.backend, entries)


def default_probes(dim: int, backend: Backend = Backend.EXACT) -> list[ComplexVector]:
    """e_j, then e_j + e_k and e_j + i e_k for j < k."""
    one = Fraction(1) if backend is Backend.EXACT else 1.0

    def vec(re_idx: Sequence[int], im_idx: Sequence[int]) -> ComplexVector:
        re, im = zeros(dim, backend), zeros(dim, backend)
        for j in re_idx:
            re[j] = one
        for j in im_idx:
            im[j] = one
        return ComplexVector(re, im)

    probes = [vec([j], []) for j in range(dim)]
    pairs = [(j, k) for j in range(dim) for k in range(j + 1, dim)]
    probes += [vec([j, k], []) for j, k in pairs]
    probes += [vec([j], [k]) for j, k in pairs]
    return probes


def probe_label(a: ComplexVector) -> str:
    parts = []
    for j, (r, i) in enumerate(zip(a.re, a.im)):
        if r:
            parts.append(f"{'' if r == 1 else r}e{j + 1}")
        if i:
            parts.append(f"{'' if i == 1 else i}i*e{j + 1}")
    return "+".join(parts) or "0"


# Truncated tests

@dataclass(frozen=True)
class MomentVerdict:
    """PSD verdicts of the tested matrices; pass is necessary-condition evidence only."""
    mode: Mode
    results: tuple[tuple[str, PsdVerdict], ...]
    passed: bool
    failing_label: str | None = None
    witness: ComplexVector | None = None

    def to_dict(self, digits: int | None = None) -> dict[str, Any]:
        digits = digits or settings.report_digits
        out: dict[str, Any] = {
            "mode": self.mode,
            "passed": self.passed,
            "matrices": [{"label": label, **v.to_dict(digits)} for label, v in self.results],
        }
        if self.failing_label is not None:
            out["failingMatrix"] = self.failing_label
        return out


def moment_test_matrices(
    S: OperatorSequence,
    region: RegionK,
    D: int,
    mode: Mode = "block",
    probes: Sequence[ComplexVector] | None = None,
) -> list[tuple[str, HermMatrix]]:
    """Labelled moment and localizing matrices for the block or compression test."""
    if region.nvars != S.nvars:
        raise DimensionError(f"Region has {region.nvars} variables, sequence has {S.nvars}")
    if D < 0 or 2 * D > S.order:
        raise OrderError(f"Test of order {D} needs a sequence of order {2 * D}, have {S.order}")
    constraints = [(i, g) for i, g in enumerate(region.constraints()) if localizing_order(D, g) >= 0]

    def matrices(seq: OperatorSequence, prefix: str) -> list[tuple[str, HermMatrix]]:
        out = [(f"{prefix}moment", moment_matrix(seq, D))]
        for i, g in constraints:
            out.append((f"{prefix}localizing[g{i + 1}]", localizing_matrix(seq, g, localizing_order(D, g))))
        return out

    if mode == "block":
        return matrices(S, "")
    if mode != "compression":
        raise ValueError(f"Unknown moment test mode: {mode!r}")
    if probes is None:
        probes = default_probes(S.dim, S.backend)
    if not probes:
        raise ValueError("Compression mode needs at least one probe vector")
    out = []
    for a in probes:
        out.extend(matrices(compress_sequence(S, a), f"probe[{probe_label(a)}]:"))
    return out


def truncated_moment_test(
    S: OperatorSequence,
    region: RegionK,
    D: int,
    mode: Mode = "block",
    probes: Sequence[ComplexVector] | None = None,
    tol: float | None = None,
) -> MomentVerdict:
    """PSD of every moment/localizing matrix (block) or of every probe compression (compression)."""
    labelled = moment_test_matrices(S, region, D, mode, probes)
    verdicts = psd_check_many([m for _, m in labelled], tol)
    results = tuple((label, v) for (label, _), v in zip(labelled, verdicts))
    failing = next(((label, v) for label, v in results if not v.is_psd), None)
    logger.debug(f"{mode} moment test at order {D}: {len(results)} matrices, {'fail' if failing else 'pass'}")
    return MomentVerdict(
        mode=mode,
        results=results,
        passed=failing is None,
        failing_label=failing[0] if failing else None,
        witness=failing[1].witness if failing else None,
    )


# Sequence constructions

def shift_sequence(S: OperatorSequence, y: Sequence) -> OperatorSequence:
    """S'_beta = sum_{alpha <= beta} binom(beta, alpha) (-y)^(beta-alpha) S_alpha: moments of mu(. + y)."""
    if len(y) != S.nvars:
        raise DimensionError(f"Shift has {len(y)} coordinates, expected {S.nvars}")
    neg = [-to_scalar(v, S.backend) for v in y]
    out = {}
    for beta in S.entries:
        re, im = zeros((S.dim, S.dim), S.backend), zeros((S.dim, S.dim), S.backend)
        for alpha in beta.lower_set():
            f = beta.binom(alpha) * beta.sub(alpha).evaluate(neg)
            if f != 0:
                m = S.entries[alpha]
                re = re + m.re * f
                im = im + m.im * f
        out[beta] = HermMatrix(re, im, S.backend)
    return OperatorSequence(S.nvars, S.dim, S.order, S.backend, out)


def sequence_from_measure(mu: AtomicOperatorMeasure, order: int) -> OperatorSequence:
    """S_alpha = int t^alpha dmu for |alpha| <= order."""
    entries = {a: mu.integrate_monomial(a) for a in monomials(mu.nvars, order)}
    return OperatorSequence(mu.nvars, mu.dim, order, mu.backend, entries)


def bisgaard_gap(k: int) -> int:
    """a_k = 2^((k+2)!)."""
    return 2 ** math.factorial(k + 2)


def bisgaard_entry(n: int) -> HermMatrix:
    if n < len(BISGAARD_HEAD):
        return HermMatrix.of(BISGAARD_HEAD[n])
    if n % 2:
        return HermMatrix.zero(2)
    return HermMatrix.identity(2).scale(bisgaard_gap(n // 2))


def bisgaard_sequence(k_max: int) -> OperatorSequence:
    """Univariate exact sequence of order 2*k_max: the 2 x 2 head, then 0 at odd and a_k I at 2k."""
    if not 1 <= k_max <= settings.bisgaard_max_k:
        raise OrderError(f"k_max must lie in [1, {settings.bisgaard_max_k}], got {k_max}")
    entries = {MultiIndex((n,)): bisgaard_entry(n) for n in range(2 * k_max + 1)}
    return OperatorSequence(1, 2, 2 * k_max, Backend.EXACT, entries)
