"""Positive semidefiniteness tests: exact LDL^T over rationals, Jacobi in floating point."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .herm import ComplexVector, HermMatrix
from .jacobi import eig_min_batch
from .scalars import DEFAULT_PSD_TOL, Backend, format_number, scalar_sign

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PsdVerdict:
    """Outcome of a PSD test; a failing verdict carries v with <Mv, v> < 0 (or < -tol)."""
    is_psd: bool
    min_eigenvalue: float | None = None
    witness: ComplexVector | None = None
    tolerance: float | None = None
    exact: bool = False

    def to_dict(self, digits: int = 10) -> dict[str, Any]:
        out: dict[str, Any] = {"isPsd": self.is_psd, "exact": self.exact}
        if self.min_eigenvalue is not None:
            out["minEigenvalue"] = float(f"{self.min_eigenvalue:.{digits}g}")
        if self.tolerance is not None:
            out["tolerance"] = float(f"{self.tolerance:.{digits}g}")
        if self.witness is not None:
            backend = Backend.EXACT if self.exact else Backend.APPROX
            fmt = (lambda v: format_number(v, backend)) if self.exact else (lambda v: float(f"{float(v):.{digits}g}"))
            out["witness"] = {
                "re": [fmt(v) for v in self.witness.re],
                "im": [fmt(v) for v in self.witness.im],
            }
        return out


# Exact

def _balanced_pair(S: list[list[Fraction]], active: list[int]) -> dict[int, int] | None:
    """A pair (i, j) with S_ii + S_jj - 2|S_ij| < 0, i.e. e_i - sgn(S_ij) e_j is negative."""
    for a, i in enumerate(active):
        for j in active[a + 1:]:
            b = S[i][j]
            if b != 0 and S[i][i] + S[j][j] - 2 * abs(b) < 0:
                return {i: 1, j: -scalar_sign(b)}
    return None


def _lift(reduced: dict[int, int], eliminated: list[tuple[int, dict[int, Fraction]]], n: int) -> list[Fraction]:
    """Back-substitute a witness of a Schur complement to a witness of the full matrix."""
    v = [Fraction(0)] * n
    for i, x in reduced.items():
        v[i] = Fraction(x)
    for p, mult in reversed(eliminated):
        v[p] = -sum((l * v[j] for j, l in mult.items()), Fraction(0))
    return v


def ldl_witness(a: Sequence[Sequence[Any]]) -> list[Fraction] | None:
    """LDL^T with diagonal pivoting over Fractions on a real symmetric matrix.

    Returns None when the matrix is PSD (zero pivots with zero residual rows are
    accepted), otherwise a rational vector v with v^T a v < 0.
    """
    n = len(a)
    S = [[Fraction(x) for x in row] for row in a]
    active = list(range(n))
    eliminated: list[tuple[int, dict[int, Fraction]]] = []
    while active:
        neg = next((k for k in active if S[k][k] < 0), None)
        if neg is not None:
            return _lift({neg: 1}, eliminated, n)
        pair = _balanced_pair(S, active)
        if pair is not None:
            return _lift(pair, eliminated, n)
        p = max(active, key=lambda k: S[k][k])
        piv = S[p][p]
        if piv == 0:
            # All remaining diagonals are zero and the pair screen found no
            # off-diagonal entry, so the residual block is zero.
            break
        active.remove(p)
        row_p = S[p]
        mult = {j: S[j][p] / piv for j in active if S[j][p] != 0}
        for j, l in mult.items():
            row_j = S[j]
            for k in active:
                if row_p[k] != 0:
                    row_j[k] -= l * row_p[k]
        eliminated.append((p, mult))
    return None


def psd_check_exact(m: HermMatrix) -> PsdVerdict:
    """Exact PSD decision; complex matrices go through their real 2d embedding."""
    m = m.to_backend(Backend.EXACT).check_hermitian()
    d = m.dim
    if m.is_real:
        w = ldl_witness(m.re.tolist())
        witness = None if w is None else ComplexVector(
            np.array(w, dtype=object), np.array([Fraction(0)] * d, dtype=object)
        )
    else:
        w = ldl_witness(m.real_embedding().tolist())
        witness = None if w is None else ComplexVector(
            np.array(w[:d], dtype=object), np.array(w[d:], dtype=object)
        )
    logger.debug(f"exact PSD check on dim {d}: {'psd' if witness is None else 'not psd'}")
    return PsdVerdict(is_psd=witness is None, witness=witness, exact=True)


# Floating point

def default_tolerance(m: HermMatrix) -> float:
    return DEFAULT_PSD_TOL * (1.0 + m.max_abs())


def _approx_verdict(m: HermMatrix, lam: float, vec: ComplexVector | None, tol: float | None) -> PsdVerdict:
    tol = default_tolerance(m) if tol is None else tol
    ok = lam >= -tol
    return PsdVerdict(is_psd=ok, min_eigenvalue=lam, witness=None if ok else vec, tolerance=tol)


def psd_check_approx(m: HermMatrix, tol: float | None = None) -> PsdVerdict:
    """isPsd iff eigMin(M) >= -tol; tol defaults to 1e-9 * (1 + maxAbsEntry)."""
    if tol is not None and tol <= 0:
        raise ValueError("tol must be positive")
    (lam, vec), = eig_min_batch([m], vectors=True)
    return _approx_verdict(m, lam, vec, tol)


def psd_check(m: HermMatrix, tol: float | None = None) -> PsdVerdict:
    """Dispatch on the matrix backend."""
    if m.backend is Backend.EXACT:
        return psd_check_exact(m)
    return psd_check_approx(m, tol)


def psd_check_many(matrices: Sequence[HermMatrix], tol: float | None = None) -> list[PsdVerdict]:
    """PSD verdicts in input order; floating matrices of equal size share one Jacobi run."""
    if tol is not None and tol <= 0:
        raise ValueError("tol must be positive")
    verdicts: list[PsdVerdict | None] = [None] * len(matrices)
    approx_idx = []
    for i, m in enumerate(matrices):
        if m.backend is Backend.EXACT:
            verdicts[i] = psd_check_exact(m)
        else:
            approx_idx.append(i)
    if approx_idx:
        eig = eig_min_batch([matrices[i] for i in approx_idx], vectors=True)
        for i, (lam, vec) in zip(approx_idx, eig):
            verdicts[i] = _approx_verdict(matrices[i], lam, vec, tol)
    return verdicts
