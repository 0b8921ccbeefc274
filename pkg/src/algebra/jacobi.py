"""Cyclic Jacobi eigensolver for batches of small real symmetric matrices.

Sweeps use a round-robin (Brent-Luk) ordering so every rotation of a round
touches disjoint index pairs and the whole round is applied with array updates
across the batch.
"""

from __future__ import annotations

import logging
from functools import lru_cache

import numpy as np

from ..errors import DimensionError, SymmetryError
from .herm import HERMITIAN_RTOL, ComplexVector, HermMatrix
from .scalars import MACHINE_EPS, Backend

logger = logging.getLogger(__name__)

MAX_SWEEPS = 60


@lru_cache(maxsize=None)
def _round_robin(m: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Rounds of disjoint (p, q) pairs, p < q, covering every pair once."""
    players = list(range(m + (m % 2)))
    n = len(players)
    rounds = []
    for _ in range(n - 1):
        ps, qs = [], []
        for i in range(n // 2):
            a, b = players[i], players[n - 1 - i]
            if a < m and b < m:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def jacobi_eigh(
    a: np.ndarray,
    vectors: bool = False,
    tol: float | None = None,
    max_sweeps: int = MAX_SWEEPS,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigenvalues (and optionally eigenvectors as columns) of symmetric matrices.

    `a` has shape (..., m, m). Eigenvalues come back unsorted, in diagonal order.
    """
    a = np.array(a, dtype=np.float64)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionError(f"Expected square matrices, got shape {a.shape}")
    batch_shape, m = a.shape[:-2], a.shape[-1]
    A = a.reshape((-1, m, m))
    A = 0.5 * (A + np.swapaxes(A, 1, 2))
    nb = A.shape[0]
    V = np.broadcast_to(np.eye(m), (nb, m, m)).copy() if vectors else None

    if m > 1 and nb > 0:
        tol = MACHINE_EPS if tol is None else tol
        offmask = ~np.eye(m, dtype=bool)
        scale = np.sqrt(np.sum(A * A, axis=(1, 2)))
        rounds = _round_robin(m)
        sweeps = 0
        while sweeps < max_sweeps:
            off = np.sqrt(np.sum(np.where(offmask, A, 0.0) ** 2, axis=(1, 2)))
            if not np.any(off > tol * scale):
                break
            for P, Q in rounds:
                if not len(P):
                    continue
                app, aqq, apq = A[:, P, P], A[:, Q, Q], A[:, P, Q]
                rotate = apq != 0.0
                with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                    theta = np.where(rotate, (aqq - app) / (2.0 * apq), 0.0)
                    t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                t = np.where(rotate & np.isfinite(theta), t, 0.0)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                cr, sr = c[:, :, None], s[:, :, None]
                Ap, Aq = A[:, P, :], A[:, Q, :]
                A[:, P, :] = cr * Ap - sr * Aq
                A[:, Q, :] = sr * Ap + cr * Aq

                cc, sc = c[:, None, :], s[:, None, :]
                Ap, Aq = A[:, :, P], A[:, :, Q]
                A[:, :, P] = cc * Ap - sc * Aq
                A[:, :, Q] = sc * Ap + cc * Aq
                A[:, P, Q] = 0.0
                A[:, Q, P] = 0.0

                if V is not None:
                    Vp, Vq = V[:, :, P], V[:, :, Q]
                    V[:, :, P] = cc * Vp - sc * Vq
                    V[:, :, Q] = sc * Vp + cc * Vq
            sweeps += 1
        logger.debug(f"Jacobi: {nb} matrices of size {m}, {sweeps} sweeps")

    w = np.diagonal(A, axis1=1, axis2=2).copy().reshape(batch_shape + (m,))
    if V is not None:
        V = V.reshape(batch_shape + (m, m))
    return w, V


def _checked_embedding(m: HermMatrix) -> np.ndarray:
    """Float real symmetric form of M: M itself when real, else its 2d embedding."""
    approx = m.to_backend(Backend.APPROX)
    defect = float(approx.symmetry_defect())
    tol = HERMITIAN_RTOL * approx.max_abs()
    if defect > tol:
        raise SymmetryError(defect, tol)
    if approx.is_real:
        return np.asarray(approx.re, dtype=np.float64)
    return np.asarray(approx.real_embedding(), dtype=np.float64)


def eig_min(m: HermMatrix) -> float:
    """Smallest eigenvalue of a Hermitian matrix (float)."""
    return eig_min_batch([m])[0][0]


def eig_min_batch(matrices: list[HermMatrix], vectors: bool = False) -> list[tuple[float, ComplexVector | None]]:
    """Smallest eigenvalue (and a unit eigenvector) for each matrix; equal sizes share a run."""
    results: list[tuple[float, ComplexVector | None] | None] = [None] * len(matrices)
    groups: dict[tuple[int, bool], list[int]] = {}
    embedded = []
    for i, m in enumerate(matrices):
        e = _checked_embedding(m)
        embedded.append(e)
        groups.setdefault((e.shape[0], e.shape[0] != m.dim), []).append(i)

    for (size, complex_embedding), idx in groups.items():
        if size == 0:
            for i in idx:
                results[i] = (float("inf"), None)
            continue
        stack = np.stack([embedded[i] for i in idx])
        w, V = jacobi_eigh(stack, vectors=vectors)
        for row, i in enumerate(idx):
            k = int(np.argmin(w[row]))
            vec = None
            if V is not None:
                col = V[row][:, k]
                d = matrices[i].dim
                if complex_embedding:
                    vec = ComplexVector(col[:d].copy(), col[d:].copy())
                else:
                    vec = ComplexVector(col.copy(), np.zeros(d))
            results[i] = (float(w[row][k]), vec)
    return results
