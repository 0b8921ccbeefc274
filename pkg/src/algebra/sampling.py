"""Seeded generators of small rational data (exact) or floats (approx)."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .herm import ComplexArray, HermMatrix, cadjoint, cmatmul
from .scalars import Backend, convert_array, zeros

DEFAULT_NUMERATOR = 4
DEFAULT_DENOMINATOR = 4


def make_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_rational_array(
    rng: np.random.Generator,
    shape: int | tuple[int, ...],
    backend: Backend = Backend.EXACT,
    numerator: int = DEFAULT_NUMERATOR,
    denominator: int = DEFAULT_DENOMINATOR,
) -> np.ndarray:
    """Entries k/denominator with k uniform in [-numerator, numerator]."""
    ints = rng.integers(-numerator, numerator + 1, size=shape)
    out = np.empty(ints.shape, dtype=object)
    for idx, k in np.ndenumerate(ints):
        out[idx] = Fraction(int(k), denominator)
    return convert_array(out, backend) if backend is Backend.APPROX else out


def random_complex_matrix(
    rng: np.random.Generator,
    rows: int,
    cols: int,
    backend: Backend = Backend.EXACT,
    real: bool = False,
) -> ComplexArray:
    re = random_rational_array(rng, (rows, cols), backend)
    im = zeros((rows, cols), backend) if real else random_rational_array(rng, (rows, cols), backend)
    return re, im


def random_psd(rng: np.random.Generator, dim: int, backend: Backend = Backend.EXACT, rank: int | None = None) -> HermMatrix:
    """G*G for a random rank x dim matrix G."""
    g = random_complex_matrix(rng, rank or dim, dim, backend)
    re, im = cmatmul(cadjoint(g), g)
    return HermMatrix(re, im, backend)


def random_hermitian(rng: np.random.Generator, dim: int, backend: Backend = Backend.EXACT) -> HermMatrix:
    re, im = random_complex_matrix(rng, dim, dim, backend)
    return HermMatrix(re + re.T, im - im.T, backend)
