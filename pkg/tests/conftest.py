"""Pytest fixtures for operator moment tests."""

from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from src.algebra import Backend, HermMatrix, monomials
from src.algebra.sampling import random_hermitian
from src.matpoly import MatrixPolynomial, RegionK
from src.measures import AtomicOperatorMeasure
from src.moments import bisgaard_sequence

DOCUMENTS = Path(__file__).parent / "documents"


def random_polynomial(rng: np.random.Generator, nvars: int, dim: int, deg: int, backend: Backend = Backend.EXACT) -> MatrixPolynomial:
    """Random Hermitian coefficients on about half of the monomials of degree <= deg."""
    terms = [(a, random_hermitian(rng, dim, backend)) for a in monomials(nvars, deg) if rng.random() < 0.6]
    return MatrixPolynomial.of(terms, nvars, dim, backend)


def dirac(point, weight: HermMatrix) -> AtomicOperatorMeasure:
    """A single atom measure."""
    return AtomicOperatorMeasure.create([(point, weight)], len(point), weight.dim)


@pytest.fixture
def rng():
    """A seeded generator, fresh for each test."""
    return np.random.default_rng(20240607)


@pytest.fixture
def bisgaard():
    """The Bisgaard sequence up to x^6."""
    return bisgaard_sequence(3)


@pytest.fixture
def unit_box():
    """K = [-1, 1]^2."""
    return RegionK.box([-1, -1], [1, 1])


@pytest.fixture
def unit_interval():
    """K = [0, 1]."""
    return RegionK.interval(0, 1)


@pytest.fixture
def half():
    return Fraction(1, 2)


@pytest.fixture
def document_paths():
    """Every JSON document of the test corpus."""
    return sorted(DOCUMENTS.glob("*.json"))


@pytest.fixture
def sequence_document():
    """Moments of delta_{1/2} with weight 1, up to x^2."""
    return {
        "version": "1",
        "kind": "sequence",
        "backend": "exact",
        "sequence": {
            "nvars": 1,
            "dim": 1,
            "order": 2,
            "entries": [
                {"exponents": [0], "matrix": {"re": [["1"]]}},
                {"exponents": [1], "matrix": {"re": [["1/2"]]}},
                {"exponents": [2], "matrix": {"re": [["1/4"]]}},
            ],
        },
    }


@pytest.fixture
def bisgaard_document():
    """The Bisgaard head S_0, S_1, S_2 as a sequence document."""
    return {
        "version": "1",
        "kind": "sequence",
        "sequence": {
            "nvars": 1,
            "dim": 2,
            "order": 2,
            "entries": [
                {"exponents": [0], "matrix": {"re": [[4, 0], [0, 1]]}},
                {"exponents": [1], "matrix": {"re": [[0, 2], [2, 0]]}},
                {"exponents": [2], "matrix": {"re": [[1, 0], [0, 4]]}},
            ],
        },
    }


@pytest.fixture
def negation_document():
    """T(p) = -p on scalar polynomials of degree <= 2."""
    return {
        "version": "1",
        "kind": "operator",
        "operator": {
            "nvars": 1,
            "dim": 1,
            "maxDeg": 2,
            "images": [
                {
                    "basisIndex": 0,
                    "exponents": [k],
                    "image": {"nvars": 1, "dim": 1, "terms": [{"exponents": [k], "coeff": {"re": [[-1]]}}]},
                }
                for k in range(3)
            ],
        },
    }


@pytest.fixture
def family_document():
    """Identity map at offset 0 and a depolarizing map at offset 1/4 on K = [-1, 1]."""
    return {
        "version": "1",
        "kind": "mapMeasureFamily",
        "mapMeasureFamily": {
            "region": {"kind": "box", "lo": ["-1"], "hi": ["1"]},
            "atoms": [
                {
                    "offset": ["0"],
                    "choi": {"re": [[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]]},
                },
                {
                    "offset": ["1/4"],
                    "choi": {"re": [["1/2", 0, 0, 0], [0, "1/2", 0, 0], [0, 0, "1/2", 0], [0, 0, 0, "1/2"]]},
                },
            ],
        },
    }


@pytest.fixture
def square_document():
    """p(x) = x^2 as a 1 x 1 polynomial."""
    return {
        "version": "1",
        "kind": "polynomial",
        "polynomial": {"nvars": 1, "dim": 1, "terms": [{"exponents": [2], "coeff": {"re": [[1]]}}]},
    }
