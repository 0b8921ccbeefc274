"""Tests for matrix polynomials, regions and grid sampling."""

from fractions import Fraction

import numpy as np
import pytest

from src.algebra import Backend, HermMatrix, hermitian_basis
from src.errors import DimensionError, RegionError
from src.matpoly import GridSpec, MatrixPolynomial, RegionK, ScalarPolynomial, pos_sample
from src.preserver import random_positive_poly

from .conftest import random_polynomial


def test_zero_terms_are_dropped():
    """Test that the canonical form never stores zero coefficients."""
    a = HermMatrix.of([[1, 0], [0, 2]])
    p = MatrixPolynomial.of([((1,), a), ((1,), -a), ((0,), a)], 1, 2)
    assert list(p.terms) == [(0,)]
    assert p.degree == 0
    assert MatrixPolynomial.zero(1, 2).degree == float("-inf")


def test_eval_exact():
    """Test p(x) = A + B x^2 at x = 1/2."""
    a = HermMatrix.of([[1, 0], [0, 1]])
    b = HermMatrix.of([[0, 4], [4, 0]])
    p = MatrixPolynomial.of({(0,): a, (2,): b}, 1, 2)
    assert p.eval([Fraction(1, 2)]) == HermMatrix.of([[1, 1], [1, 1]])
    re, im = p.eval_grid(np.array([[0.5], [0.0]]))
    assert np.allclose(re[0], [[1, 1], [1, 1]])
    assert np.allclose(re[1], np.eye(2))
    assert not np.any(im)


def test_derivative():
    """Test d/dx1 d/dx2 of x1^2 x2 = 2 x1."""
    a = HermMatrix.of([[1]])
    p = MatrixPolynomial.monomial(a, (2, 1))
    assert p.derivative((1, 1)) == MatrixPolynomial.monomial(a.scale(2), (1, 0))
    assert p.derivative((0, 2)).is_zero()


def test_shift_arg_matches_evaluation(rng):
    """Test q(x) = p(x + y) pointwise."""
    for _ in range(5):
        p = random_polynomial(rng, 2, 2, 3)
        y = (Fraction(1, 3), Fraction(-2))
        q = p.shift_arg(y)
        x = (Fraction(1, 2), Fraction(5, 4))
        assert q.eval(x) == p.eval((x[0] + y[0], x[1] + y[1]))


def test_coordinate_polys_round_trip(rng):
    """Test p = sum_i E_i (x) p_i."""
    p = random_polynomial(rng, 2, 2, 2)
    assert MatrixPolynomial.from_coordinates(p.coordinate_polys(), 2) == p


def test_scalar_times_matrix_poly():
    """Test (1 - x) * A x = A x - A x^2."""
    a = HermMatrix.of([[1, 1j], [-1j, 2]])
    g = 1 - ScalarPolynomial.variable(0, 1)
    p = MatrixPolynomial.monomial(a, (1,)) * g
    assert p == MatrixPolynomial.of({(1,): a, (2,): -a}, 1, 2)


def test_arithmetic_shape_checks():
    """Test that mismatched shapes are rejected."""
    p = MatrixPolynomial.constant(HermMatrix.identity(2), 1)
    q = MatrixPolynomial.constant(HermMatrix.identity(2), 2)
    with pytest.raises(DimensionError):
        p + q
    with pytest.raises(DimensionError):
        p.eval([1, 2])


def test_box_constraints():
    """Test g_i = (x_i - lo_i)(hi_i - x_i)."""
    k = RegionK.box([0, -1], [1, 1])
    g1, g2 = k.constraints()
    assert g1([Fraction(1, 2), 0]) == Fraction(1, 4)
    assert g2([0, 0]) == 1
    assert g2([0, 2]) == -3
    assert RegionK.all_space(2).constraints() == []


def test_ball_constraint_and_membership():
    """Test g = r^2 - |x - c|^2 and exact membership."""
    k = RegionK.ball([0, 0], 1)
    (g,) = k.constraints()
    assert g([Fraction(3, 5), Fraction(4, 5)]) == 0
    assert k.contains([Fraction(3, 5), Fraction(4, 5)])
    assert not k.contains([1, Fraction(1, 100)])
    assert k.bounding_box() == [(-1, 1), (-1, 1)]


def test_shifted_region():
    """Test K - y as K.shifted(-y)."""
    k = RegionK.interval(0, 1).shifted([Fraction(-1, 2)])
    assert k.contains([Fraction(-1, 2)])
    assert not k.contains([Fraction(3, 4)])
    assert k.describe() == "[-1/2, 1/2]"
    (g,) = k.constraints()
    assert g([0]) == Fraction(1, 4)


@pytest.mark.parametrize("kwargs", [
    {"kind": "box", "nvars": 1, "lo": (1,), "hi": (0,)},
    {"kind": "ball", "nvars": 1, "center": (0,), "radius": 0},
    {"kind": "disk", "nvars": 1},
    {"kind": "all", "nvars": 0},
])
def test_invalid_regions(kwargs):
    """Test region validation."""
    with pytest.raises(RegionError):
        RegionK(**kwargs)


def test_grid_needs_bounds_on_all_space():
    """Test that R^n cannot be sampled without bounds."""
    with pytest.raises(RegionError):
        GridSpec(5).points(RegionK.all_space(1))
    pts = GridSpec(3, bounds=((-1, 1),)).points(RegionK.all_space(1))
    assert pts.ravel().tolist() == [-1.0, 0.0, 1.0]


def test_grid_filters_ball():
    """Test that ball grids keep only interior points."""
    pts = GridSpec(5).points(RegionK.ball([0, 0], 1))
    assert len(pts) > 0
    assert np.all(np.sum(pts ** 2, axis=1) <= 1 + 1e-12)
    assert [0.0, 0.0] in pts.tolist()


def test_pos_sample_pass_and_fail():
    """Test x(1 - x) on [0, 1] versus on [0, 2]."""
    x = ScalarPolynomial.variable(0, 1)
    p = MatrixPolynomial.constant(HermMatrix.identity(1), 1) * (x * (1 - x))
    assert pos_sample(p, RegionK.interval(0, 1), GridSpec(9)).passed
    report = pos_sample(p, RegionK.interval(0, 2), GridSpec(9))
    assert not report.passed
    assert report.worst_point == (2.0,)
    assert report.min_eigenvalue == pytest.approx(-2.0)


def test_pos_sample_complex_matrix():
    """Test a matrix polynomial whose minimum eigenvalue is x^2 - 1."""
    a = HermMatrix.of([[1, 1j], [-1j, 1]], Backend.APPROX)
    p = MatrixPolynomial.of({(0,): a, (2,): HermMatrix.identity(2, Backend.APPROX)}, 1, 2, Backend.APPROX)
    # eigenvalues x^2 and x^2 + 2
    assert pos_sample(p, RegionK.interval(-1, 1), GridSpec(5)).passed
    e = MatrixPolynomial.constant(hermitian_basis(2, Backend.APPROX)[1], 1)
    report = pos_sample(p - e.scale(2), RegionK.interval(-1, 1), GridSpec(5))
    assert not report.passed
    assert report.worst_point == (0.0,)


def test_eval_is_linear(rng):
    """Test (a p + q)(x) = a p(x) + q(x) on random polynomials."""
    for _ in range(30):
        p, q = random_polynomial(rng, 2, 2, 3), random_polynomial(rng, 2, 2, 3)
        a = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 6)))
        x = tuple(Fraction(int(v), 4) for v in rng.integers(-8, 9, 2))
        assert (p.scale(a) + q).eval(x) == p.eval(x).scale(a) + q.eval(x)


def test_derivatives_compose(rng):
    """Test d^beta d^alpha p = d^(alpha + beta) p."""
    for _ in range(30):
        p = random_polynomial(rng, 2, 2, 4)
        alpha = tuple(int(v) for v in rng.integers(0, 3, 2))
        beta = tuple(int(v) for v in rng.integers(0, 3, 2))
        both = (alpha[0] + beta[0], alpha[1] + beta[1])
        assert p.derivative(alpha).derivative(beta) == p.derivative(both)


def test_pos_sample_accepts_positive_constructions():
    """Test that polynomials positive on K by construction pass the sampled check."""
    box = RegionK.box([-1, 0], [1, 1])
    for seed in range(100):
        p = random_positive_poly(box, 2, 2, seed=seed)
        assert pos_sample(p, box, GridSpec(5)).passed
