"""Tests for scalars, multi-indices, Hermitian matrices and PSD checks."""

from fractions import Fraction

import numpy as np
import pytest

from src.algebra import (
    Backend,
    ComplexVector,
    HermMatrix,
    MultiIndex,
    basis_coordinates,
    basis_label,
    eig_min,
    eig_min_batch,
    format_number,
    grlex_key,
    hermitian_basis,
    jacobi_eigh,
    monomial_count,
    monomials,
    parse_number,
    psd_check,
    psd_check_approx,
    psd_check_exact,
    psd_check_many,
    to_scalar,
)
from src.algebra.sampling import random_hermitian, random_psd
from src.errors import DimensionError, ScalarRangeError, SymmetryError
from src.preserver import BISGAARD_BLOCK


# Scalars

def test_parse_number_forms():
    """Test ints, floats and "p/q" strings."""
    assert parse_number(3) == 3
    assert parse_number("3/4") == Fraction(3, 4)
    assert parse_number(" -1/2 ") == Fraction(-1, 2)
    assert parse_number(2.5) == 2.5
    assert isinstance(parse_number(2.5), float)


@pytest.mark.parametrize("value", [True, "abc", "1/0", None, [1]])
def test_parse_number_rejects(value):
    """Test that non-numbers are rejected."""
    with pytest.raises(ValueError):
        parse_number(value)


def test_backend_conversion():
    """Test exact and approximate scalar coercion."""
    assert to_scalar(0.5, Backend.EXACT) == Fraction(1, 2)
    assert isinstance(to_scalar("1/3", Backend.APPROX), float)
    assert format_number(Fraction(1, 3), Backend.EXACT) == "1/3"
    assert format_number(Fraction(1, 4), Backend.APPROX) == 0.25


# Multi-indices

def test_monomials_graded_lex():
    """Test the graded-lex enumeration 1, x1, x2, x1^2, x1x2, x2^2."""
    assert monomials(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert monomial_count(2, 2) == 6
    assert monomial_count(3, 4) == len(monomials(3, 4)) == 35
    assert monomials(1, -1) == []
    assert sorted(monomials(3, 3), key=grlex_key) == monomials(3, 3)


def test_multiindex_arithmetic():
    """Test binomials, falling factorials and the partial order."""
    beta = MultiIndex((2, 1))
    assert beta.degree == 3
    assert beta.factorial() == 2
    assert beta.binom((1, 1)) == 2
    assert MultiIndex((3,)).falling((2,)) == 6
    assert MultiIndex((1, 0)).precedes(beta)
    assert not MultiIndex((0, 2)).precedes(beta)
    assert MultiIndex((1, 1)).lower_set() == [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert beta.evaluate((Fraction(1, 2), 3)) == Fraction(3, 4)
    with pytest.raises(ValueError):
        beta.binom((0, 2))


def test_multiindex_rejects_negative():
    """Test that negative exponents are rejected."""
    with pytest.raises(ValueError):
        MultiIndex((1, -1))


# Hermitian matrices

def test_hermitian_basis_order():
    """Test the row-major basis H11, H12, H21, H22."""
    h11, h12, h21, h22 = hermitian_basis(2)
    assert h11 == HermMatrix.of([[1, 0], [0, 0]])
    assert h12 == HermMatrix.of([[0, 1], [1, 0]])
    assert h21 == HermMatrix.of([[0, 1j], [-1j, 0]])
    assert h22 == HermMatrix.of([[0, 0], [0, 1]])
    assert [basis_label(i, 2) for i in range(4)] == ["H11", "H12", "H21", "H22"]


def test_hermitian_basis_norms():
    """Test tr(E_i E_j): 1 on the diagonal members, 2 on the off-diagonal ones, 0 across."""
    basis = hermitian_basis(3)
    for i, e in enumerate(basis):
        for j, f in enumerate(basis):
            expected = 0 if i != j else (1 if i % 4 == 0 else 2)
            assert e.inner(f) == expected


def test_basis_coordinates_reconstruct(rng):
    """Test that coordinates expand back to the matrix."""
    m = HermMatrix.of([[1, 2 + 3j], [2 - 3j, 4]])
    assert basis_coordinates(m) == [1, 2, 3, 4]
    for _ in range(5):
        a = random_hermitian(rng, 3)
        acc = HermMatrix.zero(3)
        for c, e in zip(basis_coordinates(a), hermitian_basis(3)):
            acc = acc + e.scale(c)
        assert acc == a


def test_hermitian_validation():
    """Test that non-Hermitian input is rejected."""
    with pytest.raises(SymmetryError):
        HermMatrix.of([[1, 2], [3, 4]])
    with pytest.raises(DimensionError):
        HermMatrix.from_parts([[1, 2]])
    # Approximate matrices get a relative slack
    HermMatrix.of([[1.0, 2.0], [2.0 + 1e-15, 1.0]], Backend.APPROX)


def test_quad_form_and_inner():
    """Test <Mv, v> and tr(MN)."""
    m = HermMatrix.of([[2, 1j], [-1j, 3]])
    assert m.quad_form(ComplexVector.of([1, 0])) == 2
    assert m.quad_form(ComplexVector.of([1, 1])) == 5
    # v = (1, i): 2 + 3 + 2 Re(conj(1) * i * i) = 5 - 2
    assert m.quad_form(ComplexVector.of([1, 1j])) == 3
    assert m.inner(HermMatrix.identity(2)) == 5
    assert m.trace() == 5


def test_backend_round_trip():
    """Test exact -> approx -> exact on dyadic entries."""
    m = HermMatrix.of([["1/2", "1/4"], ["1/4", "-3/8"]])
    assert m.to_backend(Backend.APPROX).to_backend(Backend.EXACT) == m


# PSD checks

def test_exact_psd_pair_witness():
    """Test the witness for [[1, 2], [2, 1]]."""
    m = HermMatrix.of([[1, 2], [2, 1]])
    verdict = psd_check_exact(m)
    assert not verdict.is_psd
    assert verdict.exact
    assert m.quad_form(verdict.witness) < 0


@pytest.mark.parametrize("rows", [
    [[1, 0], [0, -1]],
    [[0, 1], [1, 0]],
    [[1, 2j], [-2j, 1]],
    BISGAARD_BLOCK,
])
def test_exact_psd_rejects_with_witness(rows):
    """Test that indefinite matrices come with a negative witness."""
    m = HermMatrix.of(rows)
    verdict = psd_check_exact(m)
    assert not verdict.is_psd
    assert m.quad_form(verdict.witness) < 0


@pytest.mark.parametrize("rows", [
    [[2, 1], [1, 2]],
    [[0, 0], [0, 0]],
    [[1, 1j], [-1j, 1]],
    [[1, 1, 0], [1, 1, 0], [0, 0, 0]],
])
def test_exact_psd_accepts(rows):
    """Test PSD matrices including singular ones."""
    assert psd_check_exact(HermMatrix.of(rows)).is_psd


def test_exact_psd_random_gram(rng):
    """Test that random G*G matrices pass and their negatives fail."""
    for dim in (1, 2, 3, 4):
        m = random_psd(rng, dim)
        assert psd_check_exact(m).is_psd
        if not m.is_zero():
            neg = psd_check_exact(-m)
            assert not neg.is_psd
            assert (-m).quad_form(neg.witness) < 0


def test_approx_psd_check():
    """Test the floating-point check and its tolerance."""
    verdict = psd_check_approx(HermMatrix.of([[1, 2], [2, 1]], Backend.APPROX))
    assert not verdict.is_psd
    assert verdict.min_eigenvalue == pytest.approx(-1.0, abs=1e-12)
    assert verdict.tolerance == pytest.approx(1e-9 * 3)
    assert psd_check_approx(HermMatrix.of([[1, 0], [0, -1e-12]], Backend.APPROX)).is_psd
    with pytest.raises(ValueError):
        psd_check_approx(HermMatrix.identity(2, Backend.APPROX), tol=0)


def test_psd_check_many_keeps_order():
    """Test batched verdicts over mixed backends."""
    ms = [
        HermMatrix.of([[1, 2], [2, 1]], Backend.APPROX),
        HermMatrix.identity(2),
        HermMatrix.identity(3, Backend.APPROX),
        HermMatrix.of([[-1]]),
    ]
    assert [v.is_psd for v in psd_check_many(ms)] == [False, True, True, False]
    assert psd_check(ms[0]).is_psd is False


# Jacobi

def test_jacobi_matches_numpy(rng):
    """Test eigenvalues of random symmetric matrices against numpy."""
    a = rng.standard_normal((3, 5, 5))
    a = a + np.swapaxes(a, 1, 2)
    w, _ = jacobi_eigh(a)
    for k in range(3):
        assert np.allclose(np.sort(w[k]), np.linalg.eigvalsh(a[k]), atol=1e-10)


def test_jacobi_eigenvectors(rng):
    """Test A v = lambda v for the returned columns."""
    a = rng.standard_normal((4, 4))
    a = a + a.T
    w, v = jacobi_eigh(a, vectors=True)
    assert np.allclose(a @ v, v * w, atol=1e-10)


def test_eig_min():
    """Test the smallest eigenvalue of real and complex matrices."""
    assert eig_min(HermMatrix.of([[2, 1], [1, 2]])) == pytest.approx(1.0)
    assert eig_min(HermMatrix.of([[1, 2j], [-2j, 1]])) == pytest.approx(-1.0)
    assert eig_min(HermMatrix.of(BISGAARD_BLOCK)) == pytest.approx(-1.0, abs=1e-9)
    (lam, vec), (mu, _) = eig_min_batch([HermMatrix.of([[3]]), HermMatrix.of([[0, 1], [1, 0]])], vectors=True)
    assert lam == pytest.approx(3.0)
    assert mu == pytest.approx(-1.0)
    assert abs(vec.re[0]) == pytest.approx(1.0)


def test_exact_and_approx_verdicts_agree(rng):
    """Test that both PSD checks agree away from the boundary."""
    for k in range(100):
        dim = int(rng.integers(1, 7))
        m = random_psd(rng, dim, rank=int(rng.integers(1, dim + 1))) if k % 2 else random_hermitian(rng, dim)
        if abs(eig_min(m)) <= 1e-6:
            continue
        assert psd_check_exact(m).is_psd == psd_check_approx(m.to_backend(Backend.APPROX)).is_psd


def test_quad_form_bounded_by_eig_min(rng):
    """Test <M v, v> / |v|^2 >= eigMin(M) on random Hermitian matrices."""
    for _ in range(100):
        dim = int(rng.integers(1, 7))
        m = random_hermitian(rng, dim, Backend.APPROX)
        v = ComplexVector(rng.standard_normal(dim), rng.standard_normal(dim))
        ratio = m.quad_form(v) / float(np.sum(v.re**2) + np.sum(v.im**2))
        assert ratio >= eig_min(m) - 1e-9


def test_to_scalar_beyond_double_range():
    """Test that a value too large for a double is rejected on the approx backend only."""
    assert to_scalar(2**5040, Backend.EXACT) == 2**5040
    with pytest.raises(ScalarRangeError, match="exact backend"):
        to_scalar(2**5040, Backend.APPROX)
    with pytest.raises(ValueError):
        HermMatrix.from_parts([[str(2**5040)]], None, Backend.APPROX)
