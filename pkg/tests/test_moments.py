"""Tests for operator sequences, moment and localizing matrices and truncated tests."""

from fractions import Fraction

import pytest

from src.algebra import Backend, ComplexVector, HermMatrix, psd_check_exact
from src.errors import OrderError
from src.matpoly import RegionK, ScalarPolynomial
from src.measures import pushforward_shift, random_operator_measure
from src.moments import (
    OperatorSequence,
    bisgaard_gap,
    bisgaard_sequence,
    compress_sequence,
    default_probes,
    localizing_matrix,
    localizing_order,
    moment_matrix,
    sequence_from_measure,
    shift_sequence,
    truncated_moment_test,
)
from src.preserver import BISGAARD_BLOCK

from .conftest import dirac


def test_sequence_must_be_complete():
    """Test that missing entries are rejected unless zero-filled."""
    with pytest.raises(OrderError):
        OperatorSequence.of({(0,): HermMatrix.identity(1)}, 1, 1, 2)
    s = OperatorSequence.of({(0,): HermMatrix.identity(1)}, 1, 1, 2, fill_zero=True)
    assert s[(2,)].is_zero()
    with pytest.raises(OrderError):
        OperatorSequence.of({(3,): HermMatrix.identity(1)}, 1, 1, 2)


def test_moment_matrix_of_dirac_at_zero():
    """Test [[I, 0], [0, 0]] for delta_0 with weight I."""
    s = sequence_from_measure(dirac((0,), HermMatrix.identity(2)), 2)
    m = moment_matrix(s, 1)
    assert m == HermMatrix.diag([1, 1, 0, 0])
    assert psd_check_exact(m).is_psd


def test_moment_matrix_needs_order():
    """Test that D = 2 needs entries up to degree 4."""
    s = sequence_from_measure(dirac((0,), HermMatrix.identity(1)), 3)
    with pytest.raises(OrderError):
        moment_matrix(s, 2)


def test_bisgaard_block(bisgaard):
    """Test the 4 x 4 Bisgaard moment matrix entrywise."""
    m = moment_matrix(bisgaard, 1)
    assert m == HermMatrix.of(BISGAARD_BLOCK)
    assert not psd_check_exact(m).is_psd


def test_bisgaard_entries(bisgaard):
    """Test the gap values a_k I at even orders and 0 at odd orders."""
    assert bisgaard_gap(2) == 2 ** 24
    assert bisgaard_gap(3) == 2 ** 120
    assert bisgaard[(4,)] == HermMatrix.identity(2).scale(2 ** 24)
    assert bisgaard[(5,)].is_zero()
    assert bisgaard[(6,)] == HermMatrix.identity(2).scale(2 ** 120)
    with pytest.raises(OrderError):
        bisgaard_sequence(0)


def test_localizing_matrix_with_unit_constraint(rng):
    """Test that g = 1 reproduces the moment matrix."""
    s = sequence_from_measure(random_operator_measure(2, 2, 3, seed=rng), 4)
    one = ScalarPolynomial.constant(1, 2)
    assert localizing_matrix(s, one, 2) == moment_matrix(s, 2)


def test_localizing_matrix_single_atoms():
    """Test g = x(1 - x) at atoms 1/2 and 2."""
    x = ScalarPolynomial.variable(0, 1)
    g = x * (1 - x)
    inside = sequence_from_measure(dirac((Fraction(1, 2),), HermMatrix.identity(2)), 2)
    assert localizing_matrix(inside, g, 0) == HermMatrix.identity(2).scale(Fraction(1, 4))
    outside = sequence_from_measure(dirac((2,), HermMatrix.identity(2)), 2)
    m = localizing_matrix(outside, g, 0)
    assert m == HermMatrix.identity(2).scale(-2)
    assert not psd_check_exact(m).is_psd
    with pytest.raises(OrderError):
        localizing_matrix(inside, g, 1)


def test_localizing_order():
    """Test D_g = D - ceil(deg g / 2)."""
    x = ScalarPolynomial.variable(0, 1)
    assert localizing_order(2, x * (1 - x)) == 1
    assert localizing_order(2, x * x * x) == 0
    assert localizing_order(0, x * (1 - x)) == -1


def test_truncated_test_region_support():
    """Test that an atom outside K fails through a localizing matrix."""
    s = sequence_from_measure(dirac((2,), HermMatrix.identity(1)), 2)
    assert truncated_moment_test(s, RegionK.all_space(1), 1).passed
    verdict = truncated_moment_test(s, RegionK.interval(0, 1), 1)
    assert not verdict.passed
    assert verdict.failing_label == "localizing[g1]"
    assert [label for label, _ in verdict.results] == ["moment", "localizing[g1]"]


def test_truncated_test_compression_labels(bisgaard):
    """Test compression mode on the default probes."""
    verdict = truncated_moment_test(bisgaard, RegionK.all_space(1), 1, mode="compression")
    assert verdict.passed
    assert [label for label, _ in verdict.results] == [
        "probe[e1]:moment",
        "probe[e2]:moment",
        "probe[e1+e2]:moment",
        "probe[e1+i*e2]:moment",
    ]
    with pytest.raises(ValueError):
        truncated_moment_test(bisgaard, RegionK.all_space(1), 1, mode="compression", probes=[])


def test_bisgaard_block_fails_with_witness(bisgaard):
    """Test the failing verdict of the block test."""
    verdict = truncated_moment_test(bisgaard, RegionK.all_space(1), 1)
    assert not verdict.passed
    assert verdict.failing_label == "moment"
    m = moment_matrix(bisgaard, 1)
    assert m.quad_form(verdict.witness) < 0
    report = verdict.to_dict()
    assert report["failingMatrix"] == "moment"
    assert report["matrices"][0]["isPsd"] is False


@pytest.mark.parametrize("D", [1, 2, 3])
def test_bisgaard_local_pass(bisgaard, D):
    """Test every default compression of the Bisgaard sequence exactly."""
    assert truncated_moment_test(bisgaard, RegionK.all_space(1), D, mode="compression").passed


def test_compress_sequence():
    """Test <S_alpha a, a> entrywise."""
    s = bisgaard_sequence(1)
    c = compress_sequence(s, ComplexVector.of([1, 1j]))
    # S_1 = [[0, 2], [2, 0]]: 2 Re(conj(1) * 2 * i) = 0
    assert [c[(n,)].re[0, 0] for n in range(3)] == [5, 0, 5]


def test_default_probes():
    """Test e_1, e_2, e_1 + e_2, e_1 + i e_2."""
    probes = default_probes(2)
    assert [(list(p.re), list(p.im)) for p in probes] == [
        ([1, 0], [0, 0]),
        ([0, 1], [0, 0]),
        ([1, 1], [0, 0]),
        ([1, 0], [0, 1]),
    ]
    assert len(default_probes(3)) == 3 + 3 + 3


def test_shift_sequence_matches_pushforward(rng):
    """Test moments of mu(. + y) against the translated measure."""
    mu = random_operator_measure(2, 2, 3, seed=rng)
    y = (Fraction(1, 3), Fraction(-1, 2))
    assert sequence_from_measure(pushforward_shift(mu, y), 4) == shift_sequence(sequence_from_measure(mu, 4), y)


def test_sequence_backend_conversion(bisgaard):
    """Test the approx copy of the Bisgaard sequence."""
    approx = bisgaard.truncate(2).to_backend(Backend.APPROX)
    assert approx.backend is Backend.APPROX
    assert not truncated_moment_test(approx, RegionK.all_space(1), 1).passed


def test_localizing_matrix_is_linear_in_g(rng):
    """Test M_D(S, a g + h) = a M_D(S, g) + M_D(S, h)."""
    x1, x2 = ScalarPolynomial.variable(0, 2), ScalarPolynomial.variable(1, 2)
    g = 1 - x1 * x1
    h = x1 * x2 + x2
    for seed in range(20):
        s = sequence_from_measure(random_operator_measure(2, 2, 3, seed=seed), 4)
        a = Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 6)))
        assert localizing_matrix(s, g * a + h, 2) == localizing_matrix(s, g, 2).scale(a) + localizing_matrix(s, h, 2)


def test_shifts_compose(rng):
    """Test that shifting by y and then by z equals shifting by y + z."""
    for seed in range(20):
        s = sequence_from_measure(random_operator_measure(1, 2, 3, seed=seed), 4)
        y = (Fraction(int(rng.integers(-4, 5)), 3),)
        z = (Fraction(int(rng.integers(-4, 5)), 2),)
        assert shift_sequence(shift_sequence(s, y), z) == shift_sequence(s, (y[0] + z[0],))


def test_moment_matrices_of_measures_are_psd():
    """Test that genuine moment sequences pass the block test."""
    for seed in range(100):
        s = sequence_from_measure(random_operator_measure(1 + seed % 2, 2, 3, seed=seed), 4)
        assert psd_check_exact(moment_matrix(s, 2)).is_psd
