"""Tests for problem documents: parsing, rendering and conversion."""

import json
from fractions import Fraction

import pytest

from src.algebra import Backend, HermMatrix
from src.errors import DocumentError
from src.linop import PolyOperator, random_operator
from src.matpoly import MatrixPolynomial, RegionK
from src.measures import AtomicOperatorMeasure
from src.models import FamilyDoc, MatrixDoc, OperatorDoc, PolynomialDoc, ProblemDocument, RegionDoc, SequenceDoc
from src.moments import OperatorSequence, bisgaard_sequence
from src.preserver import CovariantMeasureFamily


def test_corpus_round_trip(document_paths):
    """Test parse -> render -> parse on every corpus document."""
    assert len(document_paths) >= 6
    for path in document_paths:
        doc = ProblemDocument.parse(path.read_text())
        text = doc.render()
        again = ProblemDocument.parse(text)
        assert again == doc, path.name
        assert again.render() == text, path.name


def test_corpus_to_domain(document_paths):
    """Test that every corpus document converts to a library value."""
    kinds = {}
    for path in document_paths:
        doc = ProblemDocument.parse(path.read_text())
        kinds[doc.kind] = doc.to_domain()
    assert isinstance(kinds["sequence"], OperatorSequence)
    assert isinstance(kinds["measure"], AtomicOperatorMeasure)
    assert isinstance(kinds["operator"], PolyOperator)
    assert isinstance(kinds["mapMeasureFamily"], CovariantMeasureFamily)
    assert kinds["region"] == RegionK.ball([0, Fraction(1, 2)], Fraction(3, 2))
    assert kinds["polynomial"].backend is Backend.APPROX


def test_sequence_document(sequence_document):
    """Test the moments of delta_{1/2}."""
    S = ProblemDocument.from_dict(sequence_document).to_domain()
    assert S[(1,)] == HermMatrix.of([["1/2"]])
    assert S.order == 2


def test_unknown_field_is_named(sequence_document):
    """Test that extra fields are rejected with their location."""
    sequence_document["sequence"]["bogus"] = 1
    with pytest.raises(DocumentError) as exc:
        ProblemDocument.from_dict(sequence_document)
    assert exc.value.field == "sequence.bogus"


def test_payload_must_match_kind(sequence_document):
    """Test a sequence payload under an operator kind."""
    sequence_document["kind"] = "operator"
    with pytest.raises(DocumentError) as exc:
        ProblemDocument.from_dict(sequence_document)
    assert exc.value.field == "document"


def test_bad_number_is_located(sequence_document):
    """Test that non-numeric strings are rejected."""
    sequence_document["sequence"]["entries"][1]["matrix"]["re"] = [["half"]]
    with pytest.raises(DocumentError) as exc:
        ProblemDocument.from_dict(sequence_document)
    assert exc.value.field.startswith("sequence.entries.1.matrix.re")


def test_invalid_json():
    """Test that malformed JSON reports a document error."""
    with pytest.raises(DocumentError) as exc:
        ProblemDocument.parse('{"version": "1",')
    assert exc.value.field == "document"
    assert "line 1" in str(exc.value)


def test_semantic_errors_name_the_payload(sequence_document):
    """Test non-Hermitian and incomplete sequences."""
    doc = dict(sequence_document)
    doc["sequence"] = dict(sequence_document["sequence"], entries=sequence_document["sequence"]["entries"][:2])
    with pytest.raises(DocumentError) as exc:
        ProblemDocument.from_dict(doc).to_domain()
    assert exc.value.field == "sequence"

    doc["sequence"] = {
        "nvars": 1,
        "dim": 2,
        "order": 0,
        "entries": [{"exponents": [0], "matrix": {"re": [[1, 2], [3, 4]]}}],
    }
    with pytest.raises(DocumentError):
        ProblemDocument.from_dict(doc).to_domain()


def test_matrix_must_be_square():
    """Test the shape validator."""
    with pytest.raises(ValueError):
        MatrixDoc(re=[[1, 2]])
    with pytest.raises(ValueError):
        MatrixDoc(re=[[1]], im=[[0, 0]])


def test_tolerances_must_be_positive(sequence_document):
    """Test tolerance validation."""
    sequence_document["tolerances"] = {"psd": 0}
    with pytest.raises(DocumentError) as exc:
        ProblemDocument.from_dict(sequence_document)
    assert exc.value.field == "tolerances.psd"


def test_operator_document_round_trip():
    """Test OperatorDoc from and to a random exact operator."""
    T = random_operator(2, 2, 2, seed=11)
    doc = ProblemDocument.wrap(OperatorDoc.from_domain(T))
    again = ProblemDocument.parse(doc.render())
    assert again.kind == "operator"
    assert again.to_domain() == T


def test_duplicate_images_rejected(negation_document):
    """Test that an image given twice is refused."""
    images = negation_document["operator"]["images"]
    images.append(images[0])
    with pytest.raises(DocumentError):
        ProblemDocument.from_dict(negation_document).to_domain()


def test_sequence_document_from_domain():
    """Test SequenceDoc on the Bisgaard sequence with 2^24 entries."""
    S = bisgaard_sequence(2)
    doc = SequenceDoc.from_domain(S)
    assert [e.exponents for e in doc.entries] == [[0], [1], [2], [3], [4]]
    assert doc.entries[4].matrix.re[0][0] == str(2 ** 24)
    assert doc.to_domain() == S


def test_polynomial_document_approx():
    """Test approx polynomials keep float entries."""
    p = MatrixPolynomial.constant(HermMatrix.of([[0.5, 0.25j], [-0.25j, 1.0]], Backend.APPROX), 1)
    doc = PolynomialDoc.from_domain(p)
    assert doc.terms[0].coeff.re == [[0.5, 0.0], [0.0, 1.0]]
    assert doc.terms[0].coeff.im == [[0.0, 0.25], [-0.25, 0.0]]
    wrapped = ProblemDocument.wrap(doc, Backend.APPROX)
    assert json.loads(wrapped.render())["backend"] == "approx"
    assert wrapped.to_domain() == p


def test_region_document_with_shift():
    """Test a translated interval."""
    region = RegionK.interval(0, 1).shifted([Fraction(1, 2)])
    doc = RegionDoc.from_domain(region)
    assert doc.shift == ["1/2"]
    assert doc.to_domain() == region
    with pytest.raises(ValueError):
        RegionDoc(kind="box", lo=["0"])


def test_family_document(family_document):
    """Test offsets and maps of a family document."""
    F = ProblemDocument.from_dict(family_document).to_domain()
    assert F.offsets == [(0,), (Fraction(1, 4),)]
    assert F.maps[1].apply(HermMatrix.identity(2)) == HermMatrix.identity(2)
    again = FamilyDoc.from_domain(F)
    assert again.atoms[1].offset == ["1/4"]
