"""Pydantic document models for operators, measures, sequences and regions."""

from .matrix import MatrixDoc, PolynomialDoc, TermDoc
from .region import RegionDoc
from .operator import CanonicalDoc, CanonicalMapDoc, ImageDoc, OperatorDoc
from .measure import AtomDoc, FamilyAtomDoc, FamilyDoc, MeasureDoc, SequenceDoc, SequenceEntryDoc
from .document import ProblemDocument, Tolerances

__all__ = [
    "MatrixDoc",
    "PolynomialDoc",
    "TermDoc",
    "RegionDoc",
    "CanonicalDoc",
    "CanonicalMapDoc",
    "ImageDoc",
    "OperatorDoc",
    "AtomDoc",
    "FamilyAtomDoc",
    "FamilyDoc",
    "MeasureDoc",
    "SequenceDoc",
    "SequenceEntryDoc",
    "ProblemDocument",
    "Tolerances",
]
