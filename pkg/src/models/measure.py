"""Measure, measure-family and sequence documents."""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..algebra import Backend, MultiIndex, format_number, grlex_key
from ..measures import AtomicMapMeasure, AtomicOperatorMeasure, ChoiMap
from ..moments import OperatorSequence
from ..preserver import CovariantMeasureFamily
from .matrix import MatrixDoc, Num
from .region import RegionDoc


class AtomDoc(BaseModel):
    """An atom carries either a PSD weight (operator-valued) or a Choi matrix (map-valued)."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    point: list[Num]
    weight: Optional[MatrixDoc] = None
    choi: Optional[MatrixDoc] = None

    @model_validator(mode="after")
    def _one_payload(self) -> "AtomDoc":
        if (self.weight is None) == (self.choi is None):
            raise ValueError("an atom needs exactly one of weight or choi")
        return self


class MeasureDoc(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    nvars: int = Field(ge=1)
    dim: int = Field(ge=1)
    atoms: list[AtomDoc] = Field(default_factory=list)
    support: Optional[RegionDoc] = None

    @model_validator(mode="after")
    def _uniform_atoms(self) -> "MeasureDoc":
        kinds = {a.weight is None for a in self.atoms}
        if len(kinds) > 1:
            raise ValueError("atoms mix weights and Choi matrices")
        return self

    @property
    def is_map_valued(self) -> bool:
        return bool(self.atoms) and self.atoms[0].choi is not None

    @classmethod
    def from_domain(cls, mu: Union[AtomicOperatorMeasure, AtomicMapMeasure]) -> "MeasureDoc":
        atoms = []
        for t, w in mu.atoms:
            point = [format_number(v, mu.backend) for v in t]
            if isinstance(w, ChoiMap):
                atoms.append(AtomDoc(point=point, choi=MatrixDoc.from_domain(w.choi)))
            else:
                atoms.append(AtomDoc(point=point, weight=MatrixDoc.from_domain(w)))
        support = RegionDoc.from_domain(mu.support) if mu.support is not None else None
        return cls(nvars=mu.nvars, dim=mu.dim, atoms=atoms, support=support)

    def to_domain(self, backend: Backend = Backend.EXACT) -> Union[AtomicOperatorMeasure, AtomicMapMeasure]:
        support = self.support.to_domain() if self.support is not None else None
        if self.is_map_valued:
            atoms = [(a.point, ChoiMap.of(a.choi.to_domain(backend))) for a in self.atoms]
            return AtomicMapMeasure.create(atoms, self.nvars, self.dim, backend, support)
        atoms = [(a.point, a.weight.to_domain(backend)) for a in self.atoms]
        return AtomicOperatorMeasure.create(atoms, self.nvars, self.dim, backend, support)


class FamilyAtomDoc(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    offset: list[Num]
    choi: MatrixDoc


class FamilyDoc(BaseModel):
    """A translation-covariant map-measure family: Choi maps at fixed offsets, intended region K."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    region: RegionDoc
    atoms: list[FamilyAtomDoc] = Field(min_length=1)

    @classmethod
    def from_domain(cls, F: CovariantMeasureFamily) -> "FamilyDoc":
        return cls(
            region=RegionDoc.from_domain(F.region),
            atoms=[
                FamilyAtomDoc(offset=[format_number(v, F.backend) for v in c], choi=MatrixDoc.from_domain(phi.choi))
                for c, phi in F.atoms
            ],
        )

    def to_domain(self, backend: Backend = Backend.EXACT) -> CovariantMeasureFamily:
        atoms = [(a.offset, ChoiMap.of(a.choi.to_domain(backend))) for a in self.atoms]
        return CovariantMeasureFamily.create(atoms, self.region.to_domain(), backend)


class SequenceEntryDoc(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    exponents: list[int]
    matrix: MatrixDoc


class SequenceDoc(BaseModel):
    """Truncated operator sequence; every |alpha| <= order must be present."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    nvars: int = Field(ge=1)
    dim: int = Field(ge=1)
    order: int = Field(ge=0)
    entries: list[SequenceEntryDoc] = Field(default_factory=list)

    @classmethod
    def from_domain(cls, S: OperatorSequence) -> "SequenceDoc":
        keys = sorted(S.entries, key=grlex_key)
        return cls(
            nvars=S.nvars,
            dim=S.dim,
            order=S.order,
            entries=[SequenceEntryDoc(exponents=list(a), matrix=MatrixDoc.from_domain(S.entries[a])) for a in keys],
        )

    def to_domain(self, backend: Backend = Backend.EXACT) -> OperatorSequence:
        entries = {}
        for e in self.entries:
            key = MultiIndex(e.exponents)
            if key in entries:
                raise ValueError(f"duplicate entry for exponents {e.exponents}")
            entries[key] = e.matrix.to_domain(backend)
        return OperatorSequence.of(entries, self.nvars, self.dim, self.order, backend)
