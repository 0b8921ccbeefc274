"""The versioned problem document shared by every command."""

from __future__ import annotations

import json
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..algebra import Backend
from ..errors import DocumentError
from .matrix import PolynomialDoc
from .measure import FamilyDoc, MeasureDoc, SequenceDoc
from .operator import OperatorDoc
from .region import RegionDoc

DocumentKind = Literal["operator", "measure", "mapMeasureFamily", "sequence", "region", "polynomial"]

PAYLOAD_FIELDS = {
    "operator": "operator",
    "measure": "measure",
    "mapMeasureFamily": "map_measure_family",
    "sequence": "sequence",
    "region": "region",
    "polynomial": "polynomial",
}


class Tolerances(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    psd: Optional[float] = Field(default=None, gt=0)
    sample: Optional[float] = Field(default=None, gt=0)


class ProblemDocument(BaseModel):
    """{version, kind, backend, tolerances?, <kind>: payload}; unknown fields are rejected."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    version: Literal["1"] = "1"
    kind: DocumentKind
    backend: Literal["exact", "approx"] = "exact"
    tolerances: Optional[Tolerances] = None

    operator: Optional[OperatorDoc] = None
    measure: Optional[MeasureDoc] = None
    map_measure_family: Optional[FamilyDoc] = Field(default=None, alias="mapMeasureFamily")
    sequence: Optional[SequenceDoc] = None
    region: Optional[RegionDoc] = None
    polynomial: Optional[PolynomialDoc] = None

    @model_validator(mode="after")
    def _payload_matches_kind(self) -> "ProblemDocument":
        present = [k for k, f in PAYLOAD_FIELDS.items() if getattr(self, f) is not None]
        if present != [self.kind]:
            raise ValueError(f"a '{self.kind}' document carries exactly the '{self.kind}' payload, found {present}")
        return self

    @property
    def payload(self) -> BaseModel:
        return getattr(self, PAYLOAD_FIELDS[self.kind])

    @property
    def scalar_backend(self) -> Backend:
        return Backend(self.backend)

    def to_domain(self) -> Any:
        """The payload as a library value (regions ignore the backend)."""
        try:
            if self.kind == "region":
                return self.region.to_domain()
            return self.payload.to_domain(self.scalar_backend)
        except DocumentError:
            raise
        except ValueError as e:
            raise DocumentError(str(e), field=PAYLOAD_FIELDS[self.kind]) from e

    @classmethod
    def wrap(cls, payload: BaseModel, backend: Backend = Backend.EXACT) -> "ProblemDocument":
        kind = next(k for k, model in PAYLOAD_MODELS.items() if isinstance(payload, model))
        return cls(kind=kind, backend=backend.value, **{PAYLOAD_FIELDS[kind]: payload})

    @classmethod
    def from_dict(cls, data: Any) -> "ProblemDocument":
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            err = e.errors()[0]
            field = ".".join(str(p) for p in err["loc"]) or "document"
            raise DocumentError(err["msg"], field=field) from e

    @classmethod
    def parse(cls, text: str) -> "ProblemDocument":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}", field="document") from e
        return cls.from_dict(data)

    def render(self) -> str:
        return json.dumps(self.model_dump(by_alias=True, exclude_none=True), sort_keys=True, indent=2)


PAYLOAD_MODELS: dict[str, type[BaseModel]] = {
    "operator": OperatorDoc,
    "measure": MeasureDoc,
    "mapMeasureFamily": FamilyDoc,
    "sequence": SequenceDoc,
    "region": RegionDoc,
    "polynomial": PolynomialDoc,
}
