"""Operator and canonical-representation documents."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from ..algebra import Backend, MultiIndex, basis_label, grlex_key
from ..linop import CanonicalRep, PolyOperator
from .matrix import PolynomialDoc


class ImageDoc(BaseModel):
    """T(E_basisIndex (x) x^exponents) = image."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    basis_index: int = Field(alias="basisIndex", ge=0)
    exponents: list[int]
    image: PolynomialDoc


class OperatorDoc(BaseModel):
    """Basis images of a degree-truncated operator; omitted images are zero."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    nvars: int = Field(ge=1)
    dim: int = Field(ge=1)
    max_deg: int = Field(alias="maxDeg", ge=0)
    images: list[ImageDoc] = Field(default_factory=list)

    @classmethod
    def from_domain(cls, T: PolyOperator) -> "OperatorDoc":
        keys = sorted(T.images, key=lambda k: (grlex_key(k[1]), k[0]))
        return cls(
            nvars=T.nvars,
            dim=T.dim,
            max_deg=T.max_deg,
            images=[
                ImageDoc(basis_index=i, exponents=list(a), image=PolynomialDoc.from_domain(T.images[(i, a)]))
                for i, a in keys
                if not T.images[(i, a)].is_zero()
            ],
        )

    def to_domain(self, backend: Backend = Backend.EXACT) -> PolyOperator:
        images = {}
        for doc in self.images:
            key = (doc.basis_index, MultiIndex(doc.exponents))
            if key in images:
                raise ValueError(f"duplicate image for basisIndex {doc.basis_index}, exponents {doc.exponents}")
            images[key] = doc.image.to_domain(backend)
        return PolyOperator.of(images, self.nvars, self.dim, self.max_deg, backend)


class CanonicalMapDoc(BaseModel):
    """Q_exponents(E_basisIndex) as a polynomial."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    exponents: list[int]
    basis_index: int = Field(alias="basisIndex", ge=0)
    basis: str
    polynomial: PolynomialDoc


class CanonicalDoc(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    nvars: int
    dim: int
    max_deg: int = Field(alias="maxDeg")
    maps: list[CanonicalMapDoc] = Field(default_factory=list)

    @classmethod
    def from_domain(cls, C: CanonicalRep, max_deg: int | None = None) -> "CanonicalDoc":
        """Nonzero Q_beta(E_i) for |beta| <= max_deg (default: all)."""
        max_deg = C.max_deg if max_deg is None else max_deg
        keys = sorted(
            (k for k in C.q if k[0].degree <= max_deg and not C.q[k].is_zero()),
            key=lambda k: (grlex_key(k[0]), k[1]),
        )
        return cls(
            nvars=C.nvars,
            dim=C.dim,
            max_deg=max_deg,
            maps=[
                CanonicalMapDoc(
                    exponents=list(beta),
                    basis_index=i,
                    basis=basis_label(i, C.dim),
                    polynomial=PolynomialDoc.from_domain(C.q[(beta, i)]),
                )
                for beta, i in keys
            ],
        )
