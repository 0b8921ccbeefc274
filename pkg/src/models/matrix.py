"""Matrix and polynomial documents."""

from __future__ import annotations

from typing import Annotated, Optional, Union

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, model_validator

from ..algebra import Backend, HermMatrix, MultiIndex, format_number, parse_number
from ..matpoly import MatrixPolynomial


def _check_number(value: Union[int, float, str]) -> Union[int, float, str]:
    parse_number(value)
    return value


Num = Annotated[Union[int, float, str], AfterValidator(_check_number)]


def render_number(value, backend: Backend) -> Union[str, float]:
    return format_number(value, backend)


class MatrixDoc(BaseModel):
    """A Hermitian matrix as real and (optional) imaginary rows."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    re: list[list[Num]]
    im: Optional[list[list[Num]]] = None

    @model_validator(mode="after")
    def _square(self) -> "MatrixDoc":
        n = len(self.re)
        if any(len(row) != n for row in self.re):
            raise ValueError("re must be a square matrix")
        if self.im is not None and (len(self.im) != n or any(len(row) != n for row in self.im)):
            raise ValueError("im must have the same shape as re")
        return self

    @classmethod
    def from_domain(cls, m: HermMatrix) -> "MatrixDoc":
        re = [[render_number(v, m.backend) for v in row] for row in m.re.tolist()]
        im = None if m.is_real else [[render_number(v, m.backend) for v in row] for row in m.im.tolist()]
        return cls(re=re, im=im)

    def to_domain(self, backend: Backend = Backend.EXACT) -> HermMatrix:
        return HermMatrix.from_parts(self.re, self.im, backend)


class TermDoc(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    exponents: list[int]
    coeff: MatrixDoc


class PolynomialDoc(BaseModel):
    """p = sum coeff x^exponents."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    nvars: int = Field(ge=1)
    dim: int = Field(ge=1)
    terms: list[TermDoc] = Field(default_factory=list)

    @classmethod
    def from_domain(cls, p: MatrixPolynomial) -> "PolynomialDoc":
        return cls(
            nvars=p.nvars,
            dim=p.dim,
            terms=[TermDoc(exponents=list(a), coeff=MatrixDoc.from_domain(c)) for a, c in p.items()],
        )

    def to_domain(self, backend: Backend = Backend.EXACT) -> MatrixPolynomial:
        terms = [(MultiIndex(t.exponents), t.coeff.to_domain(backend)) for t in self.terms]
        return MatrixPolynomial.of(terms, self.nvars, self.dim, backend)
