"""Region documents."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..algebra import Backend, format_number
from ..matpoly import RegionK
from .matrix import Num


class RegionDoc(BaseModel):
    """all: nvars; box: lo, hi; ball: center, radius. `shift` translates the region."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    kind: Literal["all", "box", "ball"]
    nvars: Optional[int] = Field(default=None, ge=1)
    lo: Optional[list[Num]] = None
    hi: Optional[list[Num]] = None
    center: Optional[list[Num]] = None
    radius: Optional[Num] = None
    shift: Optional[list[Num]] = None

    @model_validator(mode="after")
    def _fields_for_kind(self) -> "RegionDoc":
        if self.kind == "all" and self.nvars is None:
            raise ValueError("an all-space region needs nvars")
        if self.kind == "box" and (self.lo is None or self.hi is None):
            raise ValueError("a box needs lo and hi")
        if self.kind == "ball" and (self.center is None or self.radius is None):
            raise ValueError("a ball needs center and radius")
        return self

    @classmethod
    def from_domain(cls, region: RegionK) -> "RegionDoc":
        def fmt(values):
            return [format_number(v, Backend.EXACT) for v in values]

        shift = fmt(region.shift) if any(region.shift) else None
        if region.kind == "all":
            return cls(kind="all", nvars=region.nvars, shift=shift)
        if region.kind == "box":
            return cls(kind="box", lo=fmt(region.lo), hi=fmt(region.hi), shift=shift)
        return cls(kind="ball", center=fmt(region.center), radius=format_number(region.radius, Backend.EXACT), shift=shift)

    def to_domain(self) -> RegionK:
        if self.kind == "all":
            region = RegionK.all_space(self.nvars)
        elif self.kind == "box":
            region = RegionK.box(self.lo, self.hi)
        else:
            region = RegionK.ball(self.center, self.radius)
        if self.nvars is not None and self.nvars != region.nvars:
            raise ValueError(f"nvars {self.nvars} does not match a region in {region.nvars} variables")
        return region.shifted(self.shift) if self.shift is not None else region
