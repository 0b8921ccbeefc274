"""Parsing of tool and command-line inputs: documents, region and grid flags, backends."""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any

from ..algebra import Backend, parse_number
from ..config import settings
from ..errors import DocumentError, RegionError
from ..matpoly import GridSpec, RegionK
from ..models import ProblemDocument, RegionDoc
from ..preserver import default_y_grid

logger = logging.getLogger(__name__)


def load_document(source: Any) -> ProblemDocument:
    """A ProblemDocument from a model, a dict, JSON text or a file path."""
    if isinstance(source, ProblemDocument):
        return source
    if isinstance(source, dict):
        return ProblemDocument.from_dict(source)
    if not isinstance(source, str):
        raise DocumentError(f"expected a document, got {type(source).__name__}", field="document")
    if source.lstrip().startswith("{"):
        return ProblemDocument.parse(source)
    path = Path(source)
    if not path.is_file():
        raise DocumentError(f"no such file: {source}", field="document")
    logger.info(f"Reading document {path}")
    return ProblemDocument.parse(path.read_text(encoding="utf-8"))


def parse_backend(value: Any) -> Backend:
    if value is None:
        return Backend(settings.backend)
    if isinstance(value, Backend):
        return value
    try:
        return Backend(str(value))
    except ValueError as e:
        raise ValueError(f"Unknown backend {value!r}; use exact or approx") from e


def _ranges(text: str) -> list[tuple[Fraction, Fraction]]:
    out = []
    for part in text.split(","):
        bounds = part.split(":")
        if len(bounds) != 2:
            raise RegionError(f"Expected LO:HI, got {part!r}")
        out.append((Fraction(parse_number(bounds[0])), Fraction(parse_number(bounds[1]))))
    return out


def parse_region(spec: Any, nvars: int = 1) -> RegionK:
    """all | box:LO:HI[,LO:HI...] | ball:R@C1[,C2...] | a region document (dict, JSON or path)."""
    if isinstance(spec, RegionK):
        return spec
    if spec is None or spec == "all":
        return RegionK.all_space(nvars)
    if isinstance(spec, dict):
        if "kind" in spec and spec.get("kind") == "region":
            return load_document(spec).to_domain()
        return RegionDoc.model_validate(spec).to_domain()
    if not isinstance(spec, str):
        raise RegionError(f"Cannot read a region from {spec!r}")
    if spec.startswith("box:"):
        ranges = _ranges(spec[4:])
        return RegionK.box([a for a, _ in ranges], [b for _, b in ranges])
    if spec.startswith("ball:"):
        radius, sep, center = spec[5:].partition("@")
        if not sep:
            raise RegionError(f"Expected ball:R@C1,C2,..., got {spec!r}")
        return RegionK.ball([parse_number(c) for c in center.split(",")], parse_number(radius))
    doc = load_document(spec)
    if doc.kind != "region":
        raise DocumentError(f"expected a region document, got kind {doc.kind!r}", field="kind")
    return doc.to_domain()


def parse_grid(spec: Any) -> GridSpec | None:
    """N or N@LO:HI[,LO:HI...]; None keeps the defaults."""
    if spec is None or isinstance(spec, GridSpec):
        return spec
    if isinstance(spec, int):
        return GridSpec(points_per_axis=spec)
    count, sep, bounds = str(spec).partition("@")
    try:
        n = int(count)
    except ValueError as e:
        raise RegionError(f"Grid size must be an integer, got {count!r}") from e
    if not sep:
        return GridSpec(points_per_axis=n)
    return GridSpec(points_per_axis=n, bounds=tuple((float(a), float(b)) for a, b in _ranges(bounds)))


def parse_y_grid(spec: Any, region: RegionK) -> list[tuple]:
    """N (rational tensor grid on K) or explicit points "y1,y2;y1,y2;..."."""
    if spec is None:
        return default_y_grid(region)
    if isinstance(spec, int):
        return default_y_grid(region, spec)
    if isinstance(spec, list):
        return [tuple(Fraction(parse_number(v)) for v in y) for y in spec]
    text = str(spec)
    if ";" not in text and "," not in text:
        return default_y_grid(region, int(text))
    return [tuple(Fraction(parse_number(v)) for v in part.split(",")) for part in text.split(";") if part]


def parse_probe_text(text: str) -> list[dict[str, list[str]]]:
    """Probe dicts {"re", "im"?} from the flag syntax re1,re2[@im1,im2];..."""
    out = []
    for part in text.split(";"):
        if not part.strip():
            continue
        re_text, sep, im_text = part.partition("@")
        probe = {"re": [v.strip() for v in re_text.split(",")]}
        if sep:
            probe["im"] = [v.strip() for v in im_text.split(",")]
            if len(probe["im"]) != len(probe["re"]):
                raise ValueError(f"Probe {part!r} has {len(probe['re'])} real and {len(probe['im'])} imaginary parts")
        out.append(probe)
    if not out:
        raise ValueError(f"No probe vectors in {text!r}")
    return out


def document_tolerance(tol: float | None, doc: ProblemDocument, field: str = "psd") -> float | None:
    """An explicit tol wins, then the document's tolerances.<field>; sample falls back to psd."""
    if tol is not None or doc.tolerances is None:
        return tol
    value = getattr(doc.tolerances, field)
    if value is None and field == "sample":
        value = doc.tolerances.psd
    return value


def error_report(e: Exception) -> dict[str, Any]:
    out: dict[str, Any] = {"error": str(e), "type": type(e).__name__}
    if isinstance(e, DocumentError) and e.field:
        out["field"] = e.field
    return out


def dumps_error(e: Exception) -> str:
    return json.dumps(error_report(e), sort_keys=True, indent=2)
