"""Canonical-form tools: canonical_form, apply_operator."""

from typing import Any

from mcp.types import Tool, TextContent

from ..algebra import MultiIndex, basis_label
from ..errors import DegreeOverflowError, DocumentError
from ..linop import PolyOperator, apply_operator, extract_canonical
from ..matpoly import MatrixPolynomial
from ..models import CanonicalDoc, PolynomialDoc, ProblemDocument
from ..preserver import build_from_family
from ..reports import render_report
from .inputs import dumps_error, load_document, parse_backend


def get_tools() -> tuple[list[Tool], dict[str, callable]]:
    """Return tools and handlers for canonical representations."""
    tools = [
        Tool(
            name="canonical_form",
            description="Extract Q_beta(E_i) of an operator by the binomial transform of its basis images",
            inputSchema={
                "type": "object",
                "properties": {
                    "document": {"description": "Operator or mapMeasureFamily document (object, JSON text or file path)"},
                    "max_deg": {"type": "integer", "description": "Report Q_beta only for |beta| <= max_deg"},
                    "backend": {"type": "string", "enum": ["exact", "approx"], "description": "Override the document backend"},
                },
                "required": ["document"],
            },
        ),
        Tool(
            name="apply_operator",
            description="Apply an operator document to a polynomial document",
            inputSchema={
                "type": "object",
                "properties": {
                    "document": {"description": "Operator document"},
                    "polynomial": {"description": "Polynomial document"},
                    "canonical": {"type": "boolean", "description": "Apply through the canonical form instead of the basis images", "default": False},
                },
                "required": ["document", "polynomial"],
            },
        ),
    ]
    handlers = {
        "canonical_form": _canonical_form,
        "apply_operator": _apply_operator,
    }
    return tools, handlers


def load_operator(source: Any, backend: Any = None, max_deg: int | None = None) -> PolyOperator:
    """An operator from an operator document, or built from a mapMeasureFamily document (needs max_deg)."""
    doc = load_document(source)
    backend = parse_backend(backend) if backend is not None else doc.scalar_backend
    if doc.kind == "operator":
        return doc.operator.to_domain(backend)
    if doc.kind == "mapMeasureFamily":
        if max_deg is None:
            raise DocumentError("building an operator from a family needs a maximum degree", field="maxDeg")
        return build_from_family(doc.map_measure_family.to_domain(backend), max_deg)
    raise DocumentError(f"expected an operator or mapMeasureFamily document, got {doc.kind!r}", field="kind")


def _entry_text(re, im) -> str:
    if im == 0:
        return str(re)
    sign = "+" if im > 0 else "-"
    return f"{re}{sign}{abs(im)}i"


def _polynomial_text(p: MatrixPolynomial) -> str:
    """sum of [[...]]*x1^a1*x2^a2 terms, entries as p/q (exact) or decimals."""
    if p.is_zero():
        return "0"
    parts = []
    for alpha, c in p.items():
        mono = "*".join(f"x{i + 1}^{a}" if a > 1 else f"x{i + 1}" for i, a in enumerate(alpha) if a) or "1"
        rows = [[_entry_text(r, i) for r, i in zip(rr, ii)] for rr, ii in zip(c.re.tolist(), c.im.tolist())]
        parts.append("[" + "; ".join(" ".join(row) for row in rows) + f"]*{mono}")
    return " + ".join(parts)


def run_canon(document: Any, max_deg: int | None = None, backend: Any = None) -> dict[str, Any]:
    """The canon command: every nonzero Q_beta(E_i) up to max_deg."""
    T = load_operator(document, backend, max_deg)
    if max_deg is not None and max_deg > T.max_deg:
        raise DegreeOverflowError(max_deg, T.max_deg)
    C = extract_canonical(T)
    doc = CanonicalDoc.from_domain(C, max_deg)
    maps = []
    for entry in doc.maps:
        p = C.q[(MultiIndex(entry.exponents), entry.basis_index)]
        maps.append({
            "exponents": entry.exponents,
            "basisIndex": entry.basis_index,
            "basis": basis_label(entry.basis_index, C.dim),
            "text": _polynomial_text(p),
        })
    return {
        "command": "canon",
        "canonical": doc.model_dump(by_alias=True, exclude_none=True),
        "maps": maps,
    }


def run_apply(document: Any, polynomial: Any, canonical: bool = False, backend: Any = None) -> dict[str, Any]:
    """applyOperator through the basis images (or the canonical form)."""
    T = load_operator(document, backend)
    pdoc = load_document(polynomial) if not isinstance(polynomial, PolynomialDoc) else ProblemDocument.wrap(polynomial)
    if pdoc.kind != "polynomial":
        raise DocumentError(f"expected a polynomial document, got {pdoc.kind!r}", field="kind")
    p = pdoc.polynomial.to_domain(T.backend)
    out = extract_canonical(T).apply(p) if canonical else apply_operator(T, p)
    result = ProblemDocument.wrap(PolynomialDoc.from_domain(out), T.backend)
    return {
        "command": "apply",
        "path": "canonical" if canonical else "images",
        "result": result.model_dump(by_alias=True, exclude_none=True),
    }


async def _canonical_form(args: dict[str, Any]) -> list[TextContent]:
    """Extract the canonical representation."""
    try:
        report = run_canon(args["document"], args.get("max_deg"), args.get("backend"))
    except (ValueError, KeyError) as e:
        return [TextContent(type="text", text=dumps_error(e))]
    return [TextContent(type="text", text=render_report(report))]


async def _apply_operator(args: dict[str, Any]) -> list[TextContent]:
    """Apply an operator to a polynomial."""
    try:
        report = run_apply(args["document"], args["polynomial"], args.get("canonical", False))
    except (ValueError, KeyError) as e:
        return [TextContent(type="text", text=dumps_error(e))]
    return [TextContent(type="text", text=render_report(report))]
