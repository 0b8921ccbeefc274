"""Moment tools: moment_check."""

from typing import Any

from mcp.types import Tool, TextContent

from ..algebra import Backend, ComplexVector
from ..errors import DocumentError
from ..measures import AtomicOperatorMeasure
from ..moments import OperatorSequence, sequence_from_measure, truncated_moment_test
from ..reports import render_report
from .inputs import document_tolerance, dumps_error, load_document, parse_backend, parse_probe_text, parse_region


def get_tools() -> tuple[list[Tool], dict[str, callable]]:
    """Return tools and handlers for truncated moment tests."""
    tools = [
        Tool(
            name="moment_check",
            description="Truncated operator moment test (block) or local test on probe compressions (compression)",
            inputSchema={
                "type": "object",
                "properties": {
                    "document": {"description": "Sequence or operator-valued measure document"},
                    "region": {"description": "all | box:LO:HI[,LO:HI] | ball:R@C1[,C2] | region document"},
                    "order": {"type": "integer", "description": "Moment matrix order D (uses S_alpha for |alpha| <= 2D)"},
                    "mode": {"type": "string", "enum": ["block", "compression"], "default": "block"},
                    "probes": {
                        "type": "array",
                        "description": "Probe vectors for compression mode",
                        "items": {
                            "type": "object",
                            "properties": {
                                "re": {"type": "array", "items": {}},
                                "im": {"type": "array", "items": {}},
                            },
                            "required": ["re"],
                        },
                    },
                    "tol": {"type": "number", "description": "PSD tolerance (approx backend)"},
                    "backend": {"type": "string", "enum": ["exact", "approx"]},
                },
                "required": ["document"],
            },
        ),
    ]
    handlers = {
        "moment_check": _moment_check,
    }
    return tools, handlers


def load_sequence(source: Any, order: int | None, backend: Any = None) -> tuple[OperatorSequence, Any]:
    """(sequence, region hint); measures are converted to their moments of order 2 * order (default order 1)."""
    doc = load_document(source)
    backend = parse_backend(backend) if backend is not None else doc.scalar_backend
    if doc.kind == "sequence":
        return doc.sequence.to_domain(backend), None
    if doc.kind == "measure":
        mu = doc.measure.to_domain(backend)
        if not isinstance(mu, AtomicOperatorMeasure):
            raise DocumentError("moment tests need an operator-valued measure (weights, not Choi matrices)", field="measure.atoms")
        return sequence_from_measure(mu, 2 * (1 if order is None else order)), mu.support
    raise DocumentError(f"expected a sequence or measure document, got {doc.kind!r}", field="kind")


def parse_probes(probes: Any, backend: Backend) -> list[ComplexVector] | None:
    if probes is None:
        return None
    if isinstance(probes, str):
        probes = parse_probe_text(probes)
    out = []
    for p in probes:
        if isinstance(p, ComplexVector):
            out.append(p.to_backend(backend))
        elif isinstance(p, dict):
            out.append(ComplexVector.from_parts(p["re"], p.get("im"), backend))
        else:
            out.append(ComplexVector.from_parts(p, None, backend))
    return out


def run_moment_check(
    document: Any,
    region: Any = None,
    order: int | None = None,
    mode: str = "block",
    probes: Any = None,
    tol: float | None = None,
    backend: Any = None,
) -> dict[str, Any]:
    """The moment-check command: verdict with per-matrix detail."""
    doc = load_document(document)
    S, support = load_sequence(doc, order, backend)
    tol = document_tolerance(tol, doc, "psd")
    K = parse_region(region, S.nvars) if region is not None else (support or parse_region("all", S.nvars))
    D = S.order // 2 if order is None else order
    verdict = truncated_moment_test(S, K, D, mode, parse_probes(probes, S.backend), tol)
    return {
        "command": "moment-check",
        "region": K.describe(),
        "order": D,
        "backend": S.backend.value,
        "evidence": "certificate" if not verdict.passed else "necessary-condition",
        **verdict.to_dict(),
    }


async def _moment_check(args: dict[str, Any]) -> list[TextContent]:
    """Run a truncated moment test."""
    try:
        report = run_moment_check(
            args["document"],
            args.get("region"),
            args.get("order"),
            args.get("mode", "block"),
            args.get("probes"),
            args.get("tol"),
            args.get("backend"),
        )
    except (ValueError, KeyError) as e:
        return [TextContent(type="text", text=dumps_error(e))]
    return [TextContent(type="text", text=render_report(report))]
