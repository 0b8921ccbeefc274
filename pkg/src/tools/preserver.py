"""Preserver tools: preserve_check, borcea_check."""

from typing import Any

from mcp.types import Tool, TextContent

from ..config import settings
from ..models import ProblemDocument
from ..preserver import borcea_necessary_check, check_preserver_sampling
from ..reports import render_report
from .canon import load_operator
from .inputs import (
    document_tolerance,
    dumps_error,
    load_document,
    parse_backend,
    parse_grid,
    parse_region,
    parse_y_grid,
)

_COMMON = {
    "document": {"description": "Operator document, or mapMeasureFamily document together with max_deg"},
    "region": {"description": "all | box:LO:HI[,LO:HI] | ball:R@C1[,C2] | region document (default: the family's region or all-space)"},
    "max_deg": {"type": "integer", "description": "Truncation degree when building from a family"},
    "tol": {"type": "number", "description": "Tolerance for minimum eigenvalues"},
    "backend": {"type": "string", "enum": ["exact", "approx"]},
}


def get_tools() -> tuple[list[Tool], dict[str, callable]]:
    """Return tools and handlers for positivity-preserver checks."""
    tools = [
        Tool(
            name="preserve_check",
            description="Apply an operator to seeded positive polynomials on K and sample the results on a grid",
            inputSchema={
                "type": "object",
                "properties": {
                    **_COMMON,
                    "trials": {"type": "integer", "description": "Number of random positive inputs"},
                    "deg": {"type": "integer", "description": "Degree of the random inputs (default: operator degree)"},
                    "grid": {"type": "string", "description": "N or N@LO:HI[,LO:HI] (bounds required for all-space)"},
                    "seed": {"type": "integer"},
                },
                "required": ["document"],
            },
        ),
        Tool(
            name="borcea_check",
            description="Moment-side necessary check: (Q_alpha(A)(y)) on K - y for grid points y and PSD probe matrices A",
            inputSchema={
                "type": "object",
                "properties": {
                    **_COMMON,
                    "order": {"type": "integer", "description": "Moment order D (needs 2D <= operator degree)"},
                    "mode": {"type": "string", "enum": ["local", "block"], "default": "block"},
                    "y_grid": {"description": "N, or explicit points 'y1,y2;y1,y2' or [[y1, y2], ...]"},
                },
                "required": ["document"],
            },
        ),
    ]
    handlers = {
        "preserve_check": _preserve_check,
        "borcea_check": _borcea_check,
    }
    return tools, handlers


def _operator_and_region(document: Any, region: Any, max_deg: int | None, backend: Any):
    doc: ProblemDocument = load_document(document)
    T = load_operator(doc, backend, max_deg)
    if region is not None:
        K = parse_region(region, T.nvars)
    elif doc.kind == "mapMeasureFamily":
        K = doc.map_measure_family.region.to_domain()
    else:
        K = parse_region("all", T.nvars)
    return doc, T, K


def run_preserve_check(
    document: Any,
    region: Any = None,
    trials: int | None = None,
    deg: int | None = None,
    grid: Any = None,
    tol: float | None = None,
    seed: int | None = None,
    max_deg: int | None = None,
    backend: Any = None,
) -> dict[str, Any]:
    """The preserve-check command. For family documents T(p) is sampled on the admissible region."""
    doc, T, K = _operator_and_region(document, region, max_deg, backend)
    tol = document_tolerance(tol, doc, "sample")
    target = None
    if doc.kind == "mapMeasureFamily":
        target = doc.map_measure_family.to_domain(T.backend).admissible_region()
    report = check_preserver_sampling(T, K, trials, deg, parse_grid(grid), tol, seed, target)
    return {
        "command": "preserve-check",
        "region": K.describe(),
        "target": (target or K).describe(),
        "seed": settings.seed if seed is None else seed,
        **report.to_dict(),
    }


def run_borcea(
    document: Any,
    region: Any = None,
    y_grid: Any = None,
    order: int | None = None,
    mode: str = "block",
    tol: float | None = None,
    max_deg: int | None = None,
    backend: Any = None,
) -> dict[str, Any]:
    """The borcea command. For family documents the default y-grid lies in the admissible region."""
    doc, T, K = _operator_and_region(document, region, max_deg, backend)
    tol = document_tolerance(tol, doc, "psd")
    grid_region = K
    if doc.kind == "mapMeasureFamily" and region is None:
        grid_region = doc.map_measure_family.to_domain(T.backend).admissible_region()
    ys = parse_y_grid(y_grid, grid_region)
    report = borcea_necessary_check(T, K, ys, order, mode, tol=tol)
    return {
        "command": "borcea",
        "region": K.describe(),
        "backend": parse_backend(backend).value if backend is not None else T.backend.value,
        **report.to_dict(),
    }


async def _preserve_check(args: dict[str, Any]) -> list[TextContent]:
    """Sampled positivity-preservation check."""
    try:
        report = run_preserve_check(
            args["document"],
            args.get("region"),
            args.get("trials"),
            args.get("deg"),
            args.get("grid"),
            args.get("tol"),
            args.get("seed"),
            args.get("max_deg"),
            args.get("backend"),
        )
    except (ValueError, KeyError) as e:
        return [TextContent(type="text", text=dumps_error(e))]
    return [TextContent(type="text", text=render_report(report))]


async def _borcea_check(args: dict[str, Any]) -> list[TextContent]:
    """Moment-side necessary check."""
    try:
        report = run_borcea(
            args["document"],
            args.get("region"),
            args.get("y_grid"),
            args.get("order"),
            args.get("mode", "block"),
            args.get("tol"),
            args.get("max_deg"),
            args.get("backend"),
        )
    except (ValueError, KeyError) as e:
        return [TextContent(type="text", text=dumps_error(e))]
    return [TextContent(type="text", text=render_report(report))]
