"""JSON rendering of reports: sorted keys, rounded floats, byte-stable output."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

import numpy as np

from .config import settings


def _round(value: float, digits: int) -> float | str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    out = float(f"{value:.{digits}g}")
    return 0.0 if out == 0 else out


def normalize(obj: Any, digits: int | None = None) -> Any:
    """Plain JSON types: floats rounded to `digits` significant digits, Fractions as "p/q"."""
    digits = digits or settings.report_digits
    if isinstance(obj, dict):
        return {str(k): normalize(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v, digits) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj), digits)
    return obj


def render_report(report: dict[str, Any], digits: int | None = None) -> str:
    return json.dumps(normalize(report, digits), sort_keys=True, indent=2)


def exit_code(report: dict[str, Any]) -> int:
    """0 when the report passed, 1 for a failing verdict."""
    return 0 if report.get("passed", True) else 1


def summarize(report: dict[str, Any]) -> str:
    """Short human-readable digest of a report."""
    lines = []
    title = report.get("command") or report.get("demo") or "report"
    if "passed" in report:
        lines.append(f"{title}: {'PASS' if report['passed'] else 'FAIL'}")
    else:
        lines.append(title)
    for key in ("evidence", "mode", "order", "trials", "minEigenvalue", "worstPoint", "failingMatrix"):
        if key in report:
            lines.append(f"  {key}: {normalize(report[key])}")
    if "failure" in report:
        lines.append(f"  failure: {json.dumps(normalize(report['failure']), sort_keys=True)}")
    for item in report.get("assertions", []):
        lines.append(f"  [{'ok' if item['passed'] else 'FAILED'}] {item['name']}")
    for row in report.get("rows", []):
        lines.append(f"  {row['backend']:6} {row['map']:18} y={row['y']:>4}  {'holds' if row['holds'] else 'VIOLATED'}  y^m: {', '.join(row.get('yPowers', []))}")
    for entry in report.get("maps", []):
        lines.append(f"  Q{entry['exponents']}(E{entry['basisIndex'] + 1}) = {entry['text']}")
    return "\n".join(lines)
