"""Built-in demonstrations with self-checking assertions."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any, Callable

from .algebra import Backend, MultiIndex, hermitian_basis
from .algebra.scalars import format_number
from .errors import DemoError
from .linop import extract_canonical, shift_example_operator
from .matpoly import MatrixPolynomial
from .measures import ChoiMap
from .preserver import bisgaard_demo

logger = logging.getLogger(__name__)

SHIFT_POINTS = (Fraction(-2), Fraction(0), Fraction(1, 2), Fraction(3))
SHIFT_MAX_DEG = 4


def _shift_maps(backend: Backend) -> dict[str, ChoiMap]:
    maps = {
        "identity": ChoiMap.identity(2, backend),
        "depolarizing": ChoiMap.depolarizing(2, backend),
        "congruence": ChoiMap.congruence([[1, 0], [0, 2]], backend),
    }
    if backend is Backend.APPROX:
        maps["congruence-sqrt3"] = ChoiMap.congruence([[1.0, 0.0], [0.0, 3.0 ** 0.5]], backend)
    return maps


def _shift_holds(phi: ChoiMap, y: Fraction, max_deg: int) -> bool:
    """Q_m(E_i) is the constant y^m T~(E_i) for every m <= max_deg."""
    backend = phi.backend
    C = extract_canonical(shift_example_operator(phi, y, max_deg))
    yv = y if backend is Backend.EXACT else float(y)
    for m in range(max_deg + 1):
        for i, e in enumerate(hermitian_basis(2, backend)):
            expected = MatrixPolynomial.constant(phi.apply(e).scale(yv ** m), 1)
            got = C.q[(MultiIndex((m,)), i)]
            if backend is Backend.EXACT and got != expected:
                return False
            if backend is Backend.APPROX and not got.allclose(expected, atol=1e-9):
                return False
    return True


def shift_demo(max_deg: int = SHIFT_MAX_DEG) -> dict[str, Any]:
    """T(A x^k) = T~(A) (x + y)^k has Q_m = y^m T~ for each test map and shift."""
    rows = []
    for backend in (Backend.EXACT, Backend.APPROX):
        for name, phi in _shift_maps(backend).items():
            for y in SHIFT_POINTS:
                rows.append({
                    "map": name,
                    "backend": backend.value,
                    "y": format_number(y, Backend.EXACT),
                    "maxDeg": max_deg,
                    "yPowers": [format_number(y ** m, Backend.EXACT) for m in range(max_deg + 1)],
                    "holds": _shift_holds(phi, y, max_deg),
                })
    return {
        "demo": "shift",
        "rows": rows,
        "passed": all(r["holds"] for r in rows),
    }


DEMOS: dict[str, Callable[[], dict[str, Any]]] = {
    "bisgaard": bisgaard_demo,
    "shift": shift_demo,
}


def run_demo(name: str) -> dict[str, Any]:
    if name not in DEMOS:
        raise DemoError(f"Unknown demo {name!r}; choose one of {', '.join(sorted(DEMOS))}")
    logger.info(f"Running demo {name}")
    return DEMOS[name]()
