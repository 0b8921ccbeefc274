"""Command-line front end.

    python -m src canon operator.json --json
    python -m src moment-check seq.json --region box:0:1 --order 2
    python -m src preserve-check op.json --region box:-1:1 --trials 25
    python -m src borcea family.json --max-deg 4 --order 2 --mode block
    python -m src demo bisgaard

Exit codes: 0 pass, 1 failing verdict (a certificate), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import asyncio
import logging
import sys
from typing import Any, Callable, Sequence

from .config import settings
from .reports import exit_code, render_report, summarize
from .server import run_server
from .tools.canon import run_apply, run_canon
from .tools.demo import run_demo
from .tools.inputs import dumps_error
from .tools.moments import run_moment_check
from .tools.preserver import run_borcea, run_preserve_check

logger = logging.getLogger(__name__)

EXIT_ERROR = 2


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable JSON report on stdout")
    common.add_argument("--backend", choices=["exact", "approx"], help="scalar backend (default: document or OPMOMENT_BACKEND)")
    common.add_argument("--tol", type=float, help="PSD / sampling tolerance")
    common.add_argument("--seed", type=int, help="random seed (default: OPMOMENT_SEED)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="opmoment", description="Operator polynomials, operator moments and positivity preservers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("canon", parents=[common], help="canonical representation Q_beta(E_i) of an operator")
    p.add_argument("input")
    p.add_argument("--max-deg", type=int)

    p = sub.add_parser("apply", parents=[common], help="apply an operator to a polynomial")
    p.add_argument("input")
    p.add_argument("polynomial")
    p.add_argument("--canonical", action="store_true", help="apply through the canonical form")

    p = sub.add_parser("moment-check", parents=[common], help="truncated operator moment test")
    p.add_argument("input")
    p.add_argument("--region")
    p.add_argument("--order", type=int)
    p.add_argument("--mode", choices=["block", "local", "compression"], default="block")
    p.add_argument("--probes", help="probe vectors for the local test: re1,re2[@im1,im2];...")

    p = sub.add_parser("preserve-check", parents=[common], help="sampled positivity-preservation check")
    p.add_argument("input")
    p.add_argument("--region")
    p.add_argument("--trials", type=int)
    p.add_argument("--deg", type=int)
    p.add_argument("--grid")
    p.add_argument("--max-deg", type=int)

    p = sub.add_parser("borcea", parents=[common], help="moment-side necessary check on a y-grid")
    p.add_argument("input")
    p.add_argument("--region")
    p.add_argument("--grid", dest="y_grid", help="N or explicit points y1,y2;y1,y2")
    p.add_argument("--order", type=int)
    p.add_argument("--mode", choices=["local", "block"], default="block")
    p.add_argument("--max-deg", type=int)

    p = sub.add_parser("demo", parents=[common], help="self-checking demonstrations")
    p.add_argument("name")

    sub.add_parser("serve", help="run the tool server on stdio")
    return parser


def _dispatch(args: argparse.Namespace) -> dict[str, Any]:
    commands: dict[str, Callable[[], dict[str, Any]]] = {
        "canon": lambda: run_canon(args.input, args.max_deg, args.backend),
        "apply": lambda: run_apply(args.input, args.polynomial, args.canonical, args.backend),
        "moment-check": lambda: run_moment_check(
            args.input, args.region, args.order,
            "compression" if args.mode == "local" else args.mode,
            args.probes, args.tol, args.backend,
        ),
        "preserve-check": lambda: run_preserve_check(
            args.input, args.region, args.trials, args.deg, args.grid,
            args.tol, args.seed, args.max_deg, args.backend,
        ),
        "borcea": lambda: run_borcea(
            args.input, args.region, args.y_grid, args.order, args.mode,
            args.tol, args.max_deg, args.backend,
        ),
        "demo": lambda: run_demo(args.name),
    }
    return commands[args.command]()


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=settings.log_level, stream=sys.stderr)

    if args.command == "serve":
        asyncio.run(run_server())
        return 0

    logger.info(f"Running {args.command}")
    try:
        report = _dispatch(args)
    except (ValueError, OSError) as e:
        if args.json:
            print(dumps_error(e))
        else:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR

    print(render_report(report) if args.json else summarize(report))
    return exit_code(report)
