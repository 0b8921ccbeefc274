"""Demo tools: run_demo."""

from typing import Any

from mcp.types import Tool, TextContent

from ..demos import DEMOS, run_demo
from ..reports import render_report
from .inputs import dumps_error


def get_tools() -> tuple[list[Tool], dict[str, callable]]:
    """Return tools and handlers for the built-in demonstrations."""
    tools = [
        Tool(
            name="run_demo",
            description="Run a self-checking demonstration (bisgaard: local but not block moment preserver; shift: Q_m = y^m T~)",
            inputSchema={
                "type": "object",
                "properties": {
                    "name": {"type": "string", "enum": sorted(DEMOS), "description": "Demo name"},
                },
                "required": ["name"],
            },
        ),
    ]
    handlers = {
        "run_demo": _run_demo,
    }
    return tools, handlers


async def _run_demo(args: dict[str, Any]) -> list[TextContent]:
    """Run a demo by name."""
    try:
        report = run_demo(args["name"])
    except (ValueError, KeyError) as e:
        return [TextContent(type="text", text=dumps_error(e))]
    return [TextContent(type="text", text=render_report(report))]
