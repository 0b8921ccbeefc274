"""MCP tool server over stdio."""

import asyncio
import json
import logging
import sys
from typing import Any

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import Tool, TextContent

from .config import settings

logger = logging.getLogger(__name__)

# Create MCP server
mcp_server = Server("opmoment")

# Tool registry - populated by register_tools()
_all_tools: list[Tool] = []
_tool_handlers: dict[str, callable] = {}


def register_tools():
    """Register all MCP tools by collecting from all modules."""
    from .tools import canon
    from .tools import moments
    from .tools import preserver
    from .tools import demo

    if _all_tools:
        return

    modules = [
        canon,
        moments,
        preserver,
        demo,
    ]

    for module in modules:
        tools, handlers = module.get_tools()
        _all_tools.extend(tools)
        _tool_handlers.update(handlers)

    logger.info(f"Registered {len(_all_tools)} tools")


@mcp_server.list_tools()
async def list_tools() -> list[Tool]:
    """List all available tools."""
    return _all_tools


@mcp_server.call_tool()
async def call_tool(name: str, arguments: dict[str, Any]) -> list[TextContent]:
    """Route tool calls to the appropriate handler."""
    handler = _tool_handlers.get(name)
    if handler:
        return await handler(arguments)
    return [TextContent(type="text", text=json.dumps({"error": f"Unknown tool: {name}"}))]


async def run_server():
    """Run the MCP server via stdio."""
    register_tools()
    async with stdio_server() as (read_stream, write_stream):
        await mcp_server.run(
            read_stream,
            write_stream,
            mcp_server.create_initialization_options()
        )


def main():
    """Entry point."""
    logging.basicConfig(level=settings.log_level, stream=sys.stderr)
    asyncio.run(run_server())


if __name__ == "__main__":
    main()
