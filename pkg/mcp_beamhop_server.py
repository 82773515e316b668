#!/usr/bin/env python3
import asyncio
import json
import logging
from typing import Any

from mcp.server import NotificationOptions, Server
from mcp.server.models import InitializationOptions
from mcp.server.stdio import stdio_server
from mcp.types import (
    TextContent,
    Tool,
)

from beamhop_tools import TOOLS, call_tool
from config import runtime_config


# Configure logging
logging.basicConfig(
    level=getattr(logging, runtime_config.log_level.upper(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger("beamhop-mcp-server")

# Create MCP server
server = Server("beamhop-mcp-server")


@server.list_tools()
async def handle_list_tools() -> list[Tool]:
    """List available simulator tools."""
    return [Tool(name=t["name"], description=t["description"], inputSchema=t["inputSchema"]) for t in TOOLS]


@server.call_tool()
async def handle_call_tool(name: str, arguments: dict[str, Any]) -> list[TextContent]:
    """Handle tool calls."""
    try:
        if name == "run_experiment":
            # experiments are CPU bound
            result = await asyncio.to_thread(call_tool, name, arguments or {})
        else:
            result = call_tool(name, arguments or {})
        return [TextContent(type="text", text=json.dumps(result, indent=2))]

    except Exception as e:
        logger.error(f"Error in {name}: {e}")
        return [TextContent(type="text", text=f"Error: {str(e)}")]


def initialization_options() -> InitializationOptions:
    return InitializationOptions(
        server_name="beamhop-mcp-server",
        server_version="1.0.0",
        capabilities=server.get_capabilities(
            notification_options=NotificationOptions(),
            experimental_capabilities={},
        )
    )


async def main():
    """Main entry point for the MCP server."""
    logger.info("Starting beam hopping MCP server")

    async with stdio_server() as (read_stream, write_stream):
        await server.run(read_stream, write_stream, initialization_options())


if __name__ == "__main__":
    asyncio.run(main())
