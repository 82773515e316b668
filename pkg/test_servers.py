#!/usr/bin/env python3
"""
Tests for the HTTP and MCP front-ends
"""
import asyncio
import json
import math
import sys

from fastapi.testclient import TestClient

from beamhop_tools import TOOLS
from http_beamhop_server import app
from mcp_beamhop_server import handle_call_tool, handle_list_tools, initialization_options


client = TestClient(app)


def _rpc(method, params=None, request_id=1):
    response = client.post("/", json={"jsonrpc": "2.0", "id": request_id, "method": method, "params": params or {}})
    assert response.status_code == 200
    body = response.json()
    assert body["id"] == request_id
    return body


def test_health():
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy", "service": "beamhop-http-server"}


def test_calculator_routes():
    loss = client.get("/api/beamhop/link/path-loss", params={"distance_km": 600, "frequency_ghz": 20})
    assert loss.status_code == 200
    assert math.isclose(loss.json()["path_loss_db"], 174.03, abs_tol=0.01)

    slant = client.get("/api/beamhop/orbit/slant-range", params={"elevation_deg": 30})
    assert slant.status_code == 200
    assert math.isclose(slant.json()["slant_range_km"], 1075.1, abs_tol=0.1)
    assert 5790.0 < slant.json()["orbital_period_s"] < 5795.0

    budget = client.get("/api/beamhop/link/budget", params={"band": "ka", "elevation_deg": 90})
    assert budget.status_code == 200
    assert math.isclose(budget.json()["channel_gain_db"], -103.83, abs_tol=0.01)


def test_calculator_routes_reject_bad_input():
    assert client.get("/api/beamhop/link/path-loss", params={"distance_km": -1, "frequency_ghz": 20}).status_code == 422
    assert client.get("/api/beamhop/link/budget", params={"band": "x"}).status_code == 422
    response = client.post("/api/beamhop/experiments", json={"D_km": -1})
    assert response.status_code == 422
    assert "D_km" in response.json()["detail"]


def test_rpc_initialize_and_list():
    init = _rpc("initialize")
    assert init["result"]["serverInfo"]["name"] == "beamhop-http-server"

    listed = _rpc("tools/list", request_id=2)
    assert [t["name"] for t in listed["result"]["tools"]] == [t["name"] for t in TOOLS]


def test_rpc_tool_call_round_trip():
    body = _rpc("tools/call", {"name": "link_budget", "arguments": {"band": "s", "elevation_deg": 90}}, request_id=3)
    content = body["result"]["content"]
    assert content[0]["type"] == "text"
    budget = json.loads(content[0]["text"])
    assert math.isclose(budget["channel_gain_db"], -130.03, abs_tol=0.01)


def test_rpc_errors():
    assert _rpc("resources/list")["error"]["code"] == -32601
    assert _rpc("tools/call", {"name": "nope", "arguments": {}})["error"]["code"] == -32601
    invalid = _rpc("tools/call", {"name": "link_budget", "arguments": {"band": "x", "elevation_deg": 10}})
    assert invalid["error"]["code"] == -32602
    assert "band" in invalid["error"]["message"]


def test_mcp_initialization_options():
    options = initialization_options()
    assert options.server_name == "beamhop-mcp-server"
    assert options.capabilities.tools is not None


def test_mcp_list_tools():
    tools = asyncio.run(handle_list_tools())
    assert [t.name for t in tools] == [t["name"] for t in TOOLS]
    assert all(t.inputSchema["type"] == "object" for t in tools)


def test_mcp_call_tool():
    content = asyncio.run(handle_call_tool("path_loss", {"distance_km": 600, "frequency_ghz": 2}))
    assert len(content) == 1
    assert math.isclose(json.loads(content[0].text)["path_loss_db"], 154.03, abs_tol=0.01)

    failed = asyncio.run(handle_call_tool("unknown_tool", {}))
    assert failed[0].text.startswith("Error: Unknown tool")


def main():
    print("🧪 HTTP and MCP Front-end Test Suite")
    print("=" * 60)

    tests = [obj for name, obj in sorted(globals().items()) if name.startswith("test_") and callable(obj)]
    failed = 0
    for test in tests:
        try:
            test()
            print(f"✅ {test.__name__}")
        except AssertionError as e:
            failed += 1
            print(f"❌ {test.__name__}: {e}")

    print(f"\n{len(tests) - failed}/{len(tests)} front-end tests passed")
    return failed


if __name__ == "__main__":
    sys.exit(1 if main() else 0)
