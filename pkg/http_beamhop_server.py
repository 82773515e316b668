#!/usr/bin/env python3
import json
import logging
from typing import Any, Dict

from fastapi import FastAPI, HTTPException, Query
import uvicorn

from beamhop_errors import ConfigurationError, DomainError
from beamhop_tools import TOOLS, call_tool, link_budget, run_experiment
from config import runtime_config
from link import path_loss_fspl
from orbits import EARTH_RADIUS_KM, orbital_period, slant_range_from_elevation


# Configure logging
logging.basicConfig(
    level=getattr(logging, runtime_config.log_level.upper(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger("beamhop-http-server")

# Create FastAPI app
app = FastAPI(
    title="Beam Hopping Simulator HTTP Server",
    description="HTTP wrapper for the LEO beam hopping simulator and link calculators",
    version="1.0.0"
)


@app.get("/api/beamhop/link/path-loss")
def get_path_loss(distance_km: float = Query(), frequency_ghz: float = Query()):
    """Free-space path loss"""
    try:
        return {"distance_km": distance_km, "frequency_ghz": frequency_ghz,
                "path_loss_db": path_loss_fspl(distance_km, frequency_ghz)}
    except DomainError as e:
        raise HTTPException(status_code=422, detail=str(e))


@app.get("/api/beamhop/orbit/slant-range")
def get_slant_range(elevation_deg: float = Query(), altitude_km: float = Query(default=600.0)):
    """Slant range and orbital period for a circular orbit"""
    try:
        return {
            "elevation_deg": elevation_deg,
            "altitude_km": altitude_km,
            "slant_range_km": slant_range_from_elevation(elevation_deg, altitude_km),
            "orbital_period_s": orbital_period(EARTH_RADIUS_KM + altitude_km),
        }
    except DomainError as e:
        raise HTTPException(status_code=422, detail=str(e))


@app.get("/api/beamhop/link/budget")
def get_link_budget(
    band: str = Query(default="ka"),
    elevation_deg: float = Query(default=90.0),
    altitude_km: float = Query(default=600.0),
    beam_power_w: float = Query(default=7.5)
):
    """Boresight link budget for a band profile"""
    try:
        logger.info(f"Link budget for {band} band at {elevation_deg} deg elevation")
        return link_budget(band.lower(), elevation_deg, altitude_km, beam_power_w)
    except (ConfigurationError, DomainError) as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Error computing link budget: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/api/beamhop/experiments")
def post_experiment(config: Dict[str, Any]):
    """Run an experiment synchronously and return its summary"""
    try:
        logger.info(f"Running experiment with {len(config)} configured key(s)")
        return run_experiment(config)
    except ConfigurationError as e:
        logger.error(f"Rejected experiment config: {e}")
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Error running experiment: {e}")
        raise HTTPException(status_code=500, detail=str(e))


# MCP Protocol endpoints
@app.post("/")
def mcp_rpc_endpoint(request: dict):
    """Main MCP JSON-RPC endpoint"""
    request_id = request.get("id")
    try:
        method = request.get("method")
        params = request.get("params", {})

        if method == "initialize":
            return {
                "jsonrpc": "2.0",
                "id": request_id,
                "result": {
                    "protocolVersion": "2024-11-05",
                    "capabilities": {
                        "tools": {},
                        "logging": {}
                    },
                    "serverInfo": {
                        "name": "beamhop-http-server",
                        "version": "1.0.0"
                    }
                }
            }

        elif method == "tools/list":
            return {"jsonrpc": "2.0", "id": request_id, "result": {"tools": TOOLS}}

        elif method == "tools/call":
            tool_name = params.get("name")
            if tool_name not in {tool["name"] for tool in TOOLS}:
                return {
                    "jsonrpc": "2.0",
                    "id": request_id,
                    "error": {
                        "code": -32601,
                        "message": f"Unknown tool: {tool_name}"
                    }
                }
            result = call_tool(tool_name, params.get("arguments", {}))
            return {
                "jsonrpc": "2.0",
                "id": request_id,
                "result": {
                    "content": [
                        {
                            "type": "text",
                            "text": json.dumps(result, indent=2)
                        }
                    ]
                }
            }

        else:
            return {
                "jsonrpc": "2.0",
                "id": request_id,
                "error": {
                    "code": -32601,
                    "message": f"Method not found: {method}"
                }
            }

    except ConfigurationError as e:
        logger.error(f"Invalid params in MCP RPC: {e}")
        return {"jsonrpc": "2.0", "id": request_id, "error": {"code": -32602, "message": str(e)}}
    except Exception as e:
        logger.error(f"Error in MCP RPC: {e}")
        return {
            "jsonrpc": "2.0",
            "id": request_id,
            "error": {
                "code": -32603,
                "message": f"Internal error: {str(e)}"
            }
        }


@app.get("/health")
def health_check():
    """Health check endpoint"""
    return {"status": "healthy", "service": "beamhop-http-server"}


if __name__ == "__main__":
    logger.info(f"Starting beam hopping HTTP server on port {runtime_config.http_port}")
    uvicorn.run(app, host=runtime_config.http_host, port=runtime_config.http_port)
