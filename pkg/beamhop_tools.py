"""Tool definitions shared by the MCP and HTTP front-ends"""
import logging
import math
from typing import Any, Dict, List

from config import BAND_PROFILES, build_config
from beamhop_errors import ConfigurationError
from beamhop_service import BeamHoppingService
from link import noise_power, path_loss_fspl
from orbits import slant_range_from_elevation


logger = logging.getLogger(__name__)


TOOLS: List[Dict[str, Any]] = [
    {
        "name": "path_loss",
        "description": "Free-space path loss in dB for a distance and carrier frequency",
        "inputSchema": {
            "type": "object",
            "properties": {
                "distance_km": {"type": "number", "description": "Slant distance in km"},
                "frequency_ghz": {"type": "number", "description": "Carrier frequency in GHz"}
            },
            "required": ["distance_km", "frequency_ghz"]
        }
    },
    {
        "name": "slant_range",
        "description": "Slant range from a ground UE to a satellite at a given elevation",
        "inputSchema": {
            "type": "object",
            "properties": {
                "elevation_deg": {"type": "number", "description": "Elevation angle in degrees"},
                "altitude_km": {"type": "number", "description": "Orbital altitude (default: 600)", "default": 600}
            },
            "required": ["elevation_deg"]
        }
    },
    {
        "name": "link_budget",
        "description": "Boresight link budget (gain, received power, noise, SNR) for a band and elevation",
        "inputSchema": {
            "type": "object",
            "properties": {
                "band": {"type": "string", "description": "s or ka"},
                "elevation_deg": {"type": "number", "description": "Elevation angle in degrees"},
                "altitude_km": {"type": "number", "description": "Orbital altitude (default: 600)", "default": 600},
                "beam_power_w": {"type": "number", "description": "Per-beam transmit power in W (default: 7.5)",
                                 "default": 7.5}
            },
            "required": ["band", "elevation_deg"]
        }
    },
    {
        "name": "run_experiment",
        "description": "Run a beam hopping experiment and return its summary (keys as in the config file)",
        "inputSchema": {
            "type": "object",
            "properties": {
                "config": {"type": "object", "description": "Experiment configuration overrides"}
            },
            "required": ["config"]
        }
    },
]


def link_budget(band: str, elevation_deg: float, altitude_km: float = 600.0, beam_power_w: float = 7.5) -> Dict[str, float]:
    if band not in BAND_PROFILES:
        raise ConfigurationError(f"must be one of {sorted(BAND_PROFILES)}", "band")
    profile = BAND_PROFILES[band]
    distance = slant_range_from_elevation(elevation_deg, altitude_km)
    loss = path_loss_fspl(distance, profile.carrier_frequency_ghz)
    gain = profile.satellite_tx_gain_dbi + profile.ue_rx_gain_dbi - loss
    received = 10.0 * math.log10(beam_power_w * 1000.0) + gain
    noise = 10.0 * math.log10(noise_power(profile))
    return {
        "slant_range_km": distance,
        "path_loss_db": loss,
        "channel_gain_db": gain,
        "received_power_dbm": received,
        "noise_power_dbm": noise,
        "snr_db": received - noise,
    }


def run_experiment(config_values: Dict[str, Any]) -> Dict[str, Any]:
    service = BeamHoppingService(build_config(config_values))
    results = service.run_experiment()
    return service.summarize(results)


def call_tool(name: str, arguments: Dict[str, Any]) -> Any:
    logger.info(f"Calling tool {name}")
    if name == "path_loss":
        return {"path_loss_db": path_loss_fspl(float(arguments.get("distance_km", 0)),
                                               float(arguments.get("frequency_ghz", 0)))}
    if name == "slant_range":
        return {"slant_range_km": slant_range_from_elevation(float(arguments.get("elevation_deg", 90)),
                                                             float(arguments.get("altitude_km", 600)))}
    if name == "link_budget":
        return link_budget(str(arguments.get("band", "")).lower(), float(arguments.get("elevation_deg", 90)),
                           float(arguments.get("altitude_km", 600)), float(arguments.get("beam_power_w", 7.5)))
    if name == "run_experiment":
        return run_experiment(arguments.get("config") or {})
    raise ValueError(f"Unknown tool: {name}")
