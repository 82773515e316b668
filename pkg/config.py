import json
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Mapping, Optional, Tuple

from dotenv import load_dotenv

from beamhop_errors import ConfigurationError
from beamhop_models import ArrayGeometry, BandProfile, WalkerConstellation

# Load environment variables from .env file
load_dotenv()

ENV_PREFIX = "BEAMHOP_"

SCHEDULERS = ("distance_limit", "no_limit", "round_robin")
TRAFFIC_MODELS = ("full_buffer", "ftp3")

BAND_PROFILES: Dict[str, BandProfile] = {
    # handheld UE, omni antenna
    "s": BandProfile(
        name="s",
        carrier_frequency_ghz=2.0,
        bandwidth_mhz=30.0,
        subcarrier_spacing_khz=15.0,
        satellite_tx_gain_dbi=24.0,
        ue_rx_gain_dbi=0.0,
        ue_noise_figure_db=7.0,
    ),
    # VSAT UE, 60 cm aperture
    "ka": BandProfile(
        name="ka",
        carrier_frequency_ghz=20.0,
        bandwidth_mhz=200.0,
        subcarrier_spacing_khz=120.0,
        satellite_tx_gain_dbi=30.5,
        ue_rx_gain_dbi=39.7,
        ue_noise_figure_db=1.2,
    ),
}

FULL_PACKET_BYTES = 500_000
S_BAND_FTP_PACKET_BYTES = 50_000


@dataclass
class RuntimeConfig:
    """Process-level settings shared by the CLI and the servers"""
    log_level: str = os.getenv("BEAMHOP_LOG_LEVEL", "INFO")
    http_host: str = os.getenv("BEAMHOP_HTTP_HOST", "0.0.0.0")
    http_port: int = int(os.getenv("BEAMHOP_HTTP_PORT", "8091"))


@dataclass(frozen=True)
class ExperimentConfig:
    band: str = "ka"

    # constellation
    total_satellites: int = 2400
    planes: int = 60
    inclination_deg: float = 55.0
    altitude_km: float = 600.0
    phasing_factor: int = 1
    epoch_s: float = 0.0
    serving_satellites: int = 4
    min_elevation_deg: float = 10.0
    propagate_satellites: bool = False

    # region and UE drop
    lon_min: float = 103.0
    lon_max: float = 113.0
    lat_min: float = 28.0
    lat_max: float = 33.0
    ue_count: int = 1000
    scene_file: Optional[str] = None

    # beams and scheduling
    max_beams: int = 100
    beam_diameter_km: float = 42.0
    distance_limit_km: float = 42.0
    i_max: int = 40
    i_max_sweep: Tuple[int, ...] = ()
    p_max_w: float = 300.0
    scheduler: Tuple[str, ...] = ("distance_limit",)

    # antenna
    array_elements: int = 28
    element_spacing: float = 0.46
    noise_figure_db: Optional[float] = None

    # traffic
    traffic: str = "full_buffer"
    packet_size_bytes: Optional[int] = None
    arrival_rate: float = 8.0

    # time and PHY abstraction
    slot_length_s: float = 0.001
    horizon_s: float = 1.0
    efficiency: float = 0.75
    se_cap: float = 7.4

    # run control
    seed: Tuple[int, ...] = (0,)
    output_dir: str = "results"
    workers: int = 1

    @property
    def constellation(self) -> WalkerConstellation:
        return WalkerConstellation(
            total_satellites=self.total_satellites,
            planes=self.planes,
            inclination=self.inclination_deg,
            altitude=self.altitude_km,
            phasing_factor=self.phasing_factor,
        )

    @property
    def band_profile(self) -> BandProfile:
        profile = BAND_PROFILES[self.band]
        if self.noise_figure_db is not None:
            profile = replace(profile, ue_noise_figure_db=self.noise_figure_db)
        return profile

    @property
    def array_geometry(self) -> ArrayGeometry:
        return ArrayGeometry(self.array_elements, self.element_spacing)

    @property
    def packet_size_bits(self) -> int:
        return int(self.packet_size_bytes) * 8

    @property
    def slot_count(self) -> int:
        return int(round(self.horizon_s / self.slot_length_s))

    @property
    def i_max_values(self) -> Tuple[int, ...]:
        return self.i_max_sweep or (self.i_max,)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize to the config-file key set (a manifest is a valid config file)"""
        data = asdict(self)
        for key in ("i_max_sweep", "scheduler", "seed"):
            data[key] = list(data[key])
        return data


# short spellings accepted in config files
KEY_ALIASES = {
    "K": "max_beams",
    "diameter_km": "beam_diameter_km",
    "D_km": "distance_limit_km",
    "I_max": "i_max",
    "P_max_W": "p_max_w",
    "T": "horizon_s",
    "delta_s": "slot_length_s",
}

ENV_OVERRIDES = {
    "SCHEDULER": "scheduler",
    "SEED": "seed",
    "OUTPUT_DIR": "output_dir",
    "WORKERS": "workers",
    "I_MAX_SWEEP": "i_max_sweep",
}

_FIELD_NAMES = {f.name for f in fields(ExperimentConfig)}

_INT_KEYS = {
    "total_satellites", "planes", "phasing_factor", "serving_satellites", "ue_count",
    "max_beams", "i_max", "array_elements", "packet_size_bytes", "workers",
}
_FLOAT_KEYS = {
    "inclination_deg", "altitude_km", "epoch_s", "min_elevation_deg", "lon_min", "lon_max",
    "lat_min", "lat_max", "beam_diameter_km", "distance_limit_km", "p_max_w",
    "element_spacing", "noise_figure_db", "arrival_rate", "slot_length_s", "horizon_s",
    "efficiency", "se_cap",
}


def _as_int(value: Any, key: str) -> int:
    if isinstance(value, bool):
        raise ConfigurationError(f"expected an integer, got {value!r}", key)
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            raise ConfigurationError(f"expected an integer, got {value!r}", key)
    if not isinstance(value, int):
        raise ConfigurationError(f"expected an integer, got {value!r}", key)
    return value


def _as_float(value: Any, key: str) -> float:
    if isinstance(value, bool):
        raise ConfigurationError(f"expected a number, got {value!r}", key)
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"expected a number, got {value!r}", key)


def _as_list(value: Any) -> list:
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _coerce(name: str, value: Any, key: str) -> Any:
    if value is None and name in ("noise_figure_db", "packet_size_bytes", "scene_file"):
        return None
    if name in _INT_KEYS:
        return _as_int(value, key)
    if name in _FLOAT_KEYS:
        return _as_float(value, key)
    if name == "propagate_satellites":
        if isinstance(value, str):
            return value.strip().lower() in ("1", "true", "yes")
        if not isinstance(value, bool):
            raise ConfigurationError(f"expected a boolean, got {value!r}", key)
        return value
    if name == "scheduler":
        return tuple(str(v).strip() for v in _as_list(value))
    if name == "seed":
        return tuple(_as_int(v, key) for v in _as_list(value))
    if name == "i_max_sweep":
        return tuple(_as_int(v, key) for v in _as_list(value))
    if name in ("band", "traffic"):
        return str(value).strip().lower()
    return str(value)


def _validate(config: ExperimentConfig, keys: Mapping[str, str]) -> None:
    def check(condition: bool, name: str, message: str) -> None:
        if not condition:
            raise ConfigurationError(message, keys.get(name, name))

    check(config.band in BAND_PROFILES, "band", f"must be one of {sorted(BAND_PROFILES)}")
    check(config.planes > 0, "planes", "must be positive")
    check(config.total_satellites > 0, "total_satellites", "must be positive")
    check(config.total_satellites % max(config.planes, 1) == 0, "total_satellites",
          f"{config.total_satellites} satellites are not divisible into {config.planes} planes")
    check(0.0 <= config.inclination_deg <= 180.0, "inclination_deg", "must lie in [0, 180]")
    check(config.altitude_km > 0, "altitude_km", "must be positive")
    check(config.phasing_factor >= 0, "phasing_factor", "must be non-negative")
    check(config.serving_satellites >= 1, "serving_satellites", "must be at least 1")
    check(0.0 <= config.min_elevation_deg < 90.0, "min_elevation_deg", "must lie in [0, 90)")
    check(-180.0 <= config.lon_min < config.lon_max <= 180.0, "lon_min",
          "region longitudes must satisfy -180 <= lon_min < lon_max <= 180")
    check(-90.0 <= config.lat_min < config.lat_max <= 90.0, "lat_min",
          "region latitudes must satisfy -90 <= lat_min < lat_max <= 90")
    check(config.ue_count >= 0, "ue_count", "must be non-negative")
    check(config.max_beams >= 0, "max_beams", "must be non-negative")
    check(config.beam_diameter_km > 0, "beam_diameter_km", "must be positive")
    check(config.distance_limit_km >= 0, "distance_limit_km", "must be non-negative")
    check(config.i_max >= 1, "i_max", "must be at least 1")
    check(all(v >= 1 for v in config.i_max_sweep), "i_max_sweep", "every entry must be at least 1")
    check(config.p_max_w > 0, "p_max_w", "must be positive")
    check(len(config.scheduler) > 0, "scheduler", "at least one scheduler is required")
    for name in config.scheduler:
        check(name in SCHEDULERS, "scheduler", f"unknown scheduler {name!r}, expected one of {list(SCHEDULERS)}")
    check(config.array_elements >= 1, "array_elements", "must be at least 1")
    check(config.element_spacing > 0, "element_spacing", "must be positive")
    check(config.traffic in TRAFFIC_MODELS, "traffic", f"must be one of {list(TRAFFIC_MODELS)}")
    check(config.packet_size_bytes is not None and config.packet_size_bytes > 0,
          "packet_size_bytes", "must be positive")
    check(config.arrival_rate >= 0, "arrival_rate", "must be non-negative")
    check(config.slot_length_s > 0, "slot_length_s", "must be positive")
    check(config.horizon_s > 0, "horizon_s", "must be positive")
    if config.slot_length_s > 0 and config.horizon_s > 0:
        check(config.slot_count >= 1 and
              abs(config.slot_count * config.slot_length_s - config.horizon_s) <= 1e-9 * config.horizon_s,
              "horizon_s", "must be a whole number of slots")
    check(0.0 < config.efficiency <= 1.0, "efficiency", "must lie in (0, 1]")
    check(config.se_cap > 0, "se_cap", "must be positive")
    check(len(config.seed) > 0, "seed", "at least one seed is required")
    check(all(s >= 0 for s in config.seed), "seed", "seeds must be non-negative")
    check(config.workers >= 1, "workers", "must be at least 1")


def build_config(values: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
    """Resolve raw key/value pairs into a validated ExperimentConfig.

    Precedence is overrides (CLI) > BEAMHOP_* environment > values (file) > defaults.
    """
    resolved: Dict[str, Any] = {}
    keys: Dict[str, str] = {}

    def put(raw_key: str, value: Any) -> None:
        name = KEY_ALIASES.get(raw_key, raw_key)
        if name not in _FIELD_NAMES:
            raise ConfigurationError("unknown configuration key", raw_key)
        resolved[name] = _coerce(name, value, raw_key)
        keys[name] = raw_key

    for raw_key, value in values.items():
        put(raw_key, value)

    for suffix, name in ENV_OVERRIDES.items():
        env_value = os.getenv(f"{ENV_PREFIX}{suffix}")
        if env_value:
            put(name, env_value)

    for raw_key, value in (overrides or {}).items():
        if value is not None:
            put(raw_key, value)

    if resolved.get("packet_size_bytes") is None:
        band = resolved.get("band", ExperimentConfig.band)
        traffic = resolved.get("traffic", ExperimentConfig.traffic)
        resolved["packet_size_bytes"] = (
            S_BAND_FTP_PACKET_BYTES if band == "s" and traffic == "ftp3" else FULL_PACKET_BYTES
        )

    config = ExperimentConfig(**resolved)
    _validate(config, keys)
    return config


def parse_config(path: str, overrides: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
    """Load a JSON experiment file and return the validated config"""
    if not os.path.exists(path):
        raise ConfigurationError(f"configuration file not found: {path}")
    try:
        with open(path, "r") as f:
            values = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"malformed JSON in {path} at line {e.lineno}: {e.msg}")
    if not isinstance(values, dict):
        raise ConfigurationError(f"{path} must contain a JSON object")
    return build_config(values, overrides)


# Create a single instance to import elsewhere
runtime_config = RuntimeConfig()
