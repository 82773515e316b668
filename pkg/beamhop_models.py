from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple


Vector3 = Tuple[float, float, float]


@dataclass(frozen=True)
class GeodeticPoint:
    """A point on (or above) the spherical earth"""
    latitude: float
    longitude: float
    altitude_above_surface: float = 0.0


@dataclass(frozen=True)
class WalkerConstellation:
    """Walker-delta constellation parameters (M satellites in P planes)"""
    total_satellites: int
    planes: int
    inclination: float
    altitude: float
    phasing_factor: int = 1

    @property
    def satellites_per_plane(self) -> int:
        return self.total_satellites // self.planes


@dataclass(frozen=True)
class SatelliteState:
    """Orbital state of one satellite at one instant.

    The orbital elements are kept next to the position so the state can be
    propagated along its circular orbit without re-deriving the plane.
    """
    satellite_id: int
    plane_index: int
    in_plane_index: int
    ecef_position: Vector3
    epoch_time: float
    raan_deg: float = 0.0
    inclination_deg: float = 0.0
    argument_of_latitude_deg: float = 0.0
    radius_km: float = 0.0


@dataclass(frozen=True)
class BandProfile:
    """Per-band radio constants"""
    name: str
    carrier_frequency_ghz: float
    bandwidth_mhz: float
    subcarrier_spacing_khz: float
    satellite_tx_gain_dbi: float
    ue_rx_gain_dbi: float
    ue_noise_figure_db: float
    ambient_temperature_k: float = 290.0

    @property
    def bandwidth_hz(self) -> float:
        return self.bandwidth_mhz * 1e6


@dataclass(frozen=True)
class ArrayGeometry:
    """Square uniform planar array"""
    elements_per_axis: int = 28
    element_spacing: float = 0.46


@dataclass
class LinkSample:
    """SINR breakdown for one UE in one slot (powers in mW, gain in dB)"""
    ue_id: int
    serving_satellite: int
    serving_beam: int
    channel_gain_db: float
    received_power_dbm: float
    intra_interference_mw: float
    inter_interference_mw: float
    noise_mw: float
    sinr: float


@dataclass
class Spotbeam:
    """Earth-fixed spotbeam owned by one satellite"""
    beam_id: int
    satellite_id: int
    center: GeodeticPoint
    diameter_km: float
    member_ues: Set[int] = field(default_factory=set)


@dataclass
class UeRecord:
    ue_id: int
    position: GeodeticPoint
    serving_satellite: Optional[int] = None
    serving_beam: Optional[int] = None
    band_profile_id: str = "ka"


@dataclass(frozen=True)
class BeamDemand:
    beam_id: int
    priority: int


@dataclass
class ScheduleDecision:
    """Illuminated beams (in selection order) and their power in W"""
    satellite_id: int
    slot: int
    illuminated: Tuple[int, ...] = ()
    power: Dict[int, float] = field(default_factory=dict)

    @property
    def total_power(self) -> float:
        return sum(self.power.values())


@dataclass
class Packet:
    packet_id: int
    ue_id: int
    size: int
    arrival_slot: int
    bits_remaining: int
    completion_slot: Optional[int] = None


@dataclass
class SlotClock:
    """Horizon T split into N slots of length δ; current_slot is 0 before the first slot"""
    horizon_s: float
    slot_length_s: float
    slot_count: int
    current_slot: int = 0


@dataclass
class MetricsReport:
    """Finalized metrics of one simulation run"""
    horizon_s: float
    satellite_throughput_bps: Dict[int, float]
    sinr_db: List[float]
    packet_lifetimes_s: List[float]
    incomplete_packets: int
    ue_satisfaction: Dict[int, float]
    system_satisfaction: float
    mean_illuminated_beams: Dict[int, float]
    arrived_bits: Dict[int, int]
    served_bits: Dict[int, int]
    backlog_bits: Dict[int, int]


@dataclass
class RunResult:
    """One (scheme, I_max, seed) run together with its scene summary"""
    scheme: str
    i_max: int
    seed: int
    band: str
    scene_hash: str
    covered_ues: int
    beam_count: int
    report: MetricsReport
