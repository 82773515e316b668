"""Radio-link math: planar-array beam gain, free-space path loss, channel
gain, noise power and SINR with intra-/inter-satellite interference.

All dB <-> linear conversions are base 10; interference is summed in mW.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np

from beamhop_errors import DomainError, StateError
from beamhop_models import (
    ArrayGeometry,
    BandProfile,
    GeodeticPoint,
    LinkSample,
    SatelliteState,
    ScheduleDecision,
    Spotbeam,
    UeRecord,
)
from orbits import geodetic_to_ecef, points_to_ecef


logger = logging.getLogger(__name__)

PATTERN_FLOOR_DB = -60.0
THERMAL_NOISE_DBM_HZ = -174.0
REFERENCE_TEMPERATURE_K = 290.0
FSPL_CONSTANT_DB = 92.45


def db_to_linear(value_db):
    return np.power(10.0, np.asarray(value_db) / 10.0)


def linear_to_db(value):
    return 10.0 * np.log10(value)


def watts_to_mw(watts: float) -> float:
    return watts * 1000.0


def _axis_factor(n: int, spacing: float, cosine: np.ndarray) -> np.ndarray:
    """|sum_a exp(j 2pi d a c)|^2 / N^2 in closed (Dirichlet) form"""
    x = math.pi * spacing * cosine
    numerator = np.sin(n * x)
    denominator = n * np.sin(x)
    near_peak = np.abs(denominator) < 1e-12
    ratio = np.where(near_peak, 1.0, numerator / np.where(near_peak, 1.0, denominator))
    return ratio ** 2


def array_factor_uv(geometry: ArrayGeometry, u, v) -> np.ndarray:
    """Normalized array factor in dB for direction-cosine offsets (u, v), floored"""
    n = geometry.elements_per_axis
    af = _axis_factor(n, geometry.element_spacing, np.asarray(u, dtype=float)) * \
        _axis_factor(n, geometry.element_spacing, np.asarray(v, dtype=float))
    floor = 10.0 ** (PATTERN_FLOOR_DB / 10.0)
    return 10.0 * np.log10(np.maximum(af, floor))


def array_factor_gain(geometry: ArrayGeometry, theta: float, phi: float) -> float:
    """Relative beam gain (dB, <= 0) at off-boresight angle theta and azimuth phi, degrees"""
    if not 0.0 <= theta <= 90.0:
        raise DomainError(f"off-boresight angle must lie in [0, 90] degrees, got {theta}")
    t = math.radians(theta)
    p = math.radians(phi)
    return float(array_factor_uv(geometry, math.sin(t) * math.cos(p), math.sin(t) * math.sin(p)))


def path_loss_fspl(distance: float, frequency: float) -> float:
    """Free-space path loss in dB for distance in km and frequency in GHz"""
    if distance <= 0 or frequency <= 0:
        raise DomainError(f"path loss needs positive distance and frequency, got {distance} km, {frequency} GHz")
    return FSPL_CONSTANT_DB + 20.0 * math.log10(distance) + 20.0 * math.log10(frequency)


def noise_power(band: BandProfile) -> float:
    """Thermal noise over the band plus noise figure, in mW"""
    noise_dbm = (THERMAL_NOISE_DBM_HZ
                 + 10.0 * math.log10(band.ambient_temperature_k / REFERENCE_TEMPERATURE_K)
                 + 10.0 * math.log10(band.bandwidth_hz)
                 + band.ue_noise_figure_db)
    return 10.0 ** (noise_dbm / 10.0)


def antenna_frame(sat_position: Sequence[float]) -> np.ndarray:
    """Rows x, y, z of the satellite antenna frame; z points at nadir"""
    r = np.asarray(sat_position, dtype=float)
    z = -r / np.linalg.norm(r)
    x = np.cross(np.array([0.0, 0.0, 1.0]), z)
    if np.linalg.norm(x) < 1e-9:
        # over a pole
        x = np.array([1.0, 0.0, 0.0]) - z[0] * z
    x /= np.linalg.norm(x)
    y = np.cross(z, x)
    return np.vstack((x, y, z))


def direction_cosines(sat_position: Sequence[float], targets: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(u, v) of each target in the antenna frame plus slant distances in km"""
    frame = antenna_frame(sat_position)
    los = np.atleast_2d(targets) - np.asarray(sat_position, dtype=float)
    distance = np.linalg.norm(los, axis=1)
    unit = los / distance[:, None]
    return unit @ frame[0], unit @ frame[1], distance


def channel_gain(beam_center: GeodeticPoint, ue: GeodeticPoint, sat: SatelliteState,
                 band: BandProfile, geometry: ArrayGeometry) -> float:
    """h = G_t(theta, phi) + G_T + G_R - PL(d), dB"""
    u, v, distance = direction_cosines(
        sat.ecef_position, np.vstack((geodetic_to_ecef(ue), geodetic_to_ecef(beam_center))))
    pattern = float(array_factor_uv(geometry, u[0] - u[1], v[0] - v[1]))
    return (pattern + band.satellite_tx_gain_dbi + band.ue_rx_gain_dbi
            - path_loss_fspl(float(distance[0]), band.carrier_frequency_ghz))


def gain_matrix(ue_positions: Sequence[GeodeticPoint], satellites: Sequence[SatelliteState],
                beam_owner: np.ndarray, beam_centers: Sequence[GeodeticPoint],
                band: BandProfile, geometry: ArrayGeometry) -> np.ndarray:
    """Channel gains in dB for every (UE, beam) pair, shape (J, B).

    beam_owner[b] is the index into `satellites` of the satellite owning beam b.
    """
    ue_ecef = points_to_ecef(ue_positions)
    beam_ecef = points_to_ecef(beam_centers)
    gains = np.full((len(ue_positions), len(beam_centers)), -np.inf)
    if len(ue_positions) == 0 or len(beam_centers) == 0:
        return gains

    fixed = band.satellite_tx_gain_dbi + band.ue_rx_gain_dbi
    for index, sat in enumerate(satellites):
        cols = np.flatnonzero(beam_owner == index)
        if cols.size == 0:
            continue
        ue_u, ue_v, distance = direction_cosines(sat.ecef_position, ue_ecef)
        beam_u, beam_v, _ = direction_cosines(sat.ecef_position, beam_ecef[cols])
        pattern = array_factor_uv(geometry, ue_u[:, None] - beam_u[None, :], ue_v[:, None] - beam_v[None, :])
        loss = FSPL_CONSTANT_DB + 20.0 * np.log10(distance) + 20.0 * math.log10(band.carrier_frequency_ghz)
        gains[:, cols] = pattern + fixed - loss[:, None]
    return gains


def compute_sinr(ue: UeRecord, decisions: Mapping[int, ScheduleDecision],
                 satellites: Mapping[int, SatelliteState], beams: Mapping[Tuple[int, int], Spotbeam],
                 band: BandProfile, geometry: ArrayGeometry) -> LinkSample:
    """SINR of one UE against every satellite's decision, term by term"""
    if ue.serving_satellite is None or ue.serving_beam is None:
        raise StateError(f"UE {ue.ue_id} has no serving satellite/beam")

    m, k = ue.serving_satellite, ue.serving_beam
    noise = noise_power(band)
    signal = 0.0
    intra = 0.0
    inter = 0.0
    for sat_id, decision in decisions.items():
        sat = satellites[sat_id]
        for beam_id in decision.illuminated:
            gain_db = channel_gain(beams[(sat_id, beam_id)].center, ue.position, sat, band, geometry)
            received = watts_to_mw(decision.power[beam_id]) * 10.0 ** (gain_db / 10.0)
            if sat_id != m:
                inter += received
            elif beam_id == k:
                signal = received
            else:
                intra += received

    serving_gain = channel_gain(beams[(m, k)].center, ue.position, satellites[m], band, geometry)
    received_dbm = 10.0 * math.log10(signal) if signal > 0 else -math.inf
    return LinkSample(
        ue_id=ue.ue_id,
        serving_satellite=m,
        serving_beam=k,
        channel_gain_db=serving_gain,
        received_power_dbm=received_dbm,
        intra_interference_mw=intra,
        inter_interference_mw=inter,
        noise_mw=noise,
        sinr=signal / (noise + intra + inter),
    )


@dataclass
class SinrBatch:
    signal_mw: np.ndarray
    intra_mw: np.ndarray
    inter_mw: np.ndarray
    sinr: np.ndarray


def sinr_batch(gains_linear: np.ndarray, power_mw: np.ndarray, serving_col: np.ndarray,
               own_cols: Mapping[int, np.ndarray], ue_owner: np.ndarray, noise_mw: float) -> SinrBatch:
    """Vectorized SINR for the UEs given as rows of gains_linear.

    power_mw is zero for dimmed beams; own_cols maps a satellite index to its
    beam columns and ue_owner[j] is the serving satellite index of row j.
    """
    rows = np.arange(gains_linear.shape[0])
    received = gains_linear * power_mw[None, :]
    signal = received[rows, serving_col].copy()
    received[rows, serving_col] = 0.0

    all_cols = np.arange(gains_linear.shape[1])
    intra = np.zeros(gains_linear.shape[0])
    inter = np.zeros(gains_linear.shape[0])
    for sat_index, cols in own_cols.items():
        mask = ue_owner == sat_index
        if not mask.any():
            continue
        other = np.setdiff1d(all_cols, cols, assume_unique=True)
        intra[mask] = received[np.ix_(mask, cols)].sum(axis=1)
        inter[mask] = received[np.ix_(mask, other)].sum(axis=1)
    return SinrBatch(signal, intra, inter, signal / (noise_mw + intra + inter))


def beam_power_vector(decisions: Mapping[int, ScheduleDecision], column_of: Dict[Tuple[int, int], int],
                      beam_count: int) -> np.ndarray:
    power = np.zeros(beam_count)
    for sat_id, decision in decisions.items():
        for beam_id, watts in decision.power.items():
            power[column_of[(sat_id, beam_id)]] = watts_to_mw(watts)
    return power
