"""Walker constellation construction, circular-orbit propagation and
spherical-earth geometry (elevation, azimuth, slant range, visibility)."""
import logging
import math
from dataclasses import replace
from typing import List, Sequence, Tuple

import numpy as np

from beamhop_errors import ConfigurationError, DomainError
from beamhop_models import GeodeticPoint, SatelliteState, Vector3, WalkerConstellation


logger = logging.getLogger(__name__)

EARTH_RADIUS_KM = 6371.0
MU_EARTH_KM3_S2 = 398600.4418


def _position_from_elements(radius_km: float, raan_deg: float, inclination_deg: float,
                            argument_of_latitude_deg: float) -> Vector3:
    raan = math.radians(raan_deg)
    inc = math.radians(inclination_deg)
    u = math.radians(argument_of_latitude_deg)
    x = radius_km * (math.cos(raan) * math.cos(u) - math.sin(raan) * math.sin(u) * math.cos(inc))
    y = radius_km * (math.sin(raan) * math.cos(u) + math.cos(raan) * math.sin(u) * math.cos(inc))
    z = radius_km * (math.sin(u) * math.sin(inc))
    return (x, y, z)


def angular_rate(radius_km: float) -> float:
    """Mean motion of a circular orbit, rad/s"""
    return math.sqrt(MU_EARTH_KM3_S2 / radius_km ** 3)


def orbital_period(radius_km: float) -> float:
    return 2.0 * math.pi / angular_rate(radius_km)


def validate_constellation(config: WalkerConstellation) -> None:
    if config.planes <= 0 or config.total_satellites <= 0:
        raise ConfigurationError("satellite and plane counts must be positive", "planes")
    if config.total_satellites % config.planes != 0:
        raise ConfigurationError(
            f"{config.total_satellites} satellites cannot be split evenly over {config.planes} planes",
            "total_satellites",
        )
    if not 0.0 <= config.inclination <= 180.0:
        raise ConfigurationError("inclination must lie in [0, 180] degrees", "inclination_deg")
    if config.altitude <= 0:
        raise ConfigurationError("altitude must be positive", "altitude_km")


def build_walker(config: WalkerConstellation, epoch: float = 0.0) -> List[SatelliteState]:
    """Walker-delta constellation: RAAN spread over 360°, uniform in-plane
    spacing, inter-plane phase offset of 360°·F/M."""
    validate_constellation(config)

    per_plane = config.satellites_per_plane
    radius = EARTH_RADIUS_KM + config.altitude
    raan_spacing = 360.0 / config.planes
    anomaly_spacing = 360.0 / per_plane
    phase_offset = 360.0 * config.phasing_factor / config.total_satellites
    drift_deg = math.degrees(angular_rate(radius) * epoch)

    states = []
    for plane in range(config.planes):
        raan = plane * raan_spacing
        for slot in range(per_plane):
            arg_lat = (slot * anomaly_spacing + plane * phase_offset + drift_deg) % 360.0
            states.append(SatelliteState(
                satellite_id=plane * per_plane + slot,
                plane_index=plane,
                in_plane_index=slot,
                ecef_position=_position_from_elements(radius, raan, config.inclination, arg_lat),
                epoch_time=epoch,
                raan_deg=raan,
                inclination_deg=config.inclination,
                argument_of_latitude_deg=arg_lat,
                radius_km=radius,
            ))

    logger.info(f"Built Walker constellation: {len(states)} satellites in {config.planes} planes "
                f"at {config.altitude} km, {config.inclination} deg")
    return states


def propagate(state: SatelliteState, dt: float) -> SatelliteState:
    """Advance a satellite along its circular orbit by dt seconds"""
    if dt < 0:
        raise DomainError(f"propagation step must be non-negative, got {dt}")
    if dt == 0:
        return state
    arg_lat = (state.argument_of_latitude_deg + math.degrees(angular_rate(state.radius_km) * dt)) % 360.0
    return replace(
        state,
        ecef_position=_position_from_elements(state.radius_km, state.raan_deg, state.inclination_deg, arg_lat),
        epoch_time=state.epoch_time + dt,
        argument_of_latitude_deg=arg_lat,
    )


def geodetic_to_ecef(p: GeodeticPoint) -> np.ndarray:
    lat = math.radians(p.latitude)
    lon = math.radians(p.longitude)
    r = EARTH_RADIUS_KM + p.altitude_above_surface
    return np.array([r * math.cos(lat) * math.cos(lon), r * math.cos(lat) * math.sin(lon), r * math.sin(lat)])


def ecef_to_geodetic(position: Sequence[float]) -> GeodeticPoint:
    x, y, z = position
    r = math.sqrt(x * x + y * y + z * z)
    lat = math.degrees(math.asin(z / r))
    lon = math.degrees(math.atan2(y, x))
    if lon <= -180.0:
        lon += 360.0
    return GeodeticPoint(latitude=lat, longitude=lon, altitude_above_surface=r - EARTH_RADIUS_KM)


def points_to_ecef(points: Sequence[GeodeticPoint]) -> np.ndarray:
    """Vectorized geodetic_to_ecef, shape (n, 3)"""
    if not points:
        return np.zeros((0, 3))
    lat = np.radians([p.latitude for p in points])
    lon = np.radians([p.longitude for p in points])
    r = EARTH_RADIUS_KM + np.array([p.altitude_above_surface for p in points])
    return np.column_stack((r * np.cos(lat) * np.cos(lon), r * np.cos(lat) * np.sin(lon), r * np.sin(lat)))


def elevation_azimuth(ue: GeodeticPoint, sat: SatelliteState) -> Tuple[float, float]:
    """Elevation above the local horizontal and azimuth clockwise from north, degrees"""
    ue_pos = geodetic_to_ecef(ue)
    los = np.asarray(sat.ecef_position) - ue_pos
    distance = np.linalg.norm(los)

    lat = math.radians(ue.latitude)
    lon = math.radians(ue.longitude)
    up = np.array([math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat)])
    east = np.array([-math.sin(lon), math.cos(lon), 0.0])
    north = np.array([-math.sin(lat) * math.cos(lon), -math.sin(lat) * math.sin(lon), math.cos(lat)])

    sin_el = float(np.clip(np.dot(los, up) / distance, -1.0, 1.0))
    elevation = math.degrees(math.asin(sin_el))
    azimuth = math.degrees(math.atan2(float(np.dot(los, east)), float(np.dot(los, north)))) % 360.0
    return elevation, azimuth


def slant_distance(ue: GeodeticPoint, sat: SatelliteState) -> float:
    return float(np.linalg.norm(np.asarray(sat.ecef_position) - geodetic_to_ecef(ue)))


def slant_range_from_elevation(elevation_deg: float, altitude_km: float) -> float:
    """Closed-form slant range for a ground observer at the given elevation"""
    if not -90.0 <= elevation_deg <= 90.0 or altitude_km <= 0:
        raise DomainError(f"need elevation in [-90, 90] and positive altitude, got {elevation_deg}, {altitude_km}")
    eps = math.radians(elevation_deg)
    r = EARTH_RADIUS_KM + altitude_km
    return math.sqrt(r ** 2 - (EARTH_RADIUS_KM * math.cos(eps)) ** 2) - EARTH_RADIUS_KM * math.sin(eps)


def great_circle_distance(a: GeodeticPoint, b: GeodeticPoint) -> float:
    """Haversine ground distance in km"""
    lat1, lon1, lat2, lon2 = map(math.radians, (a.latitude, a.longitude, b.latitude, b.longitude))
    h = math.sin((lat2 - lat1) / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def great_circle_matrix(points: Sequence[GeodeticPoint]) -> np.ndarray:
    """Pairwise haversine distances, shape (n, n)"""
    lat = np.radians([p.latitude for p in points])
    lon = np.radians([p.longitude for p in points])
    dlat = lat[:, None] - lat[None, :]
    dlon = lon[:, None] - lon[None, :]
    h = np.sin(dlat / 2) ** 2 + np.cos(lat)[:, None] * np.cos(lat)[None, :] * np.sin(dlon / 2) ** 2
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.minimum(1.0, np.sqrt(h)))


def visible_satellites(ue: GeodeticPoint, sats: Sequence[SatelliteState], min_elevation: float) -> List[int]:
    """Ids of satellites at or above min_elevation, nearest first (ties: lower id)"""
    if min_elevation < 0:
        raise DomainError(f"minimum elevation must be non-negative, got {min_elevation}")
    if not sats:
        return []

    ue_pos = geodetic_to_ecef(ue)
    positions = np.array([s.ecef_position for s in sats])
    los = positions - ue_pos
    distances = np.linalg.norm(los, axis=1)
    up = ue_pos / np.linalg.norm(ue_pos)
    elevations = np.degrees(np.arcsin(np.clip(los @ up / distances, -1.0, 1.0)))

    candidates = [
        (float(distances[i]), sats[i].satellite_id)
        for i in range(len(sats))
        if elevations[i] >= min_elevation
    ]
    candidates.sort()
    return [sat_id for _, sat_id in candidates]


def select_serving_satellites(sats: Sequence[SatelliteState], center: GeodeticPoint,
                              count: int, min_elevation: float) -> List[SatelliteState]:
    """The `count` satellites nearest to a region centre that are visible from it"""
    by_id = {s.satellite_id: s for s in sats}
    chosen = [by_id[i] for i in visible_satellites(center, sats, min_elevation)[:count]]
    if len(chosen) < count:
        logger.warning(f"Only {len(chosen)} of {count} requested satellites are visible from "
                       f"({center.latitude:.2f}, {center.longitude:.2f})")
    return chosen
