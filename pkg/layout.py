"""Earth-fixed spotbeam layout and UE association.

Each satellite points beams at the UEs reporting to it, nearest first; a
UE already inside an existing beam does not get a new one.
"""
import hashlib
import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from beamhop_errors import OutputError
from beamhop_models import GeodeticPoint, SatelliteState, Spotbeam, UeRecord
from orbits import EARTH_RADIUS_KM, slant_distance, visible_satellites


logger = logging.getLogger(__name__)


def _distances_to(point: GeodeticPoint, lats: np.ndarray, lons: np.ndarray) -> np.ndarray:
    lat1 = np.radians(point.latitude)
    lon1 = np.radians(point.longitude)
    lat2 = np.radians(lats)
    lon2 = np.radians(lons)
    h = np.sin((lat2 - lat1) / 2) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin((lon2 - lon1) / 2) ** 2
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.minimum(1.0, np.sqrt(h)))


def assign_spotbeams(satellite: SatelliteState, reporting_ues: Sequence[UeRecord],
                     max_beams: int, diameter_km: float) -> List[Spotbeam]:
    """Near-to-distant greedy beam placement for one satellite"""
    if max_beams <= 0 or not reporting_ues:
        return []

    radius = diameter_km / 2.0
    ordered = sorted(reporting_ues, key=lambda ue: (slant_distance(ue.position, satellite), ue.ue_id))

    center_lats: List[float] = []
    center_lons: List[float] = []
    for ue in ordered:
        if len(center_lats) == max_beams:
            break
        if center_lats and _distances_to(ue.position, np.array(center_lats), np.array(center_lons)).min() <= radius:
            continue
        center_lats.append(ue.position.latitude)
        center_lons.append(ue.position.longitude)

    ue_lats = np.array([ue.position.latitude for ue in reporting_ues])
    ue_lons = np.array([ue.position.longitude for ue in reporting_ues])
    beams = []
    for index, (lat, lon) in enumerate(zip(center_lats, center_lons)):
        center = GeodeticPoint(latitude=lat, longitude=lon)
        inside = _distances_to(center, ue_lats, ue_lons) <= radius
        beams.append(Spotbeam(
            beam_id=index + 1,
            satellite_id=satellite.satellite_id,
            center=center,
            diameter_km=diameter_km,
            member_ues={reporting_ues[i].ue_id for i in np.flatnonzero(inside)},
        ))
    return beams


def partition_reporting_ues(ues: Sequence[UeRecord], satellites: Sequence[SatelliteState],
                            min_elevation: float) -> Dict[int, List[UeRecord]]:
    """Group UEs under their closest visible satellite"""
    groups: Dict[int, List[UeRecord]] = {s.satellite_id: [] for s in satellites}
    for ue in ues:
        visible = visible_satellites(ue.position, satellites, min_elevation)
        if visible:
            groups[visible[0]].append(ue)
    return groups


def associate_ues(ues: Sequence[UeRecord], satellites: Sequence[SatelliteState],
                  layouts: Mapping[int, Sequence[Spotbeam]], min_elevation: float) -> Dict[int, Tuple[int, int]]:
    """ue_id -> (satellite_id, beam_id); the covering beam nearest the UE wins"""
    mapping: Dict[int, Tuple[int, int]] = {}
    for ue in ues:
        visible = visible_satellites(ue.position, satellites, min_elevation)
        if not visible:
            continue
        sat_id = visible[0]
        beams = layouts.get(sat_id, [])
        if not beams:
            continue
        distances = _distances_to(
            ue.position,
            np.array([b.center.latitude for b in beams]),
            np.array([b.center.longitude for b in beams]),
        )
        best: Optional[Tuple[float, int]] = None
        for beam, distance in zip(beams, distances):
            if distance <= beam.diameter_km / 2.0 and (best is None or (distance, beam.beam_id) < best):
                best = (float(distance), beam.beam_id)
        if best is not None:
            mapping[ue.ue_id] = (sat_id, best[1])
    return mapping


def drop_ues(count: int, lon_min: float, lon_max: float, lat_min: float, lat_max: float,
             rng: np.random.Generator, band: str = "ka") -> List[UeRecord]:
    """Stationary UEs placed uniformly in a lon/lat box"""
    lons = rng.uniform(lon_min, lon_max, size=count)
    lats = rng.uniform(lat_min, lat_max, size=count)
    return [
        UeRecord(ue_id=j, position=GeodeticPoint(latitude=float(lats[j]), longitude=float(lons[j])),
                 band_profile_id=band)
        for j in range(count)
    ]


def save_scene(ues: Sequence[UeRecord], path: str) -> None:
    frame = pd.DataFrame({
        "ue_id": [ue.ue_id for ue in ues],
        "latitude": [ue.position.latitude for ue in ues],
        "longitude": [ue.position.longitude for ue in ues],
    })
    try:
        frame.to_csv(path, index=False)
    except OSError as e:
        logger.error(f"Failed to write scene file {path}: {e}")
        raise OutputError(path, str(e))


def load_scene(path: str, band: str = "ka") -> List[UeRecord]:
    frame = pd.read_csv(path, float_precision="round_trip")
    logger.info(f"Loaded {len(frame)} UEs from scene file {path}")
    return [
        UeRecord(ue_id=int(row.ue_id), position=GeodeticPoint(latitude=float(row.latitude), longitude=float(row.longitude)),
                 band_profile_id=band)
        for row in frame.itertuples(index=False)
    ]


def scene_hash(ues: Sequence[UeRecord], layouts: Mapping[int, Sequence[Spotbeam]]) -> str:
    """SHA-256 over UE positions and beam centres; equal scenes hash equal"""
    digest = hashlib.sha256()
    for ue in sorted(ues, key=lambda u: u.ue_id):
        digest.update(f"ue:{ue.ue_id}:{ue.position.latitude!r}:{ue.position.longitude!r};".encode())
    for sat_id in sorted(layouts):
        for beam in layouts[sat_id]:
            digest.update(f"beam:{sat_id}:{beam.beam_id}:{beam.center.latitude!r}:{beam.center.longitude!r};".encode())
    return digest.hexdigest()
