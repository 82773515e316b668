"""Slotted simulation loop.

Each slot runs five phases in order: traffic arrivals, per-satellite
scheduling from the current backlogs, SINR for every UE whose serving beam
is lit, PHY service with FIFO drain, and metric accumulation.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from beamhop_errors import InvariantViolation
from beamhop_models import (
    ArrayGeometry,
    BandProfile,
    BeamDemand,
    MetricsReport,
    SatelliteState,
    ScheduleDecision,
    SlotClock,
    Spotbeam,
    UeRecord,
)
from link import beam_power_vector, db_to_linear, gain_matrix, noise_power, sinr_batch
from orbits import propagate
from scheduler import BeamHoppingScheduler
from traffic import TrafficSource, UeQueue, drain, make_queues


logger = logging.getLogger(__name__)

DEFAULT_EFFICIENCY = 0.75
DEFAULT_SE_CAP = 7.4


def make_clock(horizon_s: float, slot_length_s: float) -> SlotClock:
    return SlotClock(horizon_s=horizon_s, slot_length_s=slot_length_s,
                     slot_count=int(round(horizon_s / slot_length_s)))


def serve_bits(sinr: float, band: BandProfile, slot_length: float, share: float,
               efficiency: float = DEFAULT_EFFICIENCY, se_cap: float = DEFAULT_SE_CAP) -> float:
    """Capped-Shannon PHY abstraction: bits deliverable in one slot"""
    if sinr <= 0:
        return 0.0
    spectral_efficiency = min(math.log2(1.0 + sinr), se_cap)
    return slot_length * share * efficiency * band.bandwidth_hz * spectral_efficiency


def intra_beam_share(members: Sequence[int], backlogs: Mapping[int, int],
                     last_served: Optional[int]) -> Dict[int, float]:
    """Round robin by ue_id over backlogged members; one UE takes the whole beam"""
    waiting = sorted(ue_id for ue_id in members if backlogs.get(ue_id, 0) > 0)
    if not waiting:
        return {}
    if last_served is not None:
        for ue_id in waiting:
            if ue_id > last_served:
                return {ue_id: 1.0}
    return {waiting[0]: 1.0}


@dataclass
class Scene:
    """Serving satellites, their earth-fixed beams and the associated UEs"""
    satellites: List[SatelliteState]
    layouts: Dict[int, List[Spotbeam]]
    ues: List[UeRecord]
    band: BandProfile
    geometry: ArrayGeometry

    @property
    def covered_ues(self) -> List[UeRecord]:
        return [ue for ue in self.ues if ue.serving_beam is not None]

    @property
    def beam_count(self) -> int:
        return sum(len(beams) for beams in self.layouts.values())


@dataclass
class MetricsAccumulator:
    served_bits: Dict[int, List[int]] = field(default_factory=dict)
    illuminated: Dict[int, List[int]] = field(default_factory=dict)
    lifetimes_s: List[float] = field(default_factory=list)
    sinr_samples: List[float] = field(default_factory=list)


def finalize_metrics(accumulator: MetricsAccumulator, queues: Mapping[int, UeQueue], horizon_s: float) -> MetricsReport:
    arrived = {ue_id: q.arrived_bits for ue_id, q in sorted(queues.items())}
    served = {ue_id: q.served_bits for ue_id, q in sorted(queues.items())}
    backlog = {ue_id: q.backlog for ue_id, q in sorted(queues.items())}
    satisfaction = {ue_id: (served[ue_id] / arrived[ue_id] if arrived[ue_id] else 1.0) for ue_id in arrived}
    total_arrived = sum(arrived.values())

    return MetricsReport(
        horizon_s=horizon_s,
        satellite_throughput_bps={sat_id: sum(bits) / horizon_s for sat_id, bits in sorted(accumulator.served_bits.items())},
        sinr_db=sorted(10.0 * math.log10(s) for s in accumulator.sinr_samples if s > 0),
        packet_lifetimes_s=sorted(accumulator.lifetimes_s),
        incomplete_packets=sum(len(q) for q in queues.values()),
        ue_satisfaction=satisfaction,
        system_satisfaction=sum(served.values()) / total_arrived if total_arrived else 1.0,
        mean_illuminated_beams={sat_id: (float(np.mean(counts)) if counts else 0.0)
                                for sat_id, counts in sorted(accumulator.illuminated.items())},
        arrived_bits=arrived,
        served_bits=served,
        backlog_bits=backlog,
    )


@dataclass
class SlotRecord:
    slot: int
    decisions: Dict[int, ScheduleDecision]
    sinr: Dict[int, float]


class Simulation:
    """World state of one run: scene, queues, scheduler state and metrics"""

    def __init__(self, scene: Scene, scheduler: BeamHoppingScheduler, traffic: TrafficSource, clock: SlotClock,
                 efficiency: float = DEFAULT_EFFICIENCY, se_cap: float = DEFAULT_SE_CAP,
                 propagate_satellites: bool = False, record_history: bool = False):
        self.scene = scene
        self.scheduler = scheduler
        self.traffic = traffic
        self.clock = clock
        self.efficiency = efficiency
        self.se_cap = se_cap
        self.propagate_satellites = propagate_satellites
        self.history: Optional[List[SlotRecord]] = [] if record_history else None

        self.ues = sorted(scene.covered_ues, key=lambda ue: ue.ue_id)
        self.row_of = {ue.ue_id: row for row, ue in enumerate(self.ues)}
        self.queues = make_queues(ue.ue_id for ue in self.ues)

        self.sat_ids = [s.satellite_id for s in scene.satellites]
        self.sat_index = {sat_id: i for i, sat_id in enumerate(self.sat_ids)}
        self.beam_keys: List[Tuple[int, int]] = [
            (sat_id, beam.beam_id) for sat_id in self.sat_ids for beam in scene.layouts.get(sat_id, [])
        ]
        self.column_of = {key: col for col, key in enumerate(self.beam_keys)}
        self.beams_by_sat: Dict[int, Dict[int, Spotbeam]] = {
            sat_id: {b.beam_id: b for b in scene.layouts.get(sat_id, [])} for sat_id in self.sat_ids
        }
        self.beam_owner = np.array([self.sat_index[sat_id] for sat_id, _ in self.beam_keys], dtype=int)
        self.own_cols = {i: np.flatnonzero(self.beam_owner == i) for i in range(len(self.sat_ids))}

        self.serving_col = np.array([self.column_of[(ue.serving_satellite, ue.serving_beam)] for ue in self.ues],
                                    dtype=int)
        self.ue_owner = np.array([self.sat_index[ue.serving_satellite] for ue in self.ues], dtype=int)
        self.beam_members: Dict[Tuple[int, int], List[int]] = {key: [] for key in self.beam_keys}
        for ue in self.ues:
            self.beam_members[(ue.serving_satellite, ue.serving_beam)].append(ue.ue_id)
        self.last_served: Dict[Tuple[int, int], Optional[int]] = {key: None for key in self.beam_keys}

        self.noise_mw = noise_power(scene.band)
        self.gains = self._gains()
        self.metrics = MetricsAccumulator(
            served_bits={sat_id: [] for sat_id in self.sat_ids},
            illuminated={sat_id: [] for sat_id in self.sat_ids},
        )

    def _gains(self) -> np.ndarray:
        centers = [self.beams_by_sat[sat_id][beam_id].center for sat_id, beam_id in self.beam_keys]
        gains_db = gain_matrix([ue.position for ue in self.ues], self.scene.satellites, self.beam_owner,
                               centers, self.scene.band, self.scene.geometry)
        return db_to_linear(gains_db)

    def _demands(self, sat_id: int) -> List[Tuple[Spotbeam, BeamDemand]]:
        entries = []
        for beam_id, beam in self.beams_by_sat[sat_id].items():
            members = self.beam_members[(sat_id, beam_id)]
            priority = max((self.queues[ue_id].backlog for ue_id in members), default=0)
            entries.append((beam, BeamDemand(beam_id=beam_id, priority=priority)))
        return entries

    def run_slot(self, slot: int) -> Dict[int, ScheduleDecision]:
        self.clock.current_slot = slot
        if self.propagate_satellites and slot > 1:
            self.scene.satellites = [propagate(s, self.clock.slot_length_s) for s in self.scene.satellites]
            self.gains = self._gains()

        # arrivals
        self.traffic.step(self.queues, slot)

        # scheduling
        decisions: Dict[int, ScheduleDecision] = {}
        for sat_id in self.sat_ids:
            decision = self.scheduler.schedule(sat_id, slot, self._demands(sat_id))
            self.scheduler.validate(decision, self.beams_by_sat[sat_id])
            decisions[sat_id] = decision

        # SINR for UEs in lit serving beams
        power = beam_power_vector(decisions, self.column_of, len(self.beam_keys))
        rows = np.flatnonzero(power[self.serving_col] > 0) if len(self.ues) else np.array([], dtype=int)
        sinr_of: Dict[int, float] = {}
        if rows.size:
            batch = sinr_batch(self.gains[rows], power, self.serving_col[rows], self.own_cols,
                               self.ue_owner[rows], self.noise_mw)
            for row, value in zip(rows, batch.sinr):
                sinr_of[self.ues[row].ue_id] = float(value)
            self.metrics.sinr_samples.extend(float(v) for v in batch.sinr)

        # PHY service and drain
        backlogs = {ue_id: q.backlog for ue_id, q in self.queues.items()}
        for sat_id, decision in decisions.items():
            served_total = 0
            for beam_id in decision.illuminated:
                key = (sat_id, beam_id)
                shares = intra_beam_share(self.beam_members[key], backlogs, self.last_served[key])
                for ue_id, share in shares.items():
                    bits = int(serve_bits(sinr_of.get(ue_id, 0.0), self.scene.band, self.clock.slot_length_s,
                                          share, self.efficiency, self.se_cap))
                    queue = self.queues[ue_id]
                    before = queue.served_bits
                    for packet in drain(queue, bits, slot):
                        self.metrics.lifetimes_s.append(
                            (packet.completion_slot - packet.arrival_slot + 1) * self.clock.slot_length_s)
                    served_total += queue.served_bits - before
                    self.last_served[key] = ue_id
            self.metrics.served_bits[sat_id].append(served_total)
            self.metrics.illuminated[sat_id].append(len(decision.illuminated))

        if self.history is not None:
            self.history.append(SlotRecord(slot=slot, decisions=decisions, sinr=sinr_of))
        logger.debug(f"slot {slot}: lit beams " +
                     ", ".join(f"{sat_id}={len(d.illuminated)}" for sat_id, d in decisions.items()))
        return decisions

    def check_conservation(self) -> None:
        for ue_id, queue in self.queues.items():
            if queue.arrived_bits != queue.served_bits + queue.backlog:
                raise InvariantViolation(
                    "bit conservation",
                    f"UE {ue_id}: arrived {queue.arrived_bits} != served {queue.served_bits} + backlog {queue.backlog}")
            if queue.backlog != sum(p.bits_remaining for p in queue.packets):
                raise InvariantViolation("backlog consistency", f"UE {ue_id}: backlog disagrees with queued packets")

    def run(self) -> MetricsReport:
        for slot in range(1, self.clock.slot_count + 1):
            self.run_slot(slot)
        self.check_conservation()
        return finalize_metrics(self.metrics, self.queues, self.clock.horizon_s)
