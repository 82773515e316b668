"""Per-slot beam illumination and power allocation.

Three schemes share one decision shape: the demand-driven greedy with a
distance limit between simultaneously lit beams, the same greedy without
the limit, and a demand-blind round robin. Power is split evenly over the
lit beams in every case.
"""
import logging
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from beamhop_errors import ConfigurationError, InvariantViolation
from beamhop_models import BeamDemand, ScheduleDecision, Spotbeam
from orbits import great_circle_distance, great_circle_matrix


logger = logging.getLogger(__name__)

BeamEntry = Tuple[Spotbeam, BeamDemand]
DistanceFn = Callable[[Spotbeam, Spotbeam], float]

POWER_TOLERANCE = 1e-12


def center_distance(a: Spotbeam, b: Spotbeam) -> float:
    return great_circle_distance(a.center, b.center)


class BeamDistanceCache:
    """Pairwise beam-centre distances per satellite, computed once per layout"""

    def __init__(self, layouts: Mapping[int, Sequence[Spotbeam]]):
        self._index: Dict[Tuple[int, int], int] = {}
        self._matrices = {}
        for sat_id, beams in layouts.items():
            for i, beam in enumerate(beams):
                self._index[(sat_id, beam.beam_id)] = i
            if beams:
                self._matrices[sat_id] = great_circle_matrix([b.center for b in beams])

    def __call__(self, a: Spotbeam, b: Spotbeam) -> float:
        if a.satellite_id != b.satellite_id:
            return center_distance(a, b)
        matrix = self._matrices[a.satellite_id]
        return float(matrix[self._index[(a.satellite_id, a.beam_id)], self._index[(b.satellite_id, b.beam_id)]])


def _satellite_of(beams: Sequence[BeamEntry], satellite_id: Optional[int]) -> int:
    if satellite_id is not None:
        return satellite_id
    return beams[0][0].satellite_id if beams else -1


def _by_demand(beams: Sequence[BeamEntry]) -> List[BeamEntry]:
    """Positive-demand beams, highest priority first, lower beam_id on ties"""
    return sorted((entry for entry in beams if entry[1].priority > 0),
                  key=lambda entry: (-entry[1].priority, entry[0].beam_id))


def allocate_power(decision: ScheduleDecision, p_max: float) -> ScheduleDecision:
    """Split p_max evenly over the illuminated beams"""
    if not decision.illuminated:
        decision.power = {}
        return decision
    share = p_max / len(decision.illuminated)
    decision.power = {beam_id: share for beam_id in decision.illuminated}
    return decision


def schedule_distance_limit(beams: Sequence[BeamEntry], i_max: int, distance_limit_km: float, p_max: float,
                            slot: int = 0, satellite_id: Optional[int] = None,
                            distance: DistanceFn = center_distance) -> ScheduleDecision:
    """Greedy by demand; a beam is lit only if it is farther than D from every lit beam"""
    lit: List[Spotbeam] = []
    for beam, _ in _by_demand(beams):
        if len(lit) == i_max:
            break
        if all(distance(beam, other) > distance_limit_km for other in lit):
            lit.append(beam)

    decision = ScheduleDecision(
        satellite_id=_satellite_of(beams, satellite_id),
        slot=slot,
        illuminated=tuple(b.beam_id for b in lit),
    )
    return allocate_power(decision, p_max)


def schedule_no_limit(beams: Sequence[BeamEntry], i_max: int, p_max: float, slot: int = 0,
                      satellite_id: Optional[int] = None) -> ScheduleDecision:
    """Top-I_max beams by demand"""
    decision = ScheduleDecision(
        satellite_id=_satellite_of(beams, satellite_id),
        slot=slot,
        illuminated=tuple(beam.beam_id for beam, _ in _by_demand(beams)[:i_max]),
    )
    return allocate_power(decision, p_max)


class RoundRobinCursor:
    def __init__(self):
        self.position = 0


def schedule_round_robin(beams: Sequence[BeamEntry], i_max: int, p_max: float, slot: int,
                         cursor: RoundRobinCursor, satellite_id: Optional[int] = None) -> ScheduleDecision:
    """Next I_max beams in cyclic beam_id order, regardless of demand"""
    beam_ids = sorted(beam.beam_id for beam, _ in beams)
    count = len(beam_ids)
    decision = ScheduleDecision(satellite_id=_satellite_of(beams, satellite_id), slot=slot)
    if count == 0:
        return allocate_power(decision, p_max)

    take = min(i_max, count)
    decision.illuminated = tuple(beam_ids[(cursor.position + i) % count] for i in range(take))
    cursor.position = (cursor.position + i_max) % count
    return allocate_power(decision, p_max)


def validate_decision(decision: ScheduleDecision, i_max: int, p_max: float,
                      beams: Optional[Mapping[int, Spotbeam]] = None,
                      distance_limit_km: Optional[float] = None,
                      distance: DistanceFn = center_distance) -> None:
    """Raise InvariantViolation unless the decision respects the beam cap,
    the power cap and (optionally) the pairwise distance limit"""
    lit = decision.illuminated
    if len(lit) > i_max:
        raise InvariantViolation("beam cap", f"satellite {decision.satellite_id} slot {decision.slot}: "
                                             f"{len(lit)} beams lit, I_max={i_max}")
    if decision.total_power > p_max * (1.0 + POWER_TOLERANCE):
        raise InvariantViolation("power cap", f"satellite {decision.satellite_id} slot {decision.slot}: "
                                              f"{decision.total_power} W > {p_max} W")
    if set(decision.power) != set(lit) or any(p <= 0 for p in decision.power.values()):
        raise InvariantViolation("power support", f"satellite {decision.satellite_id} slot {decision.slot}: "
                                                  "power must be positive exactly on lit beams")
    if distance_limit_km is not None and beams is not None:
        for i, a in enumerate(lit):
            for b in lit[i + 1:]:
                d = distance(beams[a], beams[b])
                if d <= distance_limit_km:
                    raise InvariantViolation(
                        "distance limit",
                        f"satellite {decision.satellite_id} slot {decision.slot}: beams {a} and {b} "
                        f"are {d:.2f} km apart, D={distance_limit_km}")


class BeamHoppingScheduler:
    """Scheme-specific scheduling state shared by all satellites of a run"""
    name = ""

    def __init__(self, i_max: int, p_max: float):
        self.i_max = i_max
        self.p_max = p_max

    def schedule(self, satellite_id: int, slot: int, beams: Sequence[BeamEntry]) -> ScheduleDecision:
        raise NotImplementedError

    def validate(self, decision: ScheduleDecision, beams: Mapping[int, Spotbeam]) -> None:
        validate_decision(decision, self.i_max, self.p_max)


class DistanceLimitScheduler(BeamHoppingScheduler):
    name = "distance_limit"

    def __init__(self, i_max: int, p_max: float, distance_limit_km: float, distance: DistanceFn = center_distance):
        super().__init__(i_max, p_max)
        self.distance_limit_km = distance_limit_km
        self.distance = distance

    def schedule(self, satellite_id: int, slot: int, beams: Sequence[BeamEntry]) -> ScheduleDecision:
        return schedule_distance_limit(beams, self.i_max, self.distance_limit_km, self.p_max,
                                       slot=slot, satellite_id=satellite_id, distance=self.distance)

    def validate(self, decision: ScheduleDecision, beams: Mapping[int, Spotbeam]) -> None:
        validate_decision(decision, self.i_max, self.p_max, beams, self.distance_limit_km, self.distance)


class NoLimitScheduler(BeamHoppingScheduler):
    name = "no_limit"

    def schedule(self, satellite_id: int, slot: int, beams: Sequence[BeamEntry]) -> ScheduleDecision:
        return schedule_no_limit(beams, self.i_max, self.p_max, slot=slot, satellite_id=satellite_id)


class RoundRobinScheduler(BeamHoppingScheduler):
    name = "round_robin"

    def __init__(self, i_max: int, p_max: float):
        super().__init__(i_max, p_max)
        self.cursors: Dict[int, RoundRobinCursor] = {}

    def schedule(self, satellite_id: int, slot: int, beams: Sequence[BeamEntry]) -> ScheduleDecision:
        cursor = self.cursors.setdefault(satellite_id, RoundRobinCursor())
        return schedule_round_robin(beams, self.i_max, self.p_max, slot, cursor, satellite_id=satellite_id)


def make_scheduler(name: str, i_max: int, p_max: float, distance_limit_km: float,
                   distance: DistanceFn = center_distance) -> BeamHoppingScheduler:
    if name == "distance_limit":
        return DistanceLimitScheduler(i_max, p_max, distance_limit_km, distance)
    if name == "no_limit":
        return NoLimitScheduler(i_max, p_max)
    if name == "round_robin":
        return RoundRobinScheduler(i_max, p_max)
    raise ConfigurationError(f"unknown scheduler {name!r}", "scheduler")
