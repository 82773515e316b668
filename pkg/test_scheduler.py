#!/usr/bin/env python3
"""
Tests for beam illumination schemes and power allocation
"""
import math
import sys

import numpy as np

from beamhop_errors import ConfigurationError, InvariantViolation
from beamhop_models import BeamDemand, GeodeticPoint, ScheduleDecision, Spotbeam
from orbits import EARTH_RADIUS_KM, great_circle_distance
from scheduler import (
    BeamDistanceCache,
    DistanceLimitScheduler,
    RoundRobinCursor,
    RoundRobinScheduler,
    allocate_power,
    center_distance,
    make_scheduler,
    schedule_distance_limit,
    schedule_no_limit,
    schedule_round_robin,
    validate_decision,
)


MB = 8 * 1_000_000


def _beam(beam_id, latitude, longitude, satellite_id=0):
    return Spotbeam(beam_id, satellite_id, GeodeticPoint(latitude, longitude), 42.0)


def _km_east(km):
    return math.degrees(km / EARTH_RADIUS_KM)


def _entries(beams, priorities):
    return [(b, BeamDemand(b.beam_id, p)) for b, p in zip(beams, priorities)]


def _random_instance(rng, max_beams=20):
    count = int(rng.integers(1, max_beams + 1))
    ids = rng.permutation(np.arange(1, count + 1))
    lats = rng.uniform(30.0, 31.5, count)
    lons = rng.uniform(108.0, 109.5, count)
    demands = rng.integers(0, 6, count) * 1000
    beams = [_beam(int(i), float(la), float(lo)) for i, la, lo in zip(ids, lats, lons)]
    return _entries(beams, [int(d) for d in demands])


def _greedy_oracle(entries, i_max, limit):
    """Select-max, test, discard loop over the candidate set"""
    candidates = [(b, d.priority) for b, d in entries if d.priority > 0]
    lit = []
    while candidates and len(lit) < i_max:
        best = min(candidates, key=lambda c: (-c[1], c[0].beam_id))
        candidates.remove(best)
        if all(great_circle_distance(best[0].center, other.center) > limit for other in lit):
            lit.append(best[0])
    return tuple(b.beam_id for b in lit)


def test_single_beam_takes_full_power():
    decision = schedule_distance_limit(_entries([_beam(1, 30.0, 108.0)], [5]), 40, 42.0, 300.0)
    assert decision.illuminated == (1,)
    assert decision.power == {1: 300.0}


def test_distance_limit_hand_trace():
    a = _beam(1, 0.0, 0.0)
    b = _beam(2, 0.0, _km_east(30.0))
    c = _beam(3, 0.0, _km_east(100.0))
    decision = schedule_distance_limit(_entries([a, b, c], [5 * MB, 4 * MB, 3 * MB]), 2, 42.0, 300.0)
    assert decision.illuminated == (1, 3)
    assert decision.power == {1: 150.0, 3: 150.0}


def test_everything_within_limit_lights_one_beam():
    beams = [_beam(k, 0.0, _km_east(8.0 * k)) for k in range(1, 5)]
    decision = schedule_distance_limit(_entries(beams, [1, 4, 2, 3]), 40, 42.0, 300.0)
    assert decision.illuminated == (2,)
    assert decision.power == {2: 300.0}


def test_empty_beam_list():
    for decision in (schedule_distance_limit([], 40, 42.0, 300.0), schedule_no_limit([], 40, 300.0)):
        assert decision.illuminated == ()
        assert decision.total_power == 0.0


def test_no_limit_top_beams():
    beams = [_beam(k, 0.0, _km_east(k)) for k in range(1, 6)]
    decision = schedule_no_limit(_entries(beams, [10, 50, 30, 40, 20]), 3, 300.0)
    assert decision.illuminated == (2, 4, 3)
    assert all(math.isclose(p, 100.0) for p in decision.power.values())

    tied = schedule_no_limit(_entries(beams, [7, 7, 7, 7, 7]), 2, 300.0)
    assert tied.illuminated == (1, 2)

    everything = schedule_no_limit(_entries(beams, [1, 2, 3, 4, 5]), 10, 300.0)
    assert set(everything.illuminated) == {1, 2, 3, 4, 5}


def test_zero_demand_beams_are_skipped():
    beams = [_beam(1, 0.0, 0.0), _beam(2, 0.0, _km_east(100.0))]
    decision = schedule_no_limit(_entries(beams, [0, 9]), 5, 300.0)
    assert decision.illuminated == (2,)
    assert schedule_distance_limit(_entries(beams, [0, 0]), 5, 42.0, 300.0).illuminated == ()


def test_round_robin_cycles():
    beams = _entries([_beam(k, 0.0, _km_east(k)) for k in range(1, 5)], [0, 0, 0, 0])
    cursor = RoundRobinCursor()
    slots = [schedule_round_robin(beams, 2, 300.0, n, cursor).illuminated for n in (1, 2, 3)]
    assert slots == [(1, 2), (3, 4), (1, 2)]

    full = RoundRobinCursor()
    assert schedule_round_robin(beams, 4, 300.0, 1, full).illuminated == (1, 2, 3, 4)
    assert schedule_round_robin(beams, 4, 300.0, 2, full).illuminated == (1, 2, 3, 4)


def test_round_robin_fair_over_cycle():
    beams = _entries([_beam(k, 0.0, _km_east(k)) for k in range(1, 6)], [1] * 5)
    cursor = RoundRobinCursor()
    counts = {k: 0 for k in range(1, 6)}
    for n in range(1, 6):
        for beam_id in schedule_round_robin(beams, 2, 300.0, n, cursor).illuminated:
            counts[beam_id] += 1
    assert counts == {k: 2 for k in range(1, 6)}


def test_round_robin_cursor_per_satellite():
    scheduler = RoundRobinScheduler(1, 300.0)
    first = _entries([_beam(k, 0.0, _km_east(k), satellite_id=0) for k in (1, 2)], [0, 0])
    second = _entries([_beam(k, 1.0, _km_east(k), satellite_id=1) for k in (1, 2, 3)], [0, 0, 0])
    assert scheduler.schedule(0, 1, first).illuminated == (1,)
    assert scheduler.schedule(1, 1, second).illuminated == (1,)
    assert scheduler.schedule(0, 2, first).illuminated == (2,)
    assert scheduler.schedule(1, 2, second).illuminated == (2,)


def test_allocate_power():
    forty = allocate_power(ScheduleDecision(0, 1, tuple(range(1, 41))), 300.0)
    assert all(p == 7.5 for p in forty.power.values())
    assert allocate_power(ScheduleDecision(0, 1, (4,)), 300.0).power == {4: 300.0}
    three = allocate_power(ScheduleDecision(0, 1, (1, 2, 3)), 300.0)
    assert three.power == {1: 100.0, 2: 100.0, 3: 100.0}
    assert three.total_power == 300.0
    assert allocate_power(ScheduleDecision(0, 1), 300.0).total_power == 0.0


def test_distance_limit_matches_greedy_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        entries = _random_instance(rng)
        i_max = int(rng.integers(1, 8))
        limit = float(rng.choice([0.0, 21.0, 42.0, 80.0]))
        decision = schedule_distance_limit(entries, i_max, limit, 300.0)
        assert decision.illuminated == _greedy_oracle(entries, i_max, limit)
        beams = {b.beam_id: b for b, _ in entries}
        validate_decision(decision, i_max, 300.0, beams, limit)


def test_no_limit_matches_top_k_oracle():
    rng = np.random.default_rng(99)
    for _ in range(300):
        entries = _random_instance(rng)
        i_max = int(rng.integers(1, 10))
        expected = [b.beam_id for b, d in sorted(entries, key=lambda e: (-e[1].priority, e[0].beam_id))
                    if d.priority > 0][:i_max]
        assert list(schedule_no_limit(entries, i_max, 300.0).illuminated) == expected


def test_zero_limit_equals_no_limit():
    rng = np.random.default_rng(5)
    for _ in range(300):
        entries = _random_instance(rng)
        i_max = int(rng.integers(1, 10))
        assert (schedule_distance_limit(entries, i_max, 0.0, 300.0).illuminated ==
                schedule_no_limit(entries, i_max, 300.0).illuminated)


def test_validate_decision_names_invariant():
    beams = {1: _beam(1, 0.0, 0.0), 2: _beam(2, 0.0, _km_east(10.0))}
    cases = [
        (ScheduleDecision(0, 1, (1, 2), {1: 150.0, 2: 150.0}), 1, None, "beam cap"),
        (ScheduleDecision(0, 1, (1,), {1: 301.0}), 2, None, "power cap"),
        (ScheduleDecision(0, 1, (1, 2), {1: 300.0}), 2, None, "power support"),
        (ScheduleDecision(0, 1, (1, 2), {1: 150.0, 2: 150.0}), 2, 42.0, "distance limit"),
    ]
    for decision, i_max, limit, name in cases:
        try:
            validate_decision(decision, i_max, 300.0, beams, limit)
        except InvariantViolation as e:
            assert e.invariant == name, f"expected {name}, got {e.invariant}"
        else:
            raise AssertionError(f"{name} violation not detected")


def test_distance_cache_agrees_with_haversine():
    rng = np.random.default_rng(1)
    layout = [_beam(k, float(la), float(lo)) for k, la, lo in
              zip(range(1, 16), rng.uniform(30, 31, 15), rng.uniform(108, 109, 15))]
    cache = BeamDistanceCache({0: layout})
    for a in layout:
        for b in layout:
            assert math.isclose(cache(a, b), center_distance(a, b), rel_tol=1e-9, abs_tol=1e-9)

    entries = _entries(layout, list(rng.integers(1, 100, 15)))
    scheduler = DistanceLimitScheduler(10, 300.0, 42.0, cache)
    assert scheduler.schedule(0, 1, entries).illuminated == schedule_distance_limit(entries, 10, 42.0, 300.0).illuminated


def test_unknown_scheduler():
    try:
        make_scheduler("proportional_fair", 40, 300.0, 42.0)
    except ConfigurationError as e:
        assert e.key == "scheduler"
    else:
        raise AssertionError("unknown scheduler name should be rejected")


def main():
    print("🧪 Beam Hopping Scheduler Test Suite")
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

    print(f"\n{len(tests) - failed}/{len(tests)} scheduler tests passed")
    return failed


if __name__ == "__main__":
    sys.exit(1 if main() else 0)
