#!/usr/bin/env python3
"""
Tests for traffic generation and FIFO queues
"""
import sys

import numpy as np

from beamhop_errors import DomainError
from beamhop_models import Packet
from traffic import TrafficSource, UeQueue, drain, ftp3_step, full_buffer_step, make_queues, stream_generators


HALF_MB_BITS = 500_000 * 8


def _queue_with(*sizes, slot=1):
    queue = UeQueue(0)
    for size in sizes:
        queue.push(Packet(packet_id=queue.packet_count, ue_id=0, size=size, arrival_slot=slot, bits_remaining=size))
    return queue


def test_full_buffer_one_packet_per_ue():
    queues = full_buffer_step(make_queues([0, 1, 2]), 1, HALF_MB_BITS)
    assert [q.backlog for q in queues.values()] == [4_000_000] * 3
    assert all(len(q) == 1 for q in queues.values())

    empty = make_queues([])
    assert full_buffer_step(empty, 1, HALF_MB_BITS) == {}


def test_full_buffer_accumulates():
    queues = make_queues([7])
    for slot in range(1, 6):
        full_buffer_step(queues, slot, 1000)
    assert queues[7].backlog == 5000
    assert [p.arrival_slot for p in queues[7].packets] == [1, 2, 3, 4, 5]
    assert [p.packet_id for p in queues[7].packets] == [0, 1, 2, 3, 4]


def test_full_buffer_rejects_empty_packets():
    try:
        full_buffer_step(make_queues([0]), 1, 0)
    except DomainError:
        pass
    else:
        raise AssertionError("zero-size packets should be rejected")


def test_ftp3_zero_rate():
    queues = make_queues(range(5))
    rngs = stream_generators(np.random.SeedSequence(0), list(range(5)))
    for slot in range(1, 1001):
        ftp3_step(queues, slot, 0.0, HALF_MB_BITS, 0.001, rngs)
    assert all(q.arrived_bits == 0 for q in queues.values())


def test_ftp3_poisson_mean_and_variance():
    ue_ids = list(range(1000))
    source = TrafficSource("ftp3", 1, 8.0, 1.0, np.random.SeedSequence(12345), ue_ids)
    queues = make_queues(ue_ids)
    counts = []
    for slot in range(1, 11):
        before = {ue_id: q.packet_count for ue_id, q in queues.items()}
        source.step(queues, slot)
        counts.extend(queues[ue_id].packet_count - before[ue_id] for ue_id in ue_ids)
    counts = np.array(counts)
    assert counts.size == 10_000
    assert abs(counts.mean() - 8.0) < 3 * np.sqrt(8.0 / counts.size)
    assert abs(counts.var() - 8.0) < 0.6


def test_ftp3_reproducible_per_seed():
    def arrivals(seed):
        source = TrafficSource("ftp3", 400_000, 8.0, 0.001, np.random.SeedSequence(seed), [0, 1, 2])
        queues = make_queues([0, 1, 2])
        for slot in range(1, 1001):
            source.step(queues, slot)
        return [[p.arrival_slot for p in queues[u].packets] for u in (0, 1, 2)]

    assert arrivals(4) == arrivals(4)
    assert arrivals(4) != arrivals(5)


def test_drain_examples():
    queue = _queue_with(100)
    assert drain(queue, 0, 3) == []
    assert queue.backlog == 100

    done = drain(queue, 100, 3)
    assert [p.completion_slot for p in done] == [3]
    assert queue.backlog == 0 and len(queue) == 0

    queue = _queue_with(100, 50)
    done = drain(queue, 120, 4)
    assert [p.size for p in done] == [100]
    assert queue.packets[0].bits_remaining == 30
    assert queue.backlog == 30


def test_drain_discards_excess_service():
    queue = _queue_with(10, 20)
    done = drain(queue, 1_000, 2)
    assert [p.packet_id for p in done] == [0, 1]
    assert queue.served_bits == 30
    assert queue.backlog == 0


def test_drain_rejects_negative_service():
    try:
        drain(_queue_with(10), -1, 1)
    except DomainError:
        pass
    else:
        raise AssertionError("negative service should be rejected")


def test_conservation_under_random_service():
    rng = np.random.default_rng(8)
    queue = UeQueue(0)
    completed = []
    for slot in range(1, 200):
        for _ in range(int(rng.poisson(1.5))):
            size = int(rng.integers(1, 5000))
            queue.push(Packet(queue.packet_count, 0, size, slot, size))
        completed.extend(drain(queue, int(rng.integers(0, 6000)), slot))
        assert queue.arrived_bits == queue.served_bits + queue.backlog
        assert queue.backlog == sum(p.bits_remaining for p in queue.packets)
    ids = [p.packet_id for p in completed]
    assert ids == sorted(ids)
    assert all(p.completion_slot >= p.arrival_slot for p in completed)


def test_unknown_traffic_model():
    try:
        TrafficSource("cbr", 1000, 8.0, 0.001, np.random.SeedSequence(0), [0])
    except DomainError:
        pass
    else:
        raise AssertionError("unknown traffic model should be rejected")


def main():
    print("🧪 Traffic and Queue Test Suite")
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

    print(f"\n{len(tests) - failed}/{len(tests)} traffic tests passed")
    return failed


if __name__ == "__main__":
    sys.exit(1 if main() else 0)
