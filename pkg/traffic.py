"""Downlink traffic: full-buffer and FTP model 3 arrivals into per-UE FIFO queues."""
import logging
from collections import deque
from typing import Deque, Dict, Iterable, List, Mapping, Sequence

import numpy as np

from beamhop_errors import DomainError
from beamhop_models import Packet


logger = logging.getLogger(__name__)


class UeQueue:
    """FIFO of packets for one UE; backlog is the sum of bits_remaining"""

    def __init__(self, ue_id: int):
        self.ue_id = ue_id
        self.packets: Deque[Packet] = deque()
        self.backlog = 0
        self.arrived_bits = 0
        self.served_bits = 0
        self.packet_count = 0

    def push(self, packet: Packet) -> None:
        self.packets.append(packet)
        self.packet_count += 1
        self.backlog += packet.bits_remaining
        self.arrived_bits += packet.size

    def __len__(self) -> int:
        return len(self.packets)


def _new_packet(queue: UeQueue, size: int, slot: int) -> Packet:
    return Packet(packet_id=queue.packet_count, ue_id=queue.ue_id, size=size, arrival_slot=slot, bits_remaining=size)


def make_queues(ue_ids: Iterable[int]) -> Dict[int, UeQueue]:
    return {ue_id: UeQueue(ue_id) for ue_id in ue_ids}


def full_buffer_step(queues: Mapping[int, UeQueue], slot: int, packet_size: int) -> Mapping[int, UeQueue]:
    """One packet of packet_size bits per UE"""
    if packet_size <= 0:
        raise DomainError(f"packet size must be positive, got {packet_size}")
    for queue in queues.values():
        queue.push(_new_packet(queue, packet_size, slot))
    return queues


def ftp3_step(queues: Mapping[int, UeQueue], slot: int, rate: float, packet_size: int, slot_length: float,
              rngs: Mapping[int, np.random.Generator]) -> Mapping[int, UeQueue]:
    """Poisson(rate * slot_length) packet arrivals per UE, all at the slot boundary"""
    if rate < 0:
        raise DomainError(f"arrival rate must be non-negative, got {rate}")
    if rate == 0:
        return queues
    mean = rate * slot_length
    for ue_id, queue in queues.items():
        for _ in range(int(rngs[ue_id].poisson(mean))):
            queue.push(_new_packet(queue, packet_size, slot))
    return queues


def drain(queue: UeQueue, served_bits: int, slot: int) -> List[Packet]:
    """Serve bits FIFO and return the packets completed in this slot.

    Service beyond the backlog is discarded.
    """
    if served_bits < 0:
        raise DomainError(f"served bits must be non-negative, got {served_bits}")
    completed = []
    remaining = served_bits
    while remaining > 0 and queue.packets:
        head = queue.packets[0]
        used = min(remaining, head.bits_remaining)
        head.bits_remaining -= used
        queue.backlog -= used
        queue.served_bits += used
        remaining -= used
        if head.bits_remaining == 0:
            head.completion_slot = slot
            completed.append(queue.packets.popleft())
    return completed


def stream_generators(seed_sequence: np.random.SeedSequence, ue_ids: Sequence[int]) -> Dict[int, np.random.Generator]:
    """One independent generator per UE, split from a single seed"""
    children = seed_sequence.spawn(len(ue_ids))
    return {ue_id: np.random.default_rng(child) for ue_id, child in zip(ue_ids, children)}


class TrafficSource:
    """Applies the configured traffic model to the queues each slot"""

    def __init__(self, model: str, packet_size: int, arrival_rate: float, slot_length: float,
                 seed_sequence: np.random.SeedSequence, ue_ids: Sequence[int]):
        if model not in ("full_buffer", "ftp3"):
            raise DomainError(f"unknown traffic model {model!r}")
        self.model = model
        self.packet_size = packet_size
        self.arrival_rate = arrival_rate
        self.slot_length = slot_length
        self.rngs = stream_generators(seed_sequence, ue_ids) if model == "ftp3" else {}

    def step(self, queues: Mapping[int, UeQueue], slot: int) -> None:
        if self.model == "full_buffer":
            full_buffer_step(queues, slot, self.packet_size)
        else:
            ftp3_step(queues, slot, self.arrival_rate, self.packet_size, self.slot_length, self.rngs)
