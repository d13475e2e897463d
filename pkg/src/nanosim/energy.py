"""Energy accounting: the forwarding gate, radio costs and harvesting slots."""

from __future__ import annotations

from dataclasses import dataclass

# bits of the four-frame discovery/request exchange the gate is derived from
GATE_FRAME_BITS = (16, 16, 48, 48)


def gate_threshold(e_bit: float, epsilon: float = 1.0) -> float:
    """Minimum residual energy a node must hold to take part in forwarding.

    The node has to afford the discovery reply plus a request/reply exchange,
    scaled by the safety factor epsilon.
    """
    if e_bit <= 0:
        raise ValueError("per-bit energy must be positive")
    if epsilon <= 0:
        raise ValueError("gate scale factor must be positive")
    return epsilon * e_bit * sum(GATE_FRAME_BITS)


def transmit_cost(e_bit: float, bits: int, copies: int = 1) -> float:
    """Energy to transmit `copies` frames of `bits` each."""
    if bits <= 0 or copies < 0:
        raise ValueError("transmit cost needs positive bits and nonnegative copies")
    return e_bit * bits * copies


def receive_cost(e_bit: float, bits: int, rx_ratio: float = 0.5) -> float:
    """Energy to receive one frame; a fixed fraction of the transmit cost."""
    if not 0 <= rx_ratio:
        raise ValueError("receive ratio must be nonnegative")
    return rx_ratio * e_bit * bits


@dataclass(frozen=True)
class SlotSchedule:
    """Global repeating cycle of energy transfer, joint transfer and data slots.

    Harvesting runs during the WET and SWIPT slots; the WIT slot is pure data.
    Communication itself is never gated by the schedule.
    """

    wet: float = 5.0
    swipt: float = 0.01
    wit: float = 0.1

    def __post_init__(self):
        if self.wet < 0 or self.swipt < 0 or self.wit < 0:
            raise ValueError("slot durations cannot be negative")
        if self.wet + self.swipt + self.wit <= 0:
            raise ValueError("the slot cycle must have positive length")
        object.__setattr__(self, "_period", self.wet + self.swipt + self.wit)
        object.__setattr__(self, "_span", self.wet + self.swipt)

    @property
    def period(self) -> float:
        return self._period

    @property
    def harvest_span(self) -> float:
        return self._span

    def harvest_seconds(self, t0: float, t1: float) -> float:
        """Total harvesting-slot time inside [t0, t1]."""
        if t1 < t0:
            raise ValueError("interval end precedes start")
        if t1 == t0:
            return 0.0
        span = self._span
        if span == 0:
            return 0.0
        period = self._period
        if span == period:
            return t1 - t0
        full, lo = divmod(t0, period)
        full1, hi = divmod(t1, period)
        # harvesting covers the first `span` seconds of each cycle
        lo_part = lo if lo < span else span
        hi_part = hi if hi < span else span
        return (full1 - full) * span + hi_part - lo_part


class EnergyAccount:
    """Battery of one node: separate credit and debit accumulators.

    The residual energy is always derived as initial + credited - debited, so
    replaying the same credits and debits in the same order reproduces it bit
    for bit.
    """

    __slots__ = ("initial", "capacity", "credited", "debited")

    def __init__(self, initial: float, capacity: float):
        if initial < 0 or capacity < initial:
            raise ValueError("need 0 <= initial <= capacity")
        self.initial = initial
        self.capacity = capacity
        self.credited = 0.0
        self.debited = 0.0

    @property
    def energy(self) -> float:
        return self.initial + self.credited - self.debited

    def debit(self, amount: float) -> None:
        if amount < 0:
            raise ValueError("debit must be nonnegative")
        self.debited += amount

    def credit(self, amount: float) -> None:
        """Add harvested energy, clipped so the battery never exceeds capacity."""
        if amount < 0:
            raise ValueError("credit must be nonnegative")
        room = self.capacity - self.energy
        if room <= 0:
            return
        self.credited += min(amount, room)
