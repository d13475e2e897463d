"""Core datatypes shared by the simulator and the routing protocols."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

NodeId = int

# The network collector owns a reserved id.
NC_ID: NodeId = 0

# Position is an (x, y) pair in millimetres.
Position = tuple[float, float]


def distance(a: Position, b: Position) -> float:
    """Euclidean distance between two positions, in the same unit as the inputs."""
    return math.hypot(a[0] - b[0], a[1] - b[1])


class MessageKind(str, Enum):
    NDIS = "NDIS"
    NFEE = "NFEE"
    RREQ = "RREQ"
    RREP = "RREP"
    RERR = "RERR"
    ACK = "ACK"
    HELLO = "HELLO"
    DATA = "DATA"
    DATA_ACK = "DATA_ACK"


# Wire sizes in bits for fixed-size control frames. Short frames (ACK, HELLO,
# RERR, DATA_ACK) are accounted at the 2-byte discovery frame size; DATA has no
# entry because its size comes from the scenario config.
WIRE_BITS: dict[MessageKind, int] = {
    MessageKind.NDIS: 16,
    MessageKind.NFEE: 16,
    MessageKind.RREQ: 48,
    MessageKind.RREP: 48,
    MessageKind.RERR: 16,
    MessageKind.ACK: 16,
    MessageKind.HELLO: 16,
    MessageKind.DATA_ACK: 16,
}


def wire_size_bits(kind: MessageKind, data_bits: int = 0) -> int:
    """Accounting size of a frame in bits. DATA frames use the configured payload size."""
    if kind is MessageKind.DATA:
        if data_bits <= 0:
            raise ValueError("data frames need a positive payload size")
        return data_bits
    return WIRE_BITS[kind]


@dataclass(frozen=True)
class RoutePath:
    """A complete route: hop sequence from the source to the collector, inclusive.

    hops[0] is the source, hops[-1] the network collector. A valid path has at
    least two hops and visits no node twice.
    """

    hops: tuple[NodeId, ...]
    total_stability: float = 0.0

    def __post_init__(self):
        if len(self.hops) < 2:
            raise ValueError("a route needs at least a source and a destination")
        if len(set(self.hops)) != len(self.hops):
            raise ValueError("a route must not visit a node twice: %r" % (self.hops,))

    @property
    def source(self) -> NodeId:
        return self.hops[0]

    @property
    def destination(self) -> NodeId:
        return self.hops[-1]

    @property
    def hop_count(self) -> int:
        """Number of transmissions needed to traverse the path."""
        return len(self.hops) - 1

    def links(self) -> set[frozenset]:
        """The set of links along the path, direction ignored."""
        return {frozenset(p) for p in zip(self.hops, self.hops[1:])}


@dataclass
class RoutingTableEntry:
    """What a node remembers about a route to one destination.

    The stab tuples align with the corresponding hop tuples: stabs[i] is the
    stability score credited when hops[i] joined the route, so stabs[0] is
    always 0 for the path owner and stabs[1] is the score of its next hop.
    """

    destination: NodeId
    main: RoutePath
    main_stabs: tuple[float, ...] = ()
    backup: RoutePath | None = None
    backup_stabs: tuple[float, ...] = ()
    active: str = "main"  # "main" or "backup"
    created: float = 0.0
    ttl: float = 10.0

    def expired(self, now: float) -> bool:
        return now - self.created > self.ttl

    def active_path(self) -> RoutePath:
        if self.active == "backup":
            if self.backup is None:
                raise ValueError("backup route activated but not present")
            return self.backup
        return self.main

    def next_hop_stability(self) -> float:
        stabs = self.main_stabs if self.active == "main" else self.backup_stabs
        return stabs[1] if len(stabs) > 1 else 0.0


@dataclass
class DataPacket:
    """An application payload travelling from a source node to the collector."""

    packet_id: int
    source: NodeId
    destination: NodeId
    bits: int
    created: float
    bucket: int | None = None
    route: tuple[NodeId, ...] = ()
    hop_index: int = 0  # position of the current holder within route
    retries: int = 0
