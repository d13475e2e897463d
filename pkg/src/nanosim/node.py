"""Per-node simulation state."""

from __future__ import annotations

from .energy import EnergyAccount
from .kalman import LinkQualityEstimator


class NodeState:
    """One node: position, battery, neighbor knowledge and protocol state.

    Protocol fields live here rather than in per-protocol side tables so a
    single dict lookup reaches everything a handler needs.
    """

    __slots__ = (
        "node_id", "pos", "account", "alive", "is_nc", "bucket",
        "neighbors", "dist_nc", "last_harvest", "last_heard", "estimators",
        "route_table", "seen_requests", "request_counter", "pending_route",
        "unacked", "failed_nodes", "sfr_seen", "collections", "generated",
    )

    def __init__(self, node_id: int, pos, initial_energy: float,
                 capacity: float, is_nc: bool = False, bucket: int | None = None):
        self.node_id = node_id
        self.pos = pos
        self.account = EnergyAccount(initial_energy, capacity)
        self.alive = True
        self.is_nc = is_nc
        self.bucket = bucket
        self.neighbors: list[int] = []
        self.dist_nc = 0.0
        self.last_harvest = 0.0
        self.last_heard: dict[int, float] = {}
        self.estimators: dict[int, LinkQualityEstimator] = {}
        # routing protocol state
        self.route_table: dict[int, object] = {}
        self.seen_requests: set[tuple[int, int]] = set()
        self.request_counter = 0
        self.pending_route: dict[int, object] = {}
        self.unacked: dict[int, object] = {}
        self.failed_nodes: set[int] = set()
        # selective flood duplicate cache
        self.sfr_seen: set[int] = set()
        # collector request state
        self.collections: dict[tuple[int, int], object] = {}
        self.generated = 0

    @property
    def energy(self) -> float:
        return self.account.energy

    def check_alive(self) -> bool:
        """Dead means the battery ran out or a fault took the node down."""
        if self.alive:
            acc = self.account
            if acc.initial + acc.credited - acc.debited <= 0:
                self.alive = False
        return self.alive
