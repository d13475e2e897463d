"""Reference forwarding schemes the multipath protocol is compared against.

Both forward data greedily toward the collector with no route discovery, no
acknowledgements and no repair traffic. They consult neighbor state the
simulator holds (residual energy, liveness) directly; a deployed system would
need signalling for that, so their control overhead here is a lower bound.
"""

from __future__ import annotations

from .model import NC_ID, MessageKind


class SelectiveFlood:
    """Flood each packet to every closer, energy-qualified neighbor.

    A node forwards a given packet at most once, and hands it straight to
    the collector whenever the collector is in range.
    """

    name = "SFR"
    uses_link_estimates = False

    def __init__(self, sim):
        self.sim = sim

    def on_generate(self, node, pkt, t):
        node.sfr_seen.add(pkt.packet_id)
        self._forward(node, pkt, t)

    def on_frame(self, node, sender_id, kind, frame, t):
        if kind is not MessageKind.DATA:
            return
        if node.node_id == frame.destination:
            self.sim.deliver(frame, t)
            return
        if frame.packet_id in node.sfr_seen:
            return
        node.sfr_seen.add(frame.packet_id)
        self._forward(node, frame, t)

    def on_tx_failure(self, sender_id, kind, frame, target_id):
        pass

    def _forward(self, node, pkt, t):
        sim = self.sim
        targets = self._next_hops(node)
        if not targets:
            sim.note_reason(pkt.packet_id, "void")
            return
        sim.transmit(node, MessageKind.DATA, targets, pkt,
                     pkt=pkt.packet_id, bucket=pkt.bucket)

    def _next_hops(self, node):
        sim = self.sim
        nc = sim.nodes[NC_ID]
        if NC_ID in node.neighbors and nc.alive:
            return [NC_ID]
        return [v for v in node.neighbors
                if sim.nodes[v].alive
                and sim.nodes[v].energy >= sim.gate
                and sim.nodes[v].dist_nc < node.dist_nc]


class RandomNextHop:
    """Relay each packet to one uniformly chosen closer, qualified neighbor."""

    name = "RANDOM_NEXT_HOP"
    uses_link_estimates = False

    def __init__(self, sim):
        self.sim = sim

    def on_generate(self, node, pkt, t):
        self._forward(node, pkt, t)

    def on_frame(self, node, sender_id, kind, frame, t):
        if kind is not MessageKind.DATA:
            return
        if node.node_id == frame.destination:
            self.sim.deliver(frame, t)
            return
        self._forward(node, frame, t)

    def on_tx_failure(self, sender_id, kind, frame, target_id):
        pass

    def _forward(self, node, pkt, t):
        sim = self.sim
        nc = sim.nodes[NC_ID]
        if NC_ID in node.neighbors and nc.alive:
            nxt = NC_ID
        else:
            cands = [v for v in node.neighbors
                     if sim.nodes[v].alive
                     and sim.nodes[v].energy >= sim.gate
                     and sim.nodes[v].dist_nc < node.dist_nc]
            if not cands:
                sim.drop(pkt.packet_id, "void", t)
                return
            nxt = int(sim.rng.choice(cands))
        sim.transmit(node, MessageKind.DATA, [nxt], pkt,
                     pkt=pkt.packet_id, bucket=pkt.bucket)
