"""Discrete-event simulation engine.

Binds topology, the energy model, the terahertz channel and a routing
protocol into one seeded, reproducible run. Two modelling shortcuts keep
desk-scale experiments tractable without touching any accounted quantity:

* a transmission burst (a broadcast, or the copies of a fan-out) is one queue
  event that processes all receivers in deterministic order; receiver-to-
  receiver arrival spread at millimetre geometry is below anything the
  metrics resolve.
* the neighbor discovery round trip resolves synchronously inside the event
  that started it, with every frame still logged and debited.

Link estimators are fed exclusively by HELLO receptions: the periodic beacon
doubles as the channel probe. Death is permanent: once a node's battery hits
zero (or a fault takes it down) it stops transmitting, receiving and
harvesting for the rest of the run.
"""

from __future__ import annotations

import math

import numpy as np

from . import __version__
from .baselines import RandomNextHop, SelectiveFlood
from .config import ScenarioConfig
from .energy import receive_cost, transmit_cost
from .eventlog import EventLog
from .events import EventQueue
from .kalman import LinkQualityEstimator
from .model import NC_ID, DataPacket, MessageKind, wire_size_bits
from .node import NodeState
from .rmrls import Rmrls

MM = 1e-3  # positions are in millimetres, the channel works in metres


def bucket_of(dist: float) -> int:
    """Distance bucket index: bucket d covers distances in (d-1, d]."""
    if dist <= 0:
        raise ValueError("bucket distance must be positive")
    return int(math.ceil(dist))


def sample_bucket_position(cfg: ScenarioConfig, rng, bucket: int,
                           max_tries: int = 20000):
    """Uniform position inside the field with collector distance in (d-1, d].

    Falls back to the field point closest to the collector when the annulus
    touches the field in a single point (with the default geometry that is
    bucket 1, whose only feasible spot is the tangent point).
    """
    lo, hi = bucket - 1.0, float(bucket)
    ncx, ncy = cfg.nc_position
    px = min(max(ncx, 0.0), cfg.area)
    py = min(max(ncy, 0.0), cfg.area)
    dmin = math.hypot(px - ncx, py - ncy)
    if dmin > hi:
        raise ValueError("bucket %d is out of reach for this geometry" % bucket)
    if dmin == hi:
        return (px, py)
    for _ in range(max_tries):
        x = rng.uniform(0.0, cfg.area)
        y = rng.uniform(0.0, cfg.area)
        d = math.hypot(x - ncx, y - ncy)
        if lo < d <= hi:
            return (x, y)
    raise ValueError("bucket %d annulus has negligible overlap with the field"
                     % bucket)


class Simulator:
    """One seeded run of one protocol over one generated topology."""

    def __init__(self, cfg: ScenarioConfig, protocol_factory, log: EventLog | None = None):
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        self.queue = EventQueue()
        self.log = log if log is not None else EventLog()
        self.channel = cfg.channel_model()
        self.slots = cfg.slot_schedule()
        self.gate = cfg.energy_gate
        self.e_bit = cfg.e_bit
        self.rx_ratio = cfg.rx_ratio
        self.data_bits = cfg.data_bits
        self.nodes: dict[int, NodeState] = {}
        self.sources: list[int] = []
        self.registry: dict[int, dict] = {}
        self._pkt_seq = 0
        self._tx_seq = 0
        self._pmean: dict[tuple[int, int], float] = {}
        self._rxc: dict[int, float] = {}
        ndis_bits = wire_size_bits(MessageKind.NDIS)
        nfee_bits = wire_size_bits(MessageKind.NFEE)
        self._ndis_tx = transmit_cost(self.e_bit, ndis_bits, 1)
        self._ndis_rx = receive_cost(self.e_bit, ndis_bits, self.rx_ratio)
        self._nfee_tx = transmit_cost(self.e_bit, nfee_bits, 1)
        self._nfee_rx = receive_cost(self.e_bit, nfee_bits, self.rx_ratio)
        self._build_topology()
        self.protocol = protocol_factory(self)

    # topology ------------------------------------------------------------

    def _make_node(self, node_id, pos, is_nc=False, bucket=None):
        cfg = self.cfg
        if is_nc:
            initial = cfg.nc_initial_energy
        else:
            initial = cfg.initial_energy_overrides.get(node_id, cfg.initial_energy)
        node = NodeState(node_id, pos, initial, cfg.battery_factor * initial,
                         is_nc=is_nc, bucket=bucket)
        self.nodes[node_id] = node
        return node

    def _build_topology(self):
        cfg = self.cfg
        self._make_node(NC_ID, cfg.nc_position, is_nc=True)
        for i in range(cfg.nodes):
            pos = (float(self.rng.uniform(0.0, cfg.area)),
                   float(self.rng.uniform(0.0, cfg.area)))
            self._make_node(i + 1, pos)
        next_id = cfg.nodes + 1
        for bucket in range(1, cfg.buckets + 1):
            for _ in range(cfg.sources_per_bucket):
                pos = sample_bucket_position(cfg, self.rng, bucket)
                self._make_node(next_id, pos, bucket=bucket)
                self.sources.append(next_id)
                next_id += 1
        ids = sorted(self.nodes)
        pos = np.array([self.nodes[i].pos for i in ids])
        ncx, ncy = cfg.nc_position
        for idx, nid in enumerate(ids):
            node = self.nodes[nid]
            d = np.hypot(pos[:, 0] - pos[idx, 0], pos[:, 1] - pos[idx, 1])
            near = (d <= cfg.comm_range) & (np.arange(len(ids)) != idx)
            node.neighbors = [ids[j] for j in np.flatnonzero(near)]
            node.dist_nc = math.hypot(node.pos[0] - ncx, node.pos[1] - ncy)
        self._sorted_ids = ids

    # geometry and energy helpers ------------------------------------------

    def dist(self, a: int, b: int) -> float:
        pa, pb = self.nodes[a].pos, self.nodes[b].pos
        return math.hypot(pa[0] - pb[0], pa[1] - pb[1])

    def harvest(self, node: NodeState) -> None:
        """Settle harvesting credit up to the current instant."""
        now = self.queue.now
        if node.alive and now > node.last_harvest:
            secs = self.slots.harvest_seconds(node.last_harvest, now)
            if secs > 0.0:
                node.account.credit(secs * self.cfg.harvest_rate)
        if now > node.last_harvest:
            node.last_harvest = now

    def feed_estimator(self, node: NodeState, sender_id: int, noise_db: float) -> None:
        key = (node.node_id, sender_id)
        p = self._pmean.get(key)
        if p is None:
            d = self.dist(node.node_id, sender_id)
            # co-located nodes exchange no meaningful power reading
            p = self.channel.mean_rx_power(d * MM) if d > 0 else 0.0
            self._pmean[key] = p
        if p == 0.0:
            return
        est = node.estimators.get(sender_id)
        if est is None:
            cfg = self.cfg
            est = LinkQualityEstimator(batch_size=cfg.kf_batch, o0=cfg.kf_o0,
                                       k=cfg.kf_k, h=cfg.kf_h, q=cfg.kf_q,
                                       z=cfg.kf_z, db_mode=cfg.kf_db_mode)
            node.estimators[sender_id] = est
        if noise_db != 0.0:
            p *= 10.0 ** (noise_db / 10.0)
        est.add_sample(p)

    def link_quality(self, node: NodeState, other_id: int) -> float:
        est = node.estimators.get(other_id)
        return est.quality() if est is not None else 0.5

    # transmission ---------------------------------------------------------

    def transmit(self, sender: NodeState, kind: MessageKind, targets, frame=None,
                 *, copies: int | None = None, bucket=None, req=None, pkt=None,
                 stab=None, base=None) -> None:
        """Send one burst to `targets` and schedule its single arrival event.

        copies defaults to one transmission per target (a unicast fan-out);
        pass copies=1 for radio broadcasts. Optional fields annotate the log
        record for attribution and replay.
        """
        if not targets or not sender.check_alive():
            return
        now = self.queue.now
        bits = wire_size_bits(kind, self.data_bits)
        n_copies = len(targets) if copies is None else copies
        self.harvest(sender)
        sender.account.debit(transmit_cost(self.e_bit, bits, n_copies))
        sender.check_alive()
        rec = {"ev": "tx", "t": now, "i": self._tx_seq, "n": sender.node_id,
               "k": kind.value, "b": bits, "c": n_copies, "to": list(targets)}
        if bucket is not None:
            rec["bkt"] = bucket
        if req is not None:
            rec["req"] = req
        if pkt is not None:
            rec["pkt"] = pkt
        if stab is not None:
            rec["s"] = stab
        if base is not None:
            rec["base"] = base
        self.log.add(rec)
        self._tx_seq += 1
        dmax = max(self.dist(sender.node_id, t) for t in targets)
        arrival = (now + bits / self.cfg.data_rate
                   + dmax * MM / self.cfg.propagation_speed)
        payload = (sender.node_id, kind, bits, tuple(targets), frame, rec["i"])
        self.queue.push(arrival, self._arrive, payload)

    def _arrive(self, t: float, payload) -> None:
        sender_id, kind, bits, targets, frame, txi = payload
        rxc = self._rxc.get(bits)
        if rxc is None:
            rxc = receive_cost(self.e_bit, bits, self.rx_ratio)
            self._rxc[bits] = rxc
        hello = kind is MessageKind.HELLO
        noise = None
        if hello and self.protocol.uses_link_estimates:
            std = self.cfg.fluctuation_std_db
            if std > 0:
                noise = self.rng.normal(0.0, std, len(targets))
        for i, tid in enumerate(targets):
            node = self.nodes[tid]
            if not node.check_alive():
                self.log.add({"ev": "lost", "t": t, "i": txi, "to": tid, "paid": 0})
                self.protocol.on_tx_failure(sender_id, kind, frame, tid)
                continue
            self.harvest(node)
            node.account.debit(rxc)
            node.last_heard[sender_id] = t
            if not node.check_alive():
                self.log.add({"ev": "lost", "t": t, "i": txi, "to": tid, "paid": 1})
                self.protocol.on_tx_failure(sender_id, kind, frame, tid)
                continue
            if hello:
                if self.protocol.uses_link_estimates:
                    self.feed_estimator(node, sender_id,
                                        0.0 if noise is None else float(noise[i]))
                continue
            self.protocol.on_frame(node, sender_id, kind, frame, t)

    def discover(self, seeker: NodeState, req=None, bucket=None) -> list[tuple[int, float]]:
        """One atomic neighbor discovery round.

        The seeker broadcasts a discovery frame; every alive neighbor pays the
        receive cost; neighbors whose residual energy clears the forwarding
        gate answer with a reply carrying that residual. Returns the id-sorted
        (responder, energy) pairs the seeker heard back. All debits happen at
        the current instant and the whole exchange is one log record.
        """
        if not seeker.check_alive():
            return []
        t = self.queue.now
        self.harvest(seeker)
        seeker.account.debit(self._ndis_tx)
        seeker.check_alive()
        heard = []
        rx_ndis = self._ndis_rx
        nodes = self.nodes
        for v in seeker.neighbors:
            nv = nodes[v]
            if not nv.check_alive():
                continue
            self.harvest(nv)
            nv.account.debit(rx_ndis)
            nv.last_heard[seeker.node_id] = t
            if nv.check_alive():
                heard.append(v)
        responders = []
        n_received = 0
        rx_nfee = self._nfee_rx
        for v in heard:
            nv = nodes[v]
            residual = nv.account.energy
            if residual < self.gate:
                continue
            nv.account.debit(self._nfee_tx)
            nv.check_alive()
            responders.append((v, residual))
            if seeker.check_alive():
                seeker.account.debit(rx_nfee)
                seeker.last_heard[v] = t
                n_received += 1
        rec = {"ev": "disc", "t": t, "n": seeker.node_id, "rx": heard,
               "resp": [[v, e] for v, e in responders], "nrx": n_received}
        if req is not None:
            rec["req"] = req
        if bucket is not None:
            rec["bkt"] = bucket
        self.log.add(rec)
        if not seeker.check_alive():
            return []
        return responders

    # packet bookkeeping ----------------------------------------------------

    def new_packet(self, src: NodeState, t: float) -> DataPacket:
        pid = self._pkt_seq
        self._pkt_seq += 1
        pkt = DataPacket(pid, src.node_id, NC_ID, self.data_bits, t,
                         bucket=src.bucket)
        self.registry[pid] = {"status": "flight", "bucket": src.bucket,
                              "bits": self.data_bits, "reason": None}
        self.log.add({"ev": "gen", "t": t, "pkt": pid, "src": src.node_id,
                      "bits": self.data_bits, "bkt": src.bucket})
        return pkt

    def deliver(self, pkt: DataPacket, t: float) -> bool:
        """Record first delivery of a packet; duplicates return False."""
        ent = self.registry[pkt.packet_id]
        if ent["status"] != "flight":
            return False
        ent["status"] = "delivered"
        self.log.add({"ev": "dlv", "t": t, "pkt": pkt.packet_id,
                      "src": pkt.source, "bits": pkt.bits, "bkt": pkt.bucket})
        return True

    def drop(self, pkt_id: int, reason: str, t: float) -> None:
        """Terminal failure of a packet; later deliveries of copies are ignored."""
        ent = self.registry[pkt_id]
        if ent["status"] != "flight":
            return
        ent["status"] = "dropped"
        ent["reason"] = reason
        self.log.add({"ev": "drop", "t": t, "pkt": pkt_id, "reason": reason,
                      "bkt": ent["bucket"]})

    def note_reason(self, pkt_id: int, reason: str) -> None:
        """Remember why a copy failed without terminating the packet."""
        ent = self.registry[pkt_id]
        if ent["reason"] is None:
            ent["reason"] = reason

    # drivers ---------------------------------------------------------------

    def _generate(self, t: float, src_id: int) -> None:
        node = self.nodes[src_id]
        cfg = self.cfg
        if node.check_alive() and node.generated < cfg.iterations:
            node.generated += 1
            pkt = self.new_packet(node, t)
            self.protocol.on_generate(node, pkt, t)
            nxt = t + cfg.packet_interval
            if nxt <= cfg.sim_time and node.generated < cfg.iterations:
                self.queue.push(nxt, self._generate, src_id)

    def _hello_round(self, t: float, _payload) -> None:
        for nid in self._sorted_ids:
            node = self.nodes[nid]
            if not node.check_alive():
                continue
            targets = [v for v in node.neighbors if self.nodes[v].alive]
            if targets:
                self.transmit(node, MessageKind.HELLO, targets, copies=1)
        nxt = t + self.cfg.hello_period
        if nxt <= self.cfg.sim_time:
            self.queue.push(nxt, self._hello_round, None)

    def kill_node(self, node_id: int, t: float) -> None:
        node = self.nodes[node_id]
        if node.alive:
            node.alive = False
            self.log.add({"ev": "kill", "t": t, "node": node_id})

    def _kill_event(self, t: float, node_id: int) -> None:
        self.kill_node(node_id, t)

    def _kill_main_relay(self, t: float, _payload) -> None:
        """Fault injection: take down a middle relay of the first routed source."""
        for src_id in self.sources:
            entry = self.nodes[src_id].route_table.get(NC_ID)
            if entry is None:
                continue
            relays = entry.active_path().hops[1:-1]
            if relays:
                self.kill_node(relays[len(relays) // 2], t)
                return

    # run -------------------------------------------------------------------

    def run(self) -> EventLog:
        cfg = self.cfg
        self.log.add({"ev": "meta", "protocol": self.protocol.name,
                      "seed": cfg.seed, "config": cfg.digest(),
                      "version": __version__})
        self.log.add({"ev": "topo", "nodes": [
            [n.node_id, n.pos[0], n.pos[1],
             -1 if n.bucket is None else n.bucket, int(n.is_nc)]
            for n in (self.nodes[i] for i in sorted(self.nodes))]})
        if cfg.sim_time <= 0:
            return self.log
        self.queue.push(0.0, self._hello_round, None)
        for src_id in self.sources:
            start = float(self.rng.uniform(0.0, cfg.packet_interval))
            if start <= cfg.sim_time:
                self.queue.push(start, self._generate, src_id)
        for t_kill, nid in cfg.kill_nodes:
            self.queue.push(t_kill, self._kill_event, nid)
        if cfg.kill_main_relay_at is not None:
            self.queue.push(cfg.kill_main_relay_at, self._kill_main_relay, None)
        self.queue.run(until=cfg.sim_time + cfg.drain_grace)
        self._finish()
        return self.log

    def _finish(self) -> None:
        t_end = max(self.queue.now, self.cfg.sim_time)
        self.queue.now = t_end
        counts = {"generated": len(self.registry), "delivered": 0, "dropped": 0}
        for pid, ent in self.registry.items():
            if ent["status"] == "flight":
                self.drop(pid, ent["reason"] or "sim-end", t_end)
            if self.registry[pid]["status"] == "delivered":
                counts["delivered"] += 1
            else:
                counts["dropped"] += 1
        for nid in sorted(self.nodes):
            node = self.nodes[nid]
            self.harvest(node)
            acc = node.account
            self.log.add({"ev": "node_end", "id": nid, "e": acc.energy,
                          "init": acc.initial, "cr": acc.credited,
                          "de": acc.debited, "alive": int(node.alive)})
        self.log.add({"ev": "end", "t": t_end, **counts})


PROTOCOLS = {
    "RMRLS": Rmrls,
    "SFR": SelectiveFlood,
    "RANDOM_NEXT_HOP": RandomNextHop,
}


def run_single(cfg: ScenarioConfig, protocol_name: str) -> EventLog:
    """Run one protocol once under `cfg` and return the event log."""
    try:
        factory = PROTOCOLS[protocol_name]
    except KeyError:
        raise ValueError("unknown protocol %r (choose from %s)"
                         % (protocol_name, ", ".join(sorted(PROTOCOLS))))
    sim = Simulator(cfg, factory)
    return sim.run()
