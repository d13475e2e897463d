"""Reliable multipath routing with entropy-weighted next-hop selection.

The protocol discovers routes on demand. A source with traffic and no route
runs one energy-gated neighbor discovery, scores the responders with the
entropy weight method, and hands a route request to the top scorers. Each
relay repeats the procedure, so the request fans out along a restricted
flood instead of a blind one, accumulating the per-hop stability scores in
its header. The collector gathers arriving copies for a short window, keeps
the path with the highest accumulated stability as the main route and the
least similar alternative as the backup, then returns both in a route reply
that travels the main path in reverse and primes every relay's cache on the
way.

Data rides source routes. Per-hop acknowledgements cover the request leg,
an end-to-end acknowledgement covers data. Failures surface two ways: a
transmission to a dead next hop is noticed immediately, and a neighbor that
has missed several beacon periods is treated as gone. Either way the relay
that noticed reports back with a route error; the source flips to its backup
route when the backup avoids the failed node, and rediscovers otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (NC_ID, DataPacket, MessageKind, RoutePath,
                    RoutingTableEntry)
from .similarity import select_backup
from .stability import Candidate, select_next_hops


class Rreq:
    """Route request: the record grows one hop per forward."""

    __slots__ = ("origin", "req_id", "record", "stabs", "total", "next_s", "bkt")

    def __init__(self, origin, req_id, record, stabs, total, next_s, bkt=None):
        self.origin = origin
        self.req_id = req_id
        self.record = record      # tuple of node ids walked so far
        self.stabs = stabs        # per-hop stability credit, aligned to record
        self.total = total        # sum of stabs
        self.next_s = next_s      # {target id: score the sender computed for it}
        self.bkt = bkt


class Rrep:
    """Route reply, walked backwards along the main path (pos = receiver index)."""

    __slots__ = ("origin", "req_id", "main", "stabs", "total",
                 "backup", "backup_stabs", "backup_total", "pos", "bkt")

    def __init__(self, origin, req_id, main, stabs, total, backup,
                 backup_stabs, backup_total, pos, bkt=None):
        self.origin = origin
        self.req_id = req_id
        self.main = main
        self.stabs = stabs
        self.total = total
        self.backup = backup
        self.backup_stabs = backup_stabs
        self.backup_total = backup_total
        self.pos = pos
        self.bkt = bkt


class Rerr:
    """Route error, walked backwards along the data route toward the source."""

    __slots__ = ("failed", "pkt_id", "route", "pos")

    def __init__(self, failed, pkt_id, route, pos):
        self.failed = failed
        self.pkt_id = pkt_id
        self.route = route
        self.pos = pos


class DataAck:
    """End-to-end delivery confirmation, walked backwards along the route."""

    __slots__ = ("pkt_id", "route", "pos")

    def __init__(self, pkt_id, route, pos):
        self.pkt_id = pkt_id
        self.route = route
        self.pos = pos


@dataclass
class PendingRoute:
    """Source-side state for a route discovery in flight."""
    req_id: int
    packets: list
    retries: int = 0


@dataclass
class Collection:
    """Collector-side gathering of route request copies for one request."""
    paths: list = field(default_factory=list)
    seen: set = field(default_factory=set)


class Rmrls:
    """Protocol driver; one instance serves every node in a simulation."""

    name = "RMRLS"
    uses_link_estimates = True

    def __init__(self, sim):
        self.sim = sim
        self.cfg = sim.cfg

    # traffic entry point ---------------------------------------------------

    def on_generate(self, node, pkt, t):
        self._dispatch(node, pkt, t)

    def _dispatch(self, node, pkt, t):
        """Send now if a route exists, else buffer behind a discovery."""
        entry = self._valid_entry(node, t)
        if entry is not None:
            self._send_data(node, pkt, entry, t)
        elif NC_ID in node.pending_route:
            node.pending_route[NC_ID].packets.append(pkt)
        else:
            self._originate(node, [pkt], t, retries=0)

    def _valid_entry(self, node, t):
        entry = node.route_table.get(NC_ID)
        if entry is None:
            return None
        if entry.expired(t):
            del node.route_table[NC_ID]
            return None
        return entry

    # route discovery -------------------------------------------------------

    def _originate(self, node, packets, t, retries):
        sim = self.sim
        node.request_counter += 1
        req = node.request_counter
        node.seen_requests.add((node.node_id, req))
        responders = sim.discover(node, req=[node.node_id, req],
                                  bucket=node.bucket)
        if not node.check_alive():
            for pkt in packets:
                sim.drop(pkt.packet_id, "source-dead", t)
            return
        if any(v == NC_ID for v, _ in responders):
            # the collector is in range and willing: a one-hop route. The
            # collector hop carries no stability score, matching the 0 every
            # collected path ends with, so cached forwards stay additive.
            entry = RoutingTableEntry(
                destination=NC_ID,
                main=RoutePath((node.node_id, NC_ID)),
                main_stabs=(0.0, 0.0), created=t, ttl=self.cfg.route_ttl)
            node.route_table[NC_ID] = entry
            for pkt in packets:
                self._send_data(node, pkt, entry, t)
            return
        if not responders:
            for pkt in packets:
                sim.drop(pkt.packet_id, "no-candidates", t)
            return
        selected = self._score(node, responders)
        node.pending_route[NC_ID] = PendingRoute(req, list(packets), retries)
        sim.queue.push(t + self.cfg.route_wait, self._route_timeout,
                       (node.node_id, req))
        frame = Rreq(node.node_id, req, (node.node_id,), (0.0,), 0.0,
                     {v: s for v, s in selected}, bkt=node.bucket)
        sim.transmit(node, MessageKind.RREQ, [v for v, _ in selected],
                     frame, req=[node.node_id, req], bucket=node.bucket,
                     stab=[s for _, s in selected], base=0.0)

    def _score(self, node, responders, exclude=()):
        """Entropy-weighted scores for gate-passing responders."""
        sim = self.sim
        cands = [Candidate(v, energy=e, quality=sim.link_quality(node, v),
                           distance=sim.nodes[v].dist_nc)
                 for v, e in responders if v not in exclude]
        if not cands:
            return []
        return select_next_hops(cands, self.cfg.tau)

    def _route_timeout(self, t, payload):
        nid, req = payload
        node = self.sim.nodes[nid]
        pending = node.pending_route.get(NC_ID)
        if pending is None or pending.req_id != req:
            return
        del node.pending_route[NC_ID]
        if not node.check_alive():
            for pkt in pending.packets:
                self.sim.drop(pkt.packet_id, "source-dead", t)
            return
        if pending.retries < self.cfg.discovery_retries:
            self._originate(node, pending.packets, t, pending.retries + 1)
        else:
            for pkt in pending.packets:
                self.sim.drop(pkt.packet_id, "no-route", t)

    # frame dispatch ----------------------------------------------------------

    def on_frame(self, node, sender_id, kind, frame, t):
        if kind is MessageKind.RREQ:
            self._handle_rreq(node, sender_id, frame, t)
        elif kind is MessageKind.RREP:
            self._handle_rrep(node, frame, t)
        elif kind is MessageKind.DATA:
            self._handle_data(node, frame, t)
        elif kind is MessageKind.DATA_ACK:
            self._handle_data_ack(node, frame, t)
        elif kind is MessageKind.RERR:
            self._handle_rerr(node, frame, t)
        # per-hop ACK needs no action beyond the reception itself

    # request leg -------------------------------------------------------------

    def _handle_rreq(self, node, sender_id, frame, t):
        sim = self.sim
        if node.is_nc:
            self._collect(node, sender_id, frame, t)
            return
        if node.node_id in frame.record:
            return  # walked through here already: a loop, stay silent
        key = (frame.origin, frame.req_id)
        if key in node.seen_requests:
            return  # restricted flood: first copy only
        node.seen_requests.add(key)
        sim.transmit(node, MessageKind.ACK, [sender_id],
                     req=[frame.origin, frame.req_id])
        if not node.check_alive():
            return
        my_s = frame.next_s.get(node.node_id, 0.0)
        record = frame.record + (node.node_id,)
        stabs = frame.stabs + (my_s,)
        total = frame.total + my_s
        # a fresh cached route toward the collector short-circuits the flood
        entry = self._valid_entry(node, t)
        if entry is not None:
            nxt = entry.active_path().hops[1]
            if nxt not in record:
                s = entry.next_hop_stability()
                self._forward_rreq(node, frame, record, stabs, total,
                                   [(nxt, s)])
                return
        responders = sim.discover(node, req=[frame.origin, frame.req_id],
                                  bucket=frame.bkt)
        if not node.check_alive():
            return
        if any(v == NC_ID for v, _ in responders):
            self._forward_rreq(node, frame, record, stabs, total,
                               [(NC_ID, 0.0)])
            return
        selected = self._score(node, responders, exclude=set(record))
        if selected:
            self._forward_rreq(node, frame, record, stabs, total, selected)
        # nowhere left to go: this branch of the flood ends here

    def _forward_rreq(self, node, frame, record, stabs, total, selected):
        out = Rreq(frame.origin, frame.req_id, record, stabs, total,
                   {v: s for v, s in selected}, bkt=frame.bkt)
        self.sim.transmit(node, MessageKind.RREQ, [v for v, _ in selected],
                          out, req=[frame.origin, frame.req_id],
                          bucket=frame.bkt, stab=[s for _, s in selected],
                          base=total)

    def _collect(self, node, sender_id, frame, t):
        sim = self.sim
        key = (frame.origin, frame.req_id)
        coll = node.collections.get(key)
        if coll is None:
            coll = Collection()
            node.collections[key] = coll
            sim.queue.push(t + self.cfg.collection_window,
                           self._select_routes, (node.node_id, key, frame.bkt))
        hops = frame.record + (node.node_id,)
        if hops in coll.seen:
            return
        coll.seen.add(hops)
        coll.paths.append((hops, frame.stabs + (0.0,), frame.total))
        sim.log.add({"ev": "collect", "t": t, "req": [frame.origin, frame.req_id],
                     "path": list(hops), "tot": frame.total})
        sim.transmit(node, MessageKind.ACK, [sender_id],
                     req=[frame.origin, frame.req_id])

    def _select_routes(self, t, payload):
        nc_id, key, bkt = payload
        sim = self.sim
        node = sim.nodes[nc_id]
        coll = node.collections.pop(key, None)
        if coll is None or not coll.paths or not node.check_alive():
            return
        by_hops = {hops: (stabs, total) for hops, stabs, total in coll.paths}
        ranked = sorted(coll.paths, key=lambda p: (-p[2], len(p[0]), p[0]))
        main_hops, main_stabs, main_total = ranked[0]
        main = RoutePath(main_hops, main_total)
        others = [RoutePath(h, tot) for h, _, tot in ranked[1:]]
        backup = select_backup(main, others, self.cfg.similarity_params())
        rec = {"ev": "route", "t": t, "req": list(key),
               "main": list(main_hops), "mtot": main_total}
        backup_hops = None
        backup_stabs = ()
        backup_total = 0.0
        if backup is not None:
            backup_hops = backup.hops
            backup_stabs, backup_total = by_hops[backup_hops]
            rec["backup"] = list(backup_hops)
            rec["btot"] = backup_total
        sim.log.add(rec)
        origin, req_id = key
        frame = Rrep(origin, req_id, main_hops, main_stabs, main_total,
                     backup_hops, backup_stabs, backup_total,
                     pos=len(main_hops) - 2, bkt=bkt)
        sim.transmit(node, MessageKind.RREP, [main_hops[frame.pos]], frame,
                     req=[origin, req_id], bucket=bkt)

    # reply leg ---------------------------------------------------------------

    def _handle_rrep(self, node, frame, t):
        sim = self.sim
        pos = frame.pos
        if frame.main[pos] != node.node_id:
            return
        if pos == 0:
            backup = None
            if frame.backup is not None:
                backup = RoutePath(frame.backup, frame.backup_total)
            node.route_table[NC_ID] = RoutingTableEntry(
                destination=NC_ID,
                main=RoutePath(frame.main, frame.total),
                main_stabs=frame.stabs, backup=backup,
                backup_stabs=frame.backup_stabs,
                created=t, ttl=self.cfg.route_ttl)
            pending = node.pending_route.pop(NC_ID, None)
            entry = node.route_table[NC_ID]
            if pending is not None:
                for pkt in pending.packets:
                    self._send_data(node, pkt, entry, t)
            return
        # relays cache the suffix they sit on, so later floods stop early.
        # A fresh entry already in the table wins: a node that requested its
        # own route keeps the backup that came with it instead of trading it
        # for a bare suffix of somebody else's path.
        if self._valid_entry(node, t) is None:
            suffix = frame.main[pos:]
            suffix_stabs = (0.0,) + frame.stabs[pos + 1:]
            node.route_table[NC_ID] = RoutingTableEntry(
                destination=NC_ID,
                main=RoutePath(suffix, sum(frame.stabs[pos + 1:])),
                main_stabs=suffix_stabs, created=t, ttl=self.cfg.route_ttl)
        out = Rrep(frame.origin, frame.req_id, frame.main, frame.stabs,
                   frame.total, frame.backup, frame.backup_stabs,
                   frame.backup_total, pos - 1, bkt=frame.bkt)
        sim.transmit(node, MessageKind.RREP, [frame.main[pos - 1]], out,
                     req=[frame.origin, frame.req_id], bucket=frame.bkt)

    # data leg ----------------------------------------------------------------

    def _send_data(self, node, pkt, entry, t):
        path = entry.active_path()
        nxt = path.hops[1]
        if nxt in node.failed_nodes or self._neighbor_down(node, nxt, t):
            self._source_failure(node, nxt, pkt, t)
            return
        pkt.route = path.hops
        pkt.hop_index = 0
        node.unacked[pkt.packet_id] = pkt
        timeout = max(self.cfg.min_ack_timeout,
                      self.cfg.ack_timeout_factor * self._rtt_estimate(path))
        self.sim.queue.push(t + timeout, self._ack_timeout,
                            (node.node_id, pkt.packet_id, pkt.retries))
        self.sim.transmit(node, MessageKind.DATA, [nxt], pkt,
                          pkt=pkt.packet_id, bucket=pkt.bucket)

    def _rtt_estimate(self, path):
        cfg = self.cfg
        hop = (cfg.data_bits / cfg.data_rate
               + cfg.comm_range * 1e-3 / cfg.propagation_speed)
        return 2.0 * path.hop_count * hop

    def _neighbor_down(self, node, other, t):
        """A neighbor silent for several beacon periods counts as gone."""
        horizon = self.cfg.hello_miss_limit * self.cfg.hello_period
        return (t - node.last_heard.get(other, 0.0)) > horizon

    def _handle_data(self, node, pkt, t):
        sim = self.sim
        if node.node_id == pkt.destination:
            sim.deliver(pkt, t)
            # confirm even a duplicate, the source is still waiting
            ack = DataAck(pkt.packet_id, pkt.route, len(pkt.route) - 2)
            sim.transmit(node, MessageKind.DATA_ACK, [pkt.route[ack.pos]],
                         ack, pkt=pkt.packet_id, bucket=pkt.bucket)
            return
        try:
            i = pkt.route.index(node.node_id)
        except ValueError:
            return  # stale copy of a rerouted packet
        nxt = pkt.route[i + 1]
        if nxt in node.failed_nodes or self._neighbor_down(node, nxt, t):
            self._relay_failure(node, nxt, pkt, i, t)
            return
        pkt.hop_index = i + 1
        sim.transmit(node, MessageKind.DATA, [nxt], pkt,
                     pkt=pkt.packet_id, bucket=pkt.bucket)

    def _handle_data_ack(self, node, frame, t):
        if frame.route[frame.pos] != node.node_id:
            return
        if frame.pos == 0:
            node.unacked.pop(frame.pkt_id, None)
            return
        out = DataAck(frame.pkt_id, frame.route, frame.pos - 1)
        self.sim.transmit(node, MessageKind.DATA_ACK,
                          [frame.route[out.pos]], out, pkt=frame.pkt_id)

    def _ack_timeout(self, t, payload):
        nid, pid, retries_at_send = payload
        node = self.sim.nodes[nid]
        pkt = node.unacked.get(pid)
        if pkt is None or pkt.retries != retries_at_send:
            return
        if not node.check_alive():
            return
        self._retransmit(node, pkt, t)

    def _retransmit(self, node, pkt, t):
        node.unacked.pop(pkt.packet_id, None)
        pkt.retries += 1
        if pkt.retries > self.cfg.max_retries:
            self.sim.drop(pkt.packet_id, "max-retries", t)
            return
        self._dispatch(node, pkt, t)

    # failure handling ----------------------------------------------------------

    def on_tx_failure(self, sender_id, kind, frame, target_id):
        """The engine noticed a frame reached a dead node."""
        if kind is not MessageKind.DATA:
            return
        sim = self.sim
        node = sim.nodes[sender_id]
        t = sim.queue.now
        if not node.check_alive():
            return
        pkt = frame
        if pkt.source == sender_id:
            self._source_failure(node, target_id, pkt, t)
        else:
            try:
                i = pkt.route.index(sender_id)
            except ValueError:
                return
            self._relay_failure(node, target_id, pkt, i, t)

    def _relay_failure(self, node, failed, pkt, i, t):
        sim = self.sim
        node.failed_nodes.add(failed)
        sim.log.add({"ev": "rerr", "t": t, "n": node.node_id,
                     "failed": failed, "pkt": pkt.packet_id})
        if i == 0:
            self._source_repair_and_retry(node, failed, pkt, t)
            return
        self._repair_route(node, failed, t)
        err = Rerr(failed, pkt.packet_id, pkt.route, i - 1)
        sim.transmit(node, MessageKind.RERR, [pkt.route[err.pos]], err,
                     pkt=pkt.packet_id)

    def _handle_rerr(self, node, frame, t):
        if frame.route[frame.pos] != node.node_id:
            return
        node.failed_nodes.add(frame.failed)
        if frame.pos > 0:
            self._repair_route(node, frame.failed, t)
            out = Rerr(frame.failed, frame.pkt_id, frame.route, frame.pos - 1)
            self.sim.transmit(node, MessageKind.RERR, [frame.route[out.pos]],
                              out, pkt=frame.pkt_id)
            return
        pkt = node.unacked.get(frame.pkt_id)
        if pkt is not None:
            self._source_failure(node, frame.failed, pkt, t)
        else:
            self._repair_route(node, frame.failed, t)

    def _source_failure(self, node, failed, pkt, t):
        node.failed_nodes.add(failed)
        self.sim.log.add({"ev": "rerr", "t": t, "n": node.node_id,
                          "failed": failed, "pkt": pkt.packet_id})
        self._source_repair_and_retry(node, failed, pkt, t)

    def _source_repair_and_retry(self, node, failed, pkt, t):
        self._repair_route(node, failed, t)
        self._retransmit(node, pkt, t)

    def _repair_route(self, node, failed, t):
        """Flip to the backup when it dodges the failure, else forget the route."""
        entry = self._valid_entry(node, t)
        if entry is None:
            return
        active = entry.active_path()
        if entry.active == "main":
            if failed in active.hops:
                if entry.backup is not None and failed not in entry.backup.hops:
                    entry.active = "backup"
                    self.sim.log.add({"ev": "switch", "t": t, "n": node.node_id,
                                      "failed": failed,
                                      "to": list(entry.backup.hops)})
                else:
                    del node.route_table[NC_ID]
            elif entry.backup is not None and failed in entry.backup.hops:
                entry.backup = None
                entry.backup_stabs = ()
        else:
            if failed in active.hops:
                del node.route_table[NC_ID]
