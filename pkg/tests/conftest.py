"""Shared helpers for the test suite."""

import pytest

from nanosim import ScenarioConfig


@pytest.fixture
def small_cfg():
    """A quick 40-relay scenario for end-to-end checks."""
    return ScenarioConfig(nodes=40, buckets=3, sources_per_bucket=2,
                          sim_time=2.0, packet_interval=0.5, seed=1)


def tiny_cfg(**kw):
    """Minimal two-node-friendly scenario; overrides welcome."""
    base = dict(nodes=0, buckets=1, sources_per_bucket=0, sim_time=0.0,
                seed=1)
    base.update(kw)
    return ScenarioConfig(**base)


def craft_sim(cfg, protocol_factory, layout, sources=()):
    """Simulator over a hand-placed topology.

    layout maps node id to position; ids listed in `sources` generate traffic
    and get a bucket from their collector distance. cfg should request zero
    relays and zero sources, the layout provides them all.
    """
    from nanosim.engine import Simulator, bucket_of

    sim = Simulator(cfg, protocol_factory)
    for nid, pos in sorted(layout.items()):
        sim._make_node(nid, pos)
    ids = sorted(sim.nodes)
    for nid in ids:
        node = sim.nodes[nid]
        node.neighbors = [v for v in ids
                          if v != nid and sim.dist(nid, v) <= cfg.comm_range]
        node.dist_nc = sim.dist(nid, 0)
    for sid in sources:
        node = sim.nodes[sid]
        node.bucket = bucket_of(node.dist_nc) if node.dist_nc > 0 else 1
        sim.sources.append(sid)
    sim._sorted_ids = ids
    return sim
