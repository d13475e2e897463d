"""Baseline forwarding schemes: greedy flood and random next hop."""

import pytest
from scipy import stats

from nanosim.baselines import RandomNextHop, SelectiveFlood
from nanosim.engine import Simulator
from nanosim.model import NC_ID

from conftest import craft_sim, tiny_cfg


def run_sim(cfg, factory):
    sim = Simulator(cfg, factory)
    sim.run()
    return sim


def data_tx(records):
    return [r for r in records if r["ev"] == "tx" and r["k"] == "DATA"]


@pytest.fixture(scope="module", params=[1, 2, 3])
def flood_sim(request):
    cfg = tiny_cfg(nodes=40, buckets=3, sources_per_bucket=2,
                   sim_time=2.0, packet_interval=0.5, seed=request.param)
    return run_sim(cfg, SelectiveFlood)


class TestSelectiveFlood:
    def test_forwards_each_packet_at_most_once(self, flood_sim):
        seen = set()
        for rec in data_tx(flood_sim.log.records):
            key = (rec["n"], rec["pkt"])
            assert key not in seen
            seen.add(key)

    def test_targets_always_advance_toward_collector(self, flood_sim):
        sim = flood_sim
        for rec in data_tx(sim.log.records):
            sender = sim.nodes[rec["n"]]
            if rec["to"] == [NC_ID]:
                assert NC_ID in sender.neighbors
                continue
            for tid in rec["to"]:
                assert sim.nodes[tid].dist_nc < sender.dist_nc

    def test_no_control_traffic(self, flood_sim):
        kinds = {r["k"] for r in flood_sim.log.records if r["ev"] == "tx"}
        assert kinds <= {"DATA", "HELLO"}
        assert not [r for r in flood_sim.log.records if r["ev"] == "disc"]
        assert not flood_sim.nodes[1].estimators

    def test_collector_in_range_gets_it_directly(self):
        cfg = tiny_cfg(sim_time=1.0, packet_interval=0.25)
        sim = craft_sim(cfg, SelectiveFlood,
                        {100: (9.5, 5.0), 1: (8.5, 5.0)}, sources=(100,))
        sim.run()
        txs = data_tx(sim.log.records)
        assert txs and all(r["to"] == [NC_ID] for r in txs)
        gen = [r for r in sim.log.records if r["ev"] == "gen"]
        dlv = [r for r in sim.log.records if r["ev"] == "dlv"]
        assert len(dlv) == len(gen)

    def test_void_region_noted_then_dropped_at_end(self):
        # the only neighbor sits farther from the collector than the source
        cfg = tiny_cfg(sim_time=1.0, packet_interval=0.25)
        sim = craft_sim(cfg, SelectiveFlood,
                        {100: (3.0, 5.0), 1: (2.0, 5.0)}, sources=(100,))
        sim.run()
        assert not data_tx(sim.log.records)
        drops = [r for r in sim.log.records if r["ev"] == "drop"]
        gen = [r for r in sim.log.records if r["ev"] == "gen"]
        assert len(drops) == len(gen) > 0
        assert all(r["reason"] == "void" for r in drops)

    def test_exhausted_neighbors_are_skipped(self):
        gate = tiny_cfg().energy_gate
        cfg = tiny_cfg(sim_time=0.4, packet_interval=0.25,
                       initial_energy_overrides={1: gate * 0.5})
        layout = {100: (3.0, 5.0), 1: (4.5, 5.0), 2: (4.2, 5.9)}
        sim = craft_sim(cfg, SelectiveFlood, layout, sources=(100,))
        sim.run()
        from_src = [r for r in data_tx(sim.log.records) if r["n"] == 100]
        assert from_src and all(r["to"] == [2] for r in from_src)


class TestRandomNextHop:
    def test_single_copy_per_hop(self):
        cfg = tiny_cfg(nodes=40, buckets=3, sources_per_bucket=2,
                       sim_time=2.0, packet_interval=0.5, seed=2)
        sim = run_sim(cfg, RandomNextHop)
        txs = data_tx(sim.log.records)
        assert txs
        for rec in txs:
            assert len(rec["to"]) == 1 and rec["c"] == 1
            sender = sim.nodes[rec["n"]]
            tid = rec["to"][0]
            assert tid == NC_ID or sim.nodes[tid].dist_nc < sender.dist_nc

    def test_void_drop_is_terminal(self):
        cfg = tiny_cfg(sim_time=1.0, packet_interval=0.25)
        sim = craft_sim(cfg, RandomNextHop,
                        {100: (3.0, 5.0), 1: (2.0, 5.0)}, sources=(100,))
        sim.run()
        assert not data_tx(sim.log.records)
        drops = [r for r in sim.log.records if r["ev"] == "drop"]
        gen = [r for r in sim.log.records if r["ev"] == "gen"]
        assert len(drops) == len(gen) > 0
        assert all(r["reason"] == "void" for r in drops)
        # the drop happened at generation time, not at the end of the run
        assert all(d["t"] == g["t"] for d, g in zip(drops, gen))

    def test_choice_is_uniform_over_candidates(self):
        layout = {100: (3.0, 5.0), 1: (4.5, 5.0), 2: (4.2, 5.9),
                  3: (4.2, 4.1), 4: (3.9, 5.0)}
        cfg = tiny_cfg(sim_time=20.0, packet_interval=0.01, iterations=10000)
        sim = craft_sim(cfg, RandomNextHop, layout, sources=(100,))
        sim.run()
        counts = {1: 0, 2: 0, 3: 0, 4: 0}
        for rec in data_tx(sim.log.records):
            if rec["n"] == 100:
                counts[rec["to"][0]] += 1
        total = sum(counts.values())
        assert total > 1500
        result = stats.chisquare(list(counts.values()))
        assert result.pvalue > 0.01
        assert min(counts.values()) > total / 4 * 0.8

    def test_collector_preferred_when_in_range(self):
        cfg = tiny_cfg(sim_time=1.0, packet_interval=0.25)
        sim = craft_sim(cfg, RandomNextHop,
                        {100: (9.5, 5.0), 1: (8.7, 5.0)}, sources=(100,))
        sim.run()
        txs = data_tx(sim.log.records)
        assert txs and all(r["to"] == [NC_ID] for r in txs)
