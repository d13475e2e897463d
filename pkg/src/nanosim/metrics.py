"""Turning event logs into per-bucket result tables.

Every metric is recomputed from the raw event log, never read from live
simulator state, so any log on disk can be re-audited.

Energy attribution: a transmission burst tagged with a packet id belongs to
that packet's source bucket; one tagged with a request id belongs to the
requesting source's bucket; discovery rounds follow the request that caused
them. Beacon traffic serves every flow at once and is left out of the
per-bucket split. Attributed energy counts both the transmit debit and the
receive debits it induced (a receiver that was already dead paid nothing,
and the log's loss records say so).
"""

from __future__ import annotations

import csv
import math

import numpy as np

from .config import ScenarioConfig
from .energy import receive_cost, transmit_cost

COLUMNS = ("protocol", "distance_bucket", "energy_per_bit", "delivery_ratio",
           "avg_throughput", "seeds", "energy_per_bit_stderr",
           "delivery_ratio_stderr", "avg_throughput_stderr")

NDIS_BITS = 16
NFEE_BITS = 16


def replay_bucket_energy(records, cfg: ScenarioConfig):
    """Joules attributable to each bucket's traffic, replayed from the log.

    Returns (per-bucket dict, unattributed joules). The unattributed part is
    shared overhead, which with the bundled protocols is beacon traffic.
    """
    e_bit, rho = cfg.e_bit, cfg.rx_ratio
    gen_bucket = {}
    req_bucket = {}
    tx_info = {}
    unpaid = {}
    for rec in records:
        ev = rec["ev"]
        if ev == "gen":
            gen_bucket[rec["pkt"]] = rec["bkt"]
        elif ev == "topo":
            for nid, _x, _y, bkt, _nc in rec["nodes"]:
                if bkt >= 0:
                    req_bucket[nid] = bkt
        elif ev == "lost" and rec["paid"] == 0:
            unpaid[rec["i"]] = unpaid.get(rec["i"], 0) + 1

    def bucket_for(rec):
        if "pkt" in rec:
            return gen_bucket.get(rec["pkt"])
        if "req" in rec:
            return req_bucket.get(rec["req"][0])
        if "bkt" in rec:
            return rec["bkt"]
        return None

    energy = {}
    overhead = 0.0
    for rec in records:
        ev = rec["ev"]
        if ev == "tx":
            cost = transmit_cost(e_bit, rec["b"], rec["c"])
            payers = len(rec["to"]) - unpaid.get(rec["i"], 0)
            cost += payers * receive_cost(e_bit, rec["b"], rho)
        elif ev == "disc":
            cost = (transmit_cost(e_bit, NDIS_BITS, 1)
                    + len(rec["rx"]) * receive_cost(e_bit, NDIS_BITS, rho)
                    + len(rec["resp"]) * transmit_cost(e_bit, NFEE_BITS, 1)
                    + rec["nrx"] * receive_cost(e_bit, NFEE_BITS, rho))
        else:
            continue
        bkt = bucket_for(rec)
        if bkt is None:
            overhead += cost
        else:
            energy[bkt] = energy.get(bkt, 0.0) + cost
    return energy, overhead


def bucket_counts(records):
    """Generated/delivered packet and bit tallies per bucket."""
    out = {}
    for rec in records:
        if rec["ev"] == "gen":
            row = out.setdefault(rec["bkt"], [0, 0, 0])
            row[0] += 1
        elif rec["ev"] == "dlv":
            row = out.setdefault(rec["bkt"], [0, 0, 0])
            row[1] += 1
            row[2] += rec["bits"]
    return {b: tuple(v) for b, v in out.items()}


def energy_per_bit(records, cfg: ScenarioConfig, bucket: int) -> float:
    """Joules per delivered data bit for one bucket; NaN when nothing arrived."""
    energy, _ = replay_bucket_energy(records, cfg)
    counts = bucket_counts(records)
    bits = counts.get(bucket, (0, 0, 0))[2]
    if bits <= 0:
        return math.nan
    return energy.get(bucket, 0.0) / bits


def delivery_ratio(records, bucket: int) -> float:
    """Delivered fraction of the bucket's packets; NaN when none were sent."""
    generated, delivered, _ = bucket_counts(records).get(bucket, (0, 0, 0))
    if generated <= 0:
        return math.nan
    return delivered / generated


def avg_throughput(records, cfg: ScenarioConfig, bucket: int) -> float:
    """Delivered data bits per second of simulated time for one bucket."""
    bits = bucket_counts(records).get(bucket, (0, 0, 0))[2]
    if bits <= 0:
        return 0.0
    return bits / cfg.sim_time


def run_metrics(records, cfg: ScenarioConfig) -> dict[int, dict]:
    """All three metrics for every bucket of one run."""
    energy, _ = replay_bucket_energy(records, cfg)
    counts = bucket_counts(records)
    out = {}
    for bucket in range(1, cfg.buckets + 1):
        generated, delivered, bits = counts.get(bucket, (0, 0, 0))
        joules = energy.get(bucket, 0.0)
        out[bucket] = {
            "generated": generated,
            "delivered": delivered,
            "delivered_bits": bits,
            "energy": joules,
            "energy_per_bit": joules / bits if bits > 0 else math.nan,
            "delivery_ratio": delivered / generated if generated > 0 else math.nan,
            "avg_throughput": bits / cfg.sim_time if bits > 0 else 0.0,
        }
    return out


def _mean_stderr(values):
    """Mean and standard error over the defined (non-NaN) values."""
    arr = np.asarray(values, dtype=float)
    arr = arr[~np.isnan(arr)]
    if arr.size == 0:
        return math.nan, math.nan
    mean = float(arr.mean())
    if arr.size == 1:
        return mean, 0.0
    return mean, float(arr.std(ddof=1) / math.sqrt(arr.size))


def aggregate(per_seed: dict[str, list[dict[int, dict]]], buckets: int):
    """Fold per-seed metric tables into one row per (protocol, bucket).

    per_seed maps protocol name to a list of run_metrics results, one per
    seed. Row order follows the mapping's protocol order, buckets ascending.
    """
    rows = []
    for protocol, runs in per_seed.items():
        for bucket in range(1, buckets + 1):
            row = {"protocol": protocol, "distance_bucket": bucket,
                   "seeds": len(runs)}
            for metric in ("energy_per_bit", "delivery_ratio", "avg_throughput"):
                mean, stderr = _mean_stderr(
                    [run[bucket][metric] for run in runs])
                row[metric] = mean
                row[metric + "_stderr"] = stderr
            rows.append(row)
    return rows


def format_value(value) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return "NaN"
        return format(value, ".12g")
    return str(value)


def write_csv(path, rows) -> None:
    """Write aggregate rows in the fixed column order, 12 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow([format_value(row[c]) for c in COLUMNS])


def read_csv(path) -> list[dict]:
    """Read a metrics table back; numeric fields become floats/ints."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            parsed = {"protocol": row["protocol"],
                      "distance_bucket": int(row["distance_bucket"]),
                      "seeds": int(row["seeds"])}
            for key in ("energy_per_bit", "delivery_ratio", "avg_throughput",
                        "energy_per_bit_stderr", "delivery_ratio_stderr",
                        "avg_throughput_stderr"):
                parsed[key] = float(row[key])
            out.append(parsed)
    return out
