"""Small head-to-head experiment across the three routing protocols.

Runs a reduced scenario over a few seeds for RMRLS, the single-fixed-route
baseline, and the random-next-hop baseline, then prints the aggregated
per-distance-bucket table that `nanosim run` would write as metrics.csv.

Run with: python3 demos/05_compare_protocols.py
"""

from nanosim import ScenarioConfig, aggregate, run_metrics, run_single

PROTOCOLS = ("RMRLS", "SFR", "RANDOM_NEXT_HOP")
SEEDS = (1, 2, 3)


def main():
    cfg_base = dict(nodes=80, buckets=5, sources_per_bucket=3,
                    sim_time=10.0, packet_interval=1.0,
                    hello_period=0.5, route_ttl=30.0)

    per_seed = {name: [] for name in PROTOCOLS}
    for name in PROTOCOLS:
        for seed in SEEDS:
            cfg = ScenarioConfig(seed=seed, **cfg_base)
            log = run_single(cfg, name)
            per_seed[name].append(run_metrics(log.records, cfg))
        print(f"{name}: {len(SEEDS)} seeds done")
    print()

    rows = aggregate(per_seed, buckets=5)
    header = (f"{'protocol':<16} {'bucket':>6} {'delivery':>9} "
              f"{'J/bit':>10} {'bit/s':>10}")
    print(header)
    print("-" * len(header))
    for row in rows:
        print(f"{row['protocol']:<16} {row['distance_bucket']:>6} "
              f"{row['delivery_ratio']:>9.3f} "
              f"{row['energy_per_bit']:>10.2e} "
              f"{row['avg_throughput']:>10.1f}")
    print()
    print("Deliveries saturate on a quiet network; the split shows up in")
    print("the energy column, where the fixed-route baseline burns far more")
    print("per bit on distant buckets as its one path is reused to death.")


if __name__ == "__main__":
    main()
