"""Render the three standard result figures from a metrics.csv file.

Reads the per-protocol, per-distance-bucket table a simulation run writes
and emits one SVG per measure: energy per bit, delivery ratio, and average
throughput, each against distance bucket with one line per protocol and
standard-error bars. Output is deterministic: the same CSV always produces
byte-identical files.

Usage: python3 plot_all.py --csv PATH --out DIR
"""

import argparse
import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("svg")
matplotlib.rcParams["svg.hashsalt"] = "figplots"

import matplotlib.pyplot as plt  # noqa: E402


@dataclass(frozen=True)
class FigureSpec:
    """One output figure: which column to plot and how to present it."""

    column: str
    ylabel: str
    filename: str
    log_y: bool = False


FIGURES = (
    FigureSpec("energy_per_bit", "Energy per delivered bit (J/bit)",
               "energy_per_bit.svg", log_y=True),
    FigureSpec("delivery_ratio", "Delivery ratio", "delivery_ratio.svg"),
    FigureSpec("avg_throughput", "Average throughput (bit/s)",
               "avg_throughput.svg"),
)

# fixed house style; unknown protocol names cycle through the same sets
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")
MARKERS = ("o", "s", "^", "D", "v")
LINESTYLES = ("-", "--", "-.", ":", "-")

REQUIRED = ["protocol", "distance_bucket"]
for spec in FIGURES:
    REQUIRED += [spec.column, spec.column + "_stderr"]


def parse_value(text):
    """Float cell contents; blank or unparsable cells become NaN."""
    try:
        return float(text)
    except (TypeError, ValueError):
        return math.nan


def load_rows(csv_path):
    """Read the CSV, check the schema, and group rows by protocol.

    Returns an ordered {protocol: [row, ...]} mapping with rows sorted by
    distance bucket. Exits with a diagnostic if a required column is absent.
    """
    with open(csv_path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [col for col in REQUIRED if col not in header]
        if missing:
            sys.exit(f"error: {csv_path} is missing required column(s): "
                     + ", ".join(missing))
        rows = list(reader)

    by_protocol = {}
    for row in rows:
        by_protocol.setdefault(row["protocol"], []).append(row)
    for proto_rows in by_protocol.values():
        proto_rows.sort(key=lambda r: int(r["distance_bucket"]))
    return by_protocol


def render(spec, by_protocol, out_path):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for i, (protocol, rows) in enumerate(by_protocol.items()):
        x = [int(r["distance_bucket"]) for r in rows]
        y = [parse_value(r[spec.column]) for r in rows]
        err = [parse_value(r[spec.column + "_stderr"]) for r in rows]
        ax.errorbar(x, y, yerr=err, label=protocol,
                    color=COLORS[i % len(COLORS)],
                    marker=MARKERS[i % len(MARKERS)],
                    linestyle=LINESTYLES[i % len(LINESTYLES)],
                    markersize=4, capsize=3, linewidth=1.4)
    if spec.log_y:
        ax.set_yscale("log")
    buckets = sorted({int(r["distance_bucket"])
                      for rows in by_protocol.values() for r in rows})
    if buckets:
        ax.set_xticks(buckets)
    ax.set_xlabel("Distance bucket (1 = closest to collector)")
    ax.set_ylabel(spec.ylabel)
    ax.grid(True, alpha=0.3)
    if by_protocol:
        ax.legend()
    fig.tight_layout()
    # a pinned hashsalt plus no Date stamp keeps re-runs byte-identical
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def plot_all(csv_path, out_dir):
    by_protocol = load_rows(csv_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for spec in FIGURES:
        path = out / spec.filename
        render(spec, by_protocol, path)
        written.append(path)
    return written


def main(argv=None):
    parser = argparse.ArgumentParser(
        description="Plot energy per bit, delivery ratio, and throughput "
                    "figures from a metrics.csv file.")
    parser.add_argument("--csv", required=True, metavar="PATH",
                        help="metrics.csv produced by a simulation run")
    parser.add_argument("--out", required=True, metavar="DIR",
                        help="directory for the SVG files (created if missing)")
    args = parser.parse_args(argv)
    for path in plot_all(args.csv, args.out):
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
