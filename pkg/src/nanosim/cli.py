"""Command line runner: scenarios in, metrics table and logs out.

`nanosim run` executes each requested (protocol, seed) pair, writes one
newline-delimited JSON event log per run, aggregates the per-bucket metrics
across seeds into metrics.csv, and records the whole invocation in
manifest.json. Repeating an invocation reproduces every output byte for
byte. Set NANOSIM_LOG_LEVEL (error, warn, info, debug) to control chatter
on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .config import ScenarioConfig, apply_overrides, load_config
from .engine import PROTOCOLS, run_single
from .metrics import aggregate, run_metrics, write_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PROTOCOL = 3
EXIT_OUTPUT = 4

_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING,
           "info": logging.INFO, "debug": logging.DEBUG}

log = logging.getLogger("nanosim")


def parse_seeds(text: str) -> list[int]:
    """Seed lists come as '7', '1,4,9' or an inclusive range '1..10'."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        first, last = int(lo), int(hi)
        if last < first:
            raise ValueError("seed range %r runs backwards" % text)
        return list(range(first, last + 1))
    return [int(part) for part in text.split(",") if part.strip()]


def parse_protocols(text: str) -> list[str]:
    names = []
    for part in text.split(","):
        name = part.strip().upper().replace("-", "_")
        if name:
            names.append(name)
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nanosim",
        description="Discrete-event nanosensor network simulation runner.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run scenarios and write metrics")
    run.add_argument("--config", metavar="PATH",
                     help="scenario file; built-in defaults when omitted")
    run.add_argument("--protocols", default="RMRLS,SFR,RANDOM_NEXT_HOP",
                     metavar="LIST", help="comma-separated protocol names")
    run.add_argument("--seeds", default="1", metavar="RANGE",
                     help="e.g. 3 or 1,4,9 or 1..10")
    run.add_argument("--out", required=True, metavar="DIR",
                     help="output directory (created if missing)")
    run.add_argument("--sim-time", type=float, default=None, metavar="SECONDS",
                     help="override the configured simulation length")
    run.add_argument("--override", action="append", default=[],
                     metavar="KEY=VALUE",
                     help="set any config key, e.g. protocol.tau=3 (repeatable)")
    return parser


def _fail(code: int, message: str) -> int:
    print("nanosim: " + message, file=sys.stderr)
    return code


def cmd_run(args) -> int:
    if args.config is not None:
        try:
            cfg = load_config(args.config)
        except (OSError, ValueError) as exc:
            return _fail(EXIT_CONFIG,
                         "cannot read config %s: %s" % (args.config, exc))
    else:
        cfg = ScenarioConfig()
    try:
        cfg = apply_overrides(cfg, args.override)
    except ValueError as exc:
        return _fail(EXIT_CONFIG, "bad override: %s" % exc)
    if args.sim_time is not None:
        try:
            cfg = cfg.replace(sim_time=args.sim_time)
        except ValueError as exc:
            return _fail(EXIT_CONFIG, "bad sim time: %s" % exc)

    protocols = parse_protocols(args.protocols)
    if not protocols:
        return _fail(EXIT_PROTOCOL, "no protocols requested")
    for name in protocols:
        if name not in PROTOCOLS:
            return _fail(EXIT_PROTOCOL,
                         "invalid protocol %r (choose from %s)"
                         % (name, ", ".join(sorted(PROTOCOLS))))
    try:
        seeds = parse_seeds(args.seeds)
    except ValueError as exc:
        return _fail(EXIT_CONFIG, "bad seed list: %s" % exc)
    if not seeds:
        return _fail(EXIT_CONFIG, "no seeds requested")

    run_dir = os.path.join(args.out, "runs")
    try:
        os.makedirs(run_dir, exist_ok=True)
        probe = os.path.join(args.out, ".write-probe")
        with open(probe, "w") as fh:
            fh.write("ok")
        os.remove(probe)
    except OSError as exc:
        return _fail(EXIT_OUTPUT,
                     "output directory %s not writable: %s" % (args.out, exc))

    per_seed: dict[str, list] = {name: [] for name in protocols}
    runs = []
    for name in protocols:
        for seed in seeds:
            run_cfg = cfg.replace(seed=seed)
            log.info("running %s seed %d", name, seed)
            event_log = run_single(run_cfg, name)
            log_path = os.path.join(run_dir, "%s_seed%d.ndjson" % (name, seed))
            event_log.write(log_path)
            per_seed[name].append(run_metrics(event_log.records, run_cfg))
            tail = event_log.records[-1]
            runs.append({"protocol": name, "seed": seed,
                         "log": os.path.relpath(log_path, args.out),
                         "generated": tail.get("generated", 0),
                         "delivered": tail.get("delivered", 0),
                         "dropped": tail.get("dropped", 0)})
            log.info("finished %s seed %d: %d/%d delivered", name, seed,
                     tail.get("delivered", 0), tail.get("generated", 0))

    rows = aggregate(per_seed, cfg.buckets)
    write_csv(os.path.join(args.out, "metrics.csv"), rows)
    manifest = {"version": __version__, "config_digest": cfg.digest(),
                "config": cfg.to_dict(), "protocols": protocols,
                "seeds": seeds, "runs": runs}
    with open(os.path.join(args.out, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return EXIT_OK


def main(argv=None) -> int:
    level = os.environ.get("NANOSIM_LOG_LEVEL", "warn").lower()
    logging.basicConfig(level=_LEVELS.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    return EXIT_OK  # unreachable: argparse enforces a command


if __name__ == "__main__":
    sys.exit(main())
