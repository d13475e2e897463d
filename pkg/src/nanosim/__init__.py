"""Simulation toolkit for in-body wireless nanosensor networks.

The package couples a seeded discrete-event engine with pluggable routing
protocols and a metrics pipeline. Typical entry points:

* `load_config` / `ScenarioConfig` describe an experiment,
* `run_single` executes one protocol under one seed and yields an event log,
* `run_metrics` / `write_csv` turn logs into per-bucket result tables.
"""

from .channel import ChannelModel, path_loss
from .config import ScenarioConfig, apply_overrides, load_config
from .energy import EnergyAccount, SlotSchedule, gate_threshold
from .eventlog import EventLog, iter_log, read_log
from .events import Event, EventQueue
from .kalman import (KalmanState, LinkQualityEstimator, kf_init, kf_predict,
                     kf_step, kf_update, link_quality)
from .metrics import (aggregate, avg_throughput, delivery_ratio,
                      energy_per_bit, run_metrics, write_csv)
from .model import (NC_ID, DataPacket, MessageKind, RoutePath,
                    RoutingTableEntry, distance, wire_size_bits)
from .similarity import SimilarityParams, select_backup, similarity
from .stability import (Candidate, entropy_weights, next_hop_count,
                        normalize_factors, select_next_hops, stability_scores)

__version__ = "0.1.0"

from .engine import PROTOCOLS, Simulator, bucket_of, run_single  # noqa: E402

__all__ = [
    "ChannelModel", "path_loss",
    "ScenarioConfig", "apply_overrides", "load_config",
    "EnergyAccount", "SlotSchedule", "gate_threshold",
    "EventLog", "iter_log", "read_log",
    "Event", "EventQueue",
    "KalmanState", "LinkQualityEstimator", "kf_init", "kf_predict",
    "kf_step", "kf_update", "link_quality",
    "NC_ID", "DataPacket", "MessageKind", "RoutePath",
    "RoutingTableEntry", "distance", "wire_size_bits",
    "SimilarityParams", "select_backup", "similarity",
    "Candidate", "entropy_weights", "next_hop_count",
    "normalize_factors", "select_next_hops", "stability_scores",
    "aggregate", "avg_throughput", "delivery_ratio",
    "energy_per_bit", "run_metrics", "write_csv",
    "PROTOCOLS", "Simulator", "bucket_of", "run_single",
    "__version__",
]
