"""Scenario configuration: defaults, INI loading and key=value overrides."""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import json
from dataclasses import dataclass, field

from .channel import ChannelModel
from .energy import SlotSchedule, gate_threshold
from .similarity import SimilarityParams

# section layout for the INI form; every field belongs to exactly one section
SECTIONS = {
    "scenario": ("area", "nodes", "nc_x", "nc_y", "comm_range", "buckets",
                 "sources_per_bucket", "packet_bytes", "packet_interval",
                 "sim_time", "iterations", "data_rate", "propagation_speed"),
    "channel": ("freq", "absorption", "tx_power", "fluctuation_std_db"),
    "energy": ("initial_energy", "nc_initial_energy", "battery_factor",
               "e_bit", "rx_ratio", "epsilon", "harvest_rate"),
    "kalman": ("kf_batch", "kf_o0", "kf_k", "kf_h", "kf_q", "kf_z", "kf_db_mode"),
    "protocol": ("tau", "sim_k", "sim_sigma", "similarity_count_mode",
                 "hello_period", "hello_miss_limit", "collection_window",
                 "route_ttl", "max_retries", "discovery_retries", "route_wait",
                 "ack_timeout_factor", "min_ack_timeout"),
    "slots": ("wet", "swipt", "wit"),
    "engine": ("seed", "drain_grace", "kill_main_relay_at"),
}


@dataclass
class ScenarioConfig:
    """Everything one simulation run depends on.

    Field notes:
      * distances are millimetres, times seconds, energies joules.
      * iterations caps how many packets a single source may generate.
      * kill_main_relay_at is a fault-injection hook: at that time the first
        source's active main route loses one relay (see engine).
    """

    # deployment and traffic
    area: float = 10.0
    nodes: int = 200
    nc_x: float = 11.0
    nc_y: float = 5.0
    comm_range: float = 2.0
    buckets: int = 10
    sources_per_bucket: int = 20
    packet_bytes: int = 128
    packet_interval: float = 0.01
    sim_time: float = 120.0
    iterations: int = 1500
    data_rate: float = 1e9
    propagation_speed: float = 3e8

    # channel
    freq: float = 1e12
    absorption: float = 0.1
    tx_power: float = 1e-3
    fluctuation_std_db: float = 1.0

    # energy model
    initial_energy: float = 4e-6
    nc_initial_energy: float = 1.0
    battery_factor: float = 2.0
    e_bit: float = 1.09375e-15
    rx_ratio: float = 0.5
    epsilon: float = 1.0
    harvest_rate: float = 8e-8

    # link estimation
    kf_batch: int = 5
    kf_o0: float = 1.0
    kf_k: float = 1.0
    kf_h: float = 1.0
    kf_q: float = 0.01
    kf_z: float = 1.0
    kf_db_mode: bool = True

    # routing protocol
    tau: int = 2
    sim_k: float = 0.5
    sim_sigma: float = 0.5
    similarity_count_mode: str = "exclude-source"
    hello_period: float = 0.1
    hello_miss_limit: int = 3
    collection_window: float = 0.05
    route_ttl: float = 10.0
    max_retries: int = 5
    discovery_retries: int = 3
    route_wait: float = 0.5
    ack_timeout_factor: float = 4.0
    min_ack_timeout: float = 0.05

    # harvesting slots
    wet: float = 5.0
    swipt: float = 0.01
    wit: float = 0.1

    # engine
    seed: int = 1
    drain_grace: float = 1.0
    kill_main_relay_at: float | None = None

    # programmatic hooks, not part of the INI surface
    initial_energy_overrides: dict = field(default_factory=dict)
    kill_nodes: tuple = ()

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.area <= 0 or self.nodes < 0 or self.comm_range < 0:
            raise ValueError("area must be positive, node count and range nonnegative")
        if self.packet_interval <= 0 or self.sim_time < 0:
            raise ValueError("packet interval must be positive and sim_time nonnegative")
        if self.packet_bytes <= 0:
            raise ValueError("packet size must be positive")
        if self.buckets < 0 or self.sources_per_bucket < 0:
            raise ValueError("bucket counts cannot be negative")
        if self.e_bit <= 0 or self.initial_energy < 0:
            raise ValueError("energy constants must be positive")
        if self.tau < 1:
            raise ValueError("tau must be at least 1")

    # derived quantities -------------------------------------------------

    @property
    def data_bits(self) -> int:
        return self.packet_bytes * 8

    @property
    def battery_capacity(self) -> float:
        return self.battery_factor * self.initial_energy

    @property
    def energy_gate(self) -> float:
        return gate_threshold(self.e_bit, self.epsilon)

    @property
    def nc_position(self) -> tuple[float, float]:
        return (self.nc_x, self.nc_y)

    def channel_model(self) -> ChannelModel:
        return ChannelModel(freq_hz=self.freq, absorption_per_m=self.absorption,
                            tx_power_w=self.tx_power,
                            fluctuation_std_db=self.fluctuation_std_db)

    def slot_schedule(self) -> SlotSchedule:
        return SlotSchedule(wet=self.wet, swipt=self.swipt, wit=self.wit)

    def similarity_params(self) -> SimilarityParams:
        return SimilarityParams(k=self.sim_k, sigma=self.sim_sigma,
                                count_mode=self.similarity_count_mode)

    # serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["kill_nodes"] = [list(k) for k in self.kill_nodes]
        return d

    def digest(self) -> str:
        """Stable hash of the resolved configuration."""
        blob = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def replace(self, **kw) -> "ScenarioConfig":
        return dataclasses.replace(self, **kw)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}


def _parse_value(name: str, raw: str):
    ftype = _FIELD_TYPES.get(name)
    if ftype is None:
        raise ValueError("unknown config key %r" % name)
    raw = raw.strip()
    if ftype == "bool":
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError("boolean key %r got %r" % (name, raw))
    if ftype == "int":
        return int(raw)
    if ftype == "float":
        return float(raw)
    if ftype == "float | None":
        return None if raw.lower() in ("", "none") else float(raw)
    if ftype == "str":
        return raw
    raise ValueError("key %r cannot be set from text" % name)


def load_config(path: str) -> ScenarioConfig:
    """Read an INI scenario file. Unknown sections or keys are an error."""
    parser = configparser.ConfigParser()
    with open(path) as fh:
        try:
            parser.read_file(fh)
        except configparser.Error as exc:
            raise ValueError("malformed config: %s" % exc) from exc
    values = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ValueError("unknown config section %r" % section)
        for key, raw in parser.items(section):
            if key not in SECTIONS[section]:
                raise ValueError("unknown key %r in section %r" % (key, section))
            values[key] = _parse_value(key, raw)
    return ScenarioConfig(**values)


def apply_overrides(config: ScenarioConfig, pairs) -> ScenarioConfig:
    """Apply KEY=VALUE strings; KEY may be bare or section.key qualified."""
    updates = {}
    for pair in pairs:
        if "=" not in pair:
            raise ValueError("override %r is not KEY=VALUE" % pair)
        key, raw = pair.split("=", 1)
        key = key.strip()
        if "." in key:
            section, key = key.split(".", 1)
            if section not in SECTIONS or key not in SECTIONS[section]:
                raise ValueError("unknown override key %r.%r" % (section, key))
        updates[key] = _parse_value(key, raw)
    return config.replace(**updates) if updates else config
