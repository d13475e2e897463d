"""Terahertz channel model: spreading plus molecular absorption loss."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def path_loss(distance_m: float, freq_hz: float = 1e12,
              absorption_per_m: float = 0.1, c: float = 3e8) -> float:
    """Linear path loss factor over a line-of-sight terahertz link.

    Spreading loss (4 pi d f / c)^2 scaled by exponential molecular absorption.
    Distance is in metres; the result is the dimensionless P_t / P_r ratio.
    """
    if distance_m <= 0:
        raise ValueError("path loss needs a positive distance")
    if freq_hz <= 0:
        raise ValueError("carrier frequency must be positive")
    spread = (4.0 * math.pi * distance_m * freq_hz / c) ** 2
    return spread * math.exp(absorption_per_m * distance_m)


@dataclass(frozen=True)
class ChannelModel:
    """Channel parameters bundled with sampling helpers."""

    freq_hz: float = 1e12
    absorption_per_m: float = 0.1
    tx_power_w: float = 1e-3
    fluctuation_std_db: float = 1.0
    c: float = 3e8

    def loss(self, distance_m: float) -> float:
        return path_loss(distance_m, self.freq_hz, self.absorption_per_m, self.c)

    def mean_rx_power(self, distance_m: float) -> float:
        """Noise-free received power in watts."""
        return self.tx_power_w / self.loss(distance_m)

    def sample_rssi(self, distance_m: float, rng: np.random.Generator) -> float:
        """One received power reading in watts with log-normal shadowing."""
        p = self.mean_rx_power(distance_m)
        if self.fluctuation_std_db > 0:
            p *= 10.0 ** (rng.normal(0.0, self.fluctuation_std_db) / 10.0)
        return p
