"""Scalar Kalman filtering of received signal power and the link quality map.

The estimator tracks one value (received power for a single link) with scalar
transition and measurement models. It can run either on raw watt readings or,
by default, on their dBm transform, which keeps the state well scaled across
the huge dynamic range of terahertz links.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


def received_power(p_tx: float, path_loss: float) -> float:
    """Received power in watts given transmit power and a linear path loss factor."""
    if path_loss <= 0:
        raise ValueError("path loss factor must be positive")
    return p_tx / path_loss


def watts_to_dbm(p: float) -> float:
    if p <= 0:
        raise ValueError("power must be positive to convert to dBm")
    return 10.0 * math.log10(p * 1e3)


def dbm_to_watts(p: float) -> float:
    return 10.0 ** (p / 10.0) / 1e3


@dataclass(frozen=True)
class KalmanState:
    """Posterior state of the scalar filter plus its fixed model parameters."""

    estimate: float
    covariance: float
    theta: float  # link quality midpoint, set from the calibration batch
    k: float = 1.0  # state transition scalar
    h: float = 1.0  # measurement scalar
    q: float = 0.01  # process noise variance
    z: float = 1.0  # measurement noise variance

    def __post_init__(self):
        if self.covariance < 0:
            raise ValueError("covariance must be nonnegative")
        if self.q < 0 or self.z < 0:
            raise ValueError("noise variances must be nonnegative")


def kf_init(samples, o0: float = 1.0, k: float = 1.0, h: float = 1.0,
            q: float = 0.01, z: float = 1.0) -> KalmanState:
    """Calibrate a filter from the first batch of measurements.

    The initial estimate is the batch mean; the link quality midpoint theta is
    the population standard deviation of the batch; the covariance starts at o0.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("calibration needs at least one sample")
    if o0 < 0:
        raise ValueError("initial covariance must be nonnegative")
    n = len(samples)
    mean = sum(samples) / n
    var = sum((s - mean) ** 2 for s in samples) / n
    return KalmanState(estimate=mean, covariance=o0, theta=math.sqrt(var),
                       k=k, h=h, q=q, z=z)


def kf_predict(state: KalmanState) -> tuple[float, float]:
    """Prior estimate and covariance for the next step."""
    est = state.k * state.estimate
    cov = state.k * state.covariance * state.k + state.q
    return est, cov


def kf_update(est_prior: float, cov_prior: float, measurement: float,
              h: float = 1.0, z: float = 1.0) -> tuple[float, float, float]:
    """Fold one measurement into the prior; returns (estimate, covariance, gain)."""
    if cov_prior < 0:
        raise ValueError("prior covariance must be nonnegative")
    denom = h * cov_prior * h + z
    if denom <= 0:
        raise ValueError("degenerate update: both prior covariance and noise are zero")
    gain = cov_prior * h / denom
    est = est_prior + gain * (measurement - h * est_prior)
    cov = (1.0 - gain * h) * cov_prior
    return est, cov, gain


def kf_step(state: KalmanState, measurement: float) -> KalmanState:
    """One predict/update cycle."""
    est_prior, cov_prior = kf_predict(state)
    est, cov, _ = kf_update(est_prior, cov_prior, measurement, state.h, state.z)
    return KalmanState(estimate=est, covariance=cov, theta=state.theta,
                       k=state.k, h=state.h, q=state.q, z=state.z)


def link_quality(estimate: float, theta: float) -> float:
    """Sigmoid map of the power estimate to a (0, 1) quality figure."""
    x = estimate - theta
    # split to avoid overflow in exp for very poor links
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


class LinkQualityEstimator:
    """Per-link wrapper: batches the calibration samples, then filters.

    Feed raw received powers in watts; with db_mode (the default) they are
    tracked in dBm. Until the calibration batch is full the estimator reports
    the uninformative quality 0.5.
    """

    def __init__(self, batch_size: int = 5, o0: float = 1.0, k: float = 1.0,
                 h: float = 1.0, q: float = 0.01, z: float = 1.0,
                 db_mode: bool = True):
        if batch_size < 1:
            raise ValueError("batch size must be at least 1")
        self.batch_size = batch_size
        self.o0 = o0
        self.k = k
        self.h = h
        self.q = q
        self.z = z
        self.db_mode = db_mode
        self._batch: list[float] = []
        self._quality: float | None = 0.5
        self.state: KalmanState | None = None

    def add_sample(self, p_watts: float) -> None:
        value = watts_to_dbm(p_watts) if self.db_mode else p_watts
        if self.state is None:
            self._batch.append(value)
            if len(self._batch) >= self.batch_size:
                self.state = kf_init(self._batch, o0=self.o0, k=self.k,
                                     h=self.h, q=self.q, z=self.z)
                self._batch = []
                self._quality = None
        else:
            self.state = kf_step(self.state, value)
            self._quality = None

    @property
    def ready(self) -> bool:
        return self.state is not None

    def quality(self) -> float:
        if self._quality is None:
            self._quality = link_quality(self.state.estimate, self.state.theta)
        return self._quality
