"""Entropy-weighted link stability scoring and next hop selection.

Candidates are scored on three factors: residual energy (benefit), link
quality (benefit) and distance to the collector (cost). Objective weights come
from the entropy of each factor column, so a factor that barely varies across
the candidates contributes little to the ranking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Candidate:
    """One next hop option as seen by the scoring node."""

    node_id: int
    energy: float
    quality: float
    distance: float

    def __post_init__(self):
        if self.energy < 0:
            raise ValueError("residual energy cannot be negative")
        if not 0.0 < self.quality < 1.0:
            raise ValueError("link quality must lie strictly inside (0, 1)")
        if self.distance <= 0:
            raise ValueError("distance to the collector must be positive")


# column orientation: +1 benefit, -1 cost
FACTOR_SENSE = (1, 1, -1)


def normalize_factors(matrix) -> np.ndarray:
    """Min-max normalize an n x 3 factor matrix column by column.

    Benefit columns map their max to 1 and min to 0; the cost column (distance)
    is inverted. A column with no spread normalizes to all ones.
    """
    b = np.asarray(matrix, dtype=float)
    if b.ndim != 2 or b.shape[1] != 3:
        raise ValueError("factor matrix must be n x 3")
    if b.shape[0] < 1:
        raise ValueError("factor matrix needs at least one row")
    out = np.ones_like(b)
    for j, sense in enumerate(FACTOR_SENSE):
        col = b[:, j]
        lo, hi = col.min(), col.max()
        if hi > lo:
            if sense > 0:
                out[:, j] = (col - lo) / (hi - lo)
            else:
                out[:, j] = (hi - col) / (hi - lo)
    return out


def entropy_weights(normalized) -> tuple[np.ndarray, bool]:
    """Factor weights from column entropies.

    Returns (weights, degenerate). With a single candidate, or when every
    column carries maximum entropy (no information anywhere), the weights fall
    back to the uniform 1/3 split and degenerate is True.
    """
    bn = np.asarray(normalized, dtype=float)
    n, cols = bn.shape
    if n == 1:
        return np.full(cols, 1.0 / cols), True
    sums = bn.sum(axis=0)
    if np.any(sums <= 0):
        # an all-zero column carries no mass; treat it as maximum entropy
        bn = bn.copy()
        bn[:, sums <= 0] = 1.0 / n
        sums = bn.sum(axis=0)
    p = bn / sums
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0, p * np.log(p), 0.0)
    e = -plogp.sum(axis=0) / math.log(n)
    z = 1.0 - e
    total = z.sum()
    if total <= 0:
        return np.full(cols, 1.0 / cols), True
    return z / total, False


def stability_scores(normalized, weights) -> np.ndarray:
    """Weighted sum of normalized factors, one score per candidate."""
    bn = np.asarray(normalized, dtype=float)
    return bn @ np.asarray(weights, dtype=float)


def next_hop_count(n: int, tau: int) -> int:
    """How many next hops a node fans out to, given n candidates."""
    if n < 1:
        raise ValueError("need at least one candidate")
    if tau < 1:
        raise ValueError("flood restriction factor must be at least 1")
    return n if n <= tau else n // tau


def select_next_hops(candidates: list[Candidate], tau: int) -> list[tuple[int, float]]:
    """Pick the m most stable candidates.

    Returns (node_id, score) pairs, best first. Ordering is by score, then by
    link quality, then by the lower node id, so equal inputs always produce the
    same selection. A single candidate bypasses the pipeline with score 1.0.
    """
    if not candidates:
        return []
    if len(candidates) == 1:
        return [(candidates[0].node_id, 1.0)]
    matrix = [(c.energy, c.quality, c.distance) for c in candidates]
    bn = normalize_factors(matrix)
    weights, _ = entropy_weights(bn)
    scores = stability_scores(bn, weights)
    order = sorted(range(len(candidates)),
                   key=lambda i: (-scores[i], -candidates[i].quality,
                                  candidates[i].node_id))
    m = next_hop_count(len(candidates), tau)
    return [(candidates[i].node_id, float(scores[i])) for i in order[:m]]
