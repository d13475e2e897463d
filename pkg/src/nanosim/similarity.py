"""Route similarity scoring and backup path selection.

Similarity between a main path and a candidate is a weighted sum of how many
nodes and how many links the two share. The backup route is the candidate
least similar to the main route, so a single node failure is as unlikely as
possible to take both down.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import RoutePath

COUNT_MODES = ("exclude-source", "intersection")


@dataclass(frozen=True)
class SimilarityParams:
    """Weights for the node and link overlap terms.

    count_mode picks how shared nodes are counted: "exclude-source" discounts
    the source hop both paths necessarily share (the default), "intersection"
    counts the raw overlap.
    """

    k: float = 0.5
    sigma: float = 0.5
    count_mode: str = "exclude-source"

    def __post_init__(self):
        if self.k < 0 or self.sigma < 0:
            raise ValueError("similarity weights must be nonnegative")
        if self.count_mode not in COUNT_MODES:
            raise ValueError("unknown count mode %r" % (self.count_mode,))


def shared_node_count(main: RoutePath, candidate: RoutePath,
                      count_mode: str = "exclude-source") -> int:
    """Number of nodes the two paths share, per the configured counting mode."""
    common = len(set(main.hops) & set(candidate.hops))
    if count_mode == "exclude-source" and main.hops[0] == candidate.hops[0]:
        common -= 1
    return common


def shared_link_count(main: RoutePath, candidate: RoutePath) -> int:
    """Number of links the two paths share, direction ignored."""
    return len(main.links() & candidate.links())


def similarity(main: RoutePath, candidate: RoutePath,
               params: SimilarityParams = SimilarityParams()) -> float:
    """Overlap score of candidate against main; 0 means sharing endpoints only.

    The node term is clamped at zero so that candidates sharing nothing beyond
    the unavoidable endpoints always score exactly 0.
    """
    n = shared_node_count(main, candidate, params.count_mode)
    l = shared_link_count(main, candidate)
    return params.k * max(0, n - 2) + params.sigma * l


def select_backup(main: RoutePath, candidates: list[RoutePath],
                  params: SimilarityParams = SimilarityParams()) -> RoutePath | None:
    """The candidate least similar to main.

    Ties fall to the higher total stability, then the shorter path, then the
    lexicographically smallest hop sequence. Returns None when there are no
    candidates.
    """
    best = None
    best_key = None
    for cand in candidates:
        key = (similarity(main, cand, params), -cand.total_stability,
               cand.hop_count, cand.hops)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    return best
