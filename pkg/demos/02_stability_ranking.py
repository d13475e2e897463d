"""Score forwarding candidates and restrict the flood with tau.

When a node forwards a route request it ranks its eligible neighbors on
three factors: residual energy, link quality, and distance to travel.
Factor weights are not hand-tuned; they come from the entropy of each
column, so a factor that actually separates the candidates gets more say.
The flood is then restricted to the top n // tau of n candidates.

Run with: python3 demos/02_stability_ranking.py
"""

import numpy as np

from nanosim import (Candidate, entropy_weights, next_hop_count,
                     normalize_factors, select_next_hops, stability_scores)


def main():
    candidates = [
        Candidate(node_id=11, energy=3.2e-6, quality=0.91, distance=1.7),
        Candidate(node_id=12, energy=1.1e-6, quality=0.88, distance=0.9),
        Candidate(node_id=13, energy=2.8e-6, quality=0.55, distance=1.2),
        Candidate(node_id=14, energy=0.6e-6, quality=0.72, distance=1.9),
        Candidate(node_id=15, energy=2.0e-6, quality=0.60, distance=0.8),
    ]

    matrix = np.array([[c.energy, c.quality, c.distance] for c in candidates])
    print("Raw factor matrix (energy J, quality, distance mm):")
    print(matrix)
    print()

    normalized = normalize_factors(matrix)
    print("Min-max normalized (distance inverted: shorter is better):")
    print(np.round(normalized, 3))
    print()

    weights, degenerate = entropy_weights(normalized)
    print(f"Entropy weights (energy, quality, distance): {np.round(weights, 4)}")
    print(f"Degenerate (fell back to uniform): {degenerate}")
    print()

    scores = stability_scores(normalized, weights)
    order = np.argsort(-scores)
    print("Stability scores:")
    for idx in order:
        print(f"  node {candidates[idx].node_id}: {scores[idx]:.4f}")
    print()

    for tau in (2, 3, 5):
        m = next_hop_count(len(candidates), tau)
        chosen = select_next_hops(candidates, tau)
        ids = [node_id for node_id, _score in chosen]
        print(f"tau={tau}: forward to {m} of {len(candidates)} -> {ids}")
    print()
    print("Larger tau prunes the flood harder; tau >= n keeps everyone.")


if __name__ == "__main__":
    main()
