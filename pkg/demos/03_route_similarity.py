"""Pick a backup route that overlaps the main route as little as possible.

A backup is worthless if it dies together with the main path, so candidates
are penalized for every node and every link they share with the main route.
The collector keeps the least similar candidate as the standby.

Run with: python3 demos/03_route_similarity.py
"""

from nanosim import RoutePath, SimilarityParams, select_backup, similarity


def main():
    params = SimilarityParams(k=0.5, sigma=0.5)
    main_path = RoutePath(hops=(7, 3, 5, 0), total_stability=2.1)

    candidates = [
        RoutePath(hops=(7, 3, 8, 0), total_stability=1.9),   # shares link 7-3
        RoutePath(hops=(7, 4, 5, 0), total_stability=1.8),   # shares node 5
        RoutePath(hops=(7, 9, 2, 0), total_stability=1.5),   # node disjoint
        RoutePath(hops=(7, 3, 5, 6, 0), total_stability=2.0),  # near clone
    ]

    print(f"Main route: {main_path.hops}")
    print()
    print("Candidate overlap scores (lower is a better backup):")
    for cand in candidates:
        s = similarity(main_path, cand, params)
        print(f"  {str(cand.hops):<18} similarity = {s:.2f}")
    print()

    backup = select_backup(main_path, candidates, params)
    print(f"Selected backup: {backup.hops}")
    print()
    print("Shared intermediate nodes and shared links both cost; the source")
    print("and collector appear on every path and are not counted, so a")
    print("fully node-disjoint candidate scores zero and always wins.")


if __name__ == "__main__":
    main()
