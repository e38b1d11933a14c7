"""Sample means of random optimum weights against their known limits.

The minimum spanning tree total under uniform edge weights settles near
zeta(3) = 1.2021..., and the bipartite assignment optimum near
pi^2/6 = 1.6449..., as n grows.
"""

import time

from minweight.montecarlo import (
    ASSIGNMENT_LIMIT,
    SPANNING_TREE_LIMIT,
    ExperimentConfig,
    run,
    summarize,
)


def main():
    print("=== Random MST total vs zeta(3) ===")
    for n in (25, 50, 100, 200):
        t0 = time.time()
        records = run(ExperimentConfig(family="trees", n=n, trials=400))
        stats = summarize(r.value for r in records)
        gap = stats.mean - SPANNING_TREE_LIMIT
        print(f"n={n:4d}  mean={stats.mean:.4f} +- {stats.se:.4f}  "
              f"gap={gap:+.4f}  ({time.time() - t0:.2f}s)")
    print(f"limit: {SPANNING_TREE_LIMIT:.6f}")

    print()
    print("=== Random assignment total vs pi^2/6 ===")
    for n in (25, 50, 100):
        records = run(ExperimentConfig(family="matchings", n=n, trials=300))
        stats = summarize(r.value for r in records)
        gap = stats.mean - ASSIGNMENT_LIMIT
        print(f"n={n:4d}  mean={stats.mean:.4f} +- {stats.se:.4f}  gap={gap:+.4f}")
    print(f"limit: {ASSIGNMENT_LIMIT:.6f}")
    print()
    print("The assignment mean approaches its limit from below; the n^-1 "
          "correction is visible at these sizes.")


if __name__ == "__main__":
    main()
