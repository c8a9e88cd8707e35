#!/usr/bin/env python3
"""Wall-time scaling on stars: the cover has size 1, so the reduced graph is
the same for every n and end-to-end time should be dominated by the linear
front end, not by n-dependent search.

Prints one row per star size with the check() wall time (best of --repeats).
"""

import argparse
import time

from cardmso import check, corpus, parse_formula
from cardmso.graph import Graph


def star(n: int) -> Graph:
    return Graph.from_edges(n + 1, [(0, i) for i in range(1, n + 1)])


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="*", default=[8, 16, 32, 64, 128])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    f = parse_formula(corpus.bipartite_equal())
    timings = {}
    print(f"{'n':>6} {'time_ms':>10} {'holds':>6} {'reduced_n':>10}")
    for n in args.sizes:
        g = star(n)
        best = None
        verdict = None
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            verdict = check(g, f)
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
        timings[n] = best
        print(f"{n:>6} {best * 1000:>10.2f} {str(verdict.holds):>6} "
              f"{verdict.stats.reduced_vertices:>10}")
    lo, hi = min(args.sizes), max(args.sizes)
    print(f"time({hi}) / time({lo}) = {timings[hi] / timings[lo]:.2f}")


if __name__ == "__main__":
    main()
