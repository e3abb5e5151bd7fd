#!/usr/bin/env python3
"""Exploratory scan of post frequencies (no acceptance thresholds).

Two sweeps:
  1. random graph orders across p, against the small-p asymptotic formula;
  2. csg models with super-exponentially decaying weights t_k = (t / log k)^k,
     whose conjectured post threshold sits near t = pi^2/3; this harness only
     reports counts and trends.

Usage: python scripts/post_threshold_scan.py [n] [replicas]
"""

import math
import sys

from causet.growth import (CsgParams, asymptotic_post_probability, grow,
                           post_frequency, post_mask)
from causet.rng import replica_rng


def rgo_sweep(n: int, replicas: int) -> None:
    print(f"# random graph orders, n={n}, replicas={replicas}")
    print("p,post_frequency,stderr,asymptotic_formula")
    for i, p in enumerate((0.2, 0.3, 0.4, 0.5, 0.6, 0.8)):
        est = post_frequency(p, n, replicas, replica_rng(1000, i))
        print(f"{p},{est.value:.6f},{est.stderr:.6f},"
              f"{asymptotic_post_probability(p):.6f}")


def closed_form_sweep(n: int, replicas: int) -> None:
    threshold = math.pi ** 2 / 3
    print(f"\n# csg models t_k=(t/log k)^k, n={n}, replicas={replicas}, "
          f"conjectured threshold t ~ pi^2/3 = {threshold:.3f}")
    print("t,mean_bulk_posts")
    for i, t in enumerate((1.5, 2.5, threshold, 4.5, 6.0)):
        params = CsgParams.closed_form("(t / log(k)) ** k", t)
        lo, hi = n // 4, 3 * n // 4
        total = 0
        for r in range(replicas):
            state = grow(params, n, replica_rng(2000 + i, r))
            total += sum(1 for x in post_mask(state) if lo <= x < hi)
        print(f"{t:.4f},{total / replicas:.3f}")


def main() -> int:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 400
    replicas = int(sys.argv[2]) if len(sys.argv) > 2 else 10
    rgo_sweep(n, replicas)
    closed_form_sweep(n, replicas)
    return 0


if __name__ == "__main__":
    sys.exit(main())
