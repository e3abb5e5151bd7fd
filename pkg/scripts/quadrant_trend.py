#!/usr/bin/env python3
"""Trend probe for the open quadrant question: does the probability q_N(x)
that the near-origin minimal point comes first in a uniform linear extension
settle to a nonzero limit as the square grows?

Exact linear-extension counting caps the point budget, so only small windows
are reachable; this script reports the trend and nothing more.

Usage: python scripts/quadrant_trend.py [replicas]
"""

import sys

import numpy as np

from causet.errors import TooLarge
from causet.invariance import quadrant_bottom_probability
from causet.rng import replica_rng


def main() -> int:
    replicas = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    intensity = 1.0
    print(f"# intensity {intensity}, replicas {replicas}")
    print("side,mean_points,mean_qN,stderr")
    for i, side in enumerate((1.5, 2.0, 2.5, 3.0, 3.5, 4.0)):
        values, counts = [], []
        r = 0
        attempts = 0
        while r < replicas and attempts < replicas * 4:
            attempts += 1
            rng = replica_rng(3000 + i, attempts)
            try:
                count, q = quadrant_bottom_probability(side, intensity, rng)
            except TooLarge:
                continue
            if count == 0:
                continue
            values.append(q)
            counts.append(count)
            r += 1
        values = np.asarray(values)
        stderr = values.std(ddof=1) / np.sqrt(len(values)) if len(values) > 1 else 0.0
        print(f"{side},{np.mean(counts):.2f},{values.mean():.5f},{stderr:.5f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
