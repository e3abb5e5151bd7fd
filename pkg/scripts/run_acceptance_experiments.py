#!/usr/bin/env python3
"""Run every acceptance-scale experiment through the CLI layer and write the
records to ./records/.  Mirrors the invocations documented in the README."""

import sys
from pathlib import Path

from causet.experiments import ExperimentConfig, run

RECORDS = Path("records")

INVOCATIONS = [
    ("chain-length-2d", "sprinkle-height",
     {"d": 2, "n": 10_000.0, "replicas": 200, "mode": "binomial"}, 201),
    ("m4-scaling-2k", "sprinkle-height",
     {"geometry": "diamond", "d": 4, "n": 2_000.0, "replicas": 30,
      "mode": "poisson"}, 210),
    ("m4-scaling-8k", "sprinkle-height",
     {"geometry": "diamond", "d": 4, "n": 8_000.0, "replicas": 30,
      "mode": "poisson"}, 211),
    ("m4-scaling-30k", "sprinkle-height",
     {"geometry": "diamond", "d": 4, "n": 30_000.0, "replicas": 30,
      "mode": "poisson"}, 212),
    ("cube3-30k", "sprinkle-height",
     {"geometry": "cube", "d": 3, "n": 30_000.0, "replicas": 30,
      "mode": "binomial"}, 222),
    ("likelihood-covariance-bell", "covariance-check",
     {"likelihood_n": 4, "likelihood_p": 0.3, "likelihood_replicas": 1_000_000},
     808),
    ("ladder", "ladder-invariance",
     {"stems": "a1,a2;a2,a1;a1,a3;a1,a2,a3;a2,a1,a3;a1,a3,a2",
      "replicas": 1_000_000, "dlr_k": 4}, 606),
    ("swappable", "swappable", {"n": 1000, "replicas": 10_000}, 909),
    ("midpoint-d2", "midpoint-dim", {"d": 2, "n": 10_000.0, "replicas": 5}, 919),
    ("midpoint-d3", "midpoint-dim", {"d": 3, "n": 10_000.0, "replicas": 5}, 929),
    ("rgo-limit-500", "rgo-limit",
     {"c": 0.5, "n": 500, "replicas": 6, "samples": 150_000}, 505),
    ("rgo-limit-2000", "rgo-limit",
     {"c": 0.5, "n": 2000, "replicas": 6, "samples": 150_000}, 506),
    ("post-frequency", "post-frequency",
     {"p": 0.5, "n": 2000, "replicas": 50}, 404),
]


def main() -> int:
    RECORDS.mkdir(exist_ok=True)
    for name, command, params, seed in INVOCATIONS:
        out = RECORDS / f"{name}.json"
        record = run(ExperimentConfig(command, params, seed=seed,
                                      output=str(out)))
        headline = record.statistics[0]
        print(f"{name:28s} -> {out}  ({headline.name}={headline.value:.6g}, "
              f"{record.wall_time_s:.1f}s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
