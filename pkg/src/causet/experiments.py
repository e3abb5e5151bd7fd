"""Named experiments, their parameter schemas, and reproducible records.

Every experiment is a pure function of (params, seed).  Records echo the
full config so that `replay` can rerun them and compare statistics for
bit-identical values (floats compared through 17-significant-digit form).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ReplayMismatch, SchemaError, UnknownCommand
from .growth import (CsgParams, asymptotic_post_probability, check_bell_causality,
                     check_general_covariance, grow, post_frequency, post_mask,
                     random_graph_order)
from .invariance import (dlr_expectation, format_stem,
                         ladder_stem_probability_exact, parse_stem,
                         stem_probability_mc)
from .poset import Poset, natural_posets, poset_classes
from .rng import map_replicas, replica_rng, summarize
from .sprinkle import (SprinkledSet, midpoint_dimension_stat, sprinkle_cube,
                       sprinkle_diamond, unit_volume_diamond)
from .uniform import (PermutationPair, SemiorderPoson, classify_subsets,
                      random_kd_order, rgo_semiorder_limit_experiment,
                      sample_from_poson, swappable_pairs, three_layer_random)


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    params: dict
    seed: int
    output: str | None = None
    fmt: str = "json"


@dataclass(frozen=True)
class Statistic:
    name: str
    value: float
    stderr: float = 0.0
    replicas: int = 1


@dataclass
class ExperimentRecord:
    command: str
    params: dict
    seed: int
    version: str
    statistics: list[Statistic]
    tables: dict = field(default_factory=dict)
    wall_time_s: float = 0.0

    def statistic(self, name: str) -> Statistic:
        for s in self.statistics:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_json(self) -> str:
        obj = {
            "toolkit": "causet",
            "version": self.version,
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "statistics": [asdict(s) for s in self.statistics],
            "tables": self.tables,
            "wall_time_s": self.wall_time_s,
        }
        return json.dumps(obj, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentRecord":
        obj = json.loads(text)
        return cls(command=obj["command"], params=obj["params"], seed=obj["seed"],
                   version=obj["version"],
                   statistics=[Statistic(**s) for s in obj["statistics"]],
                   tables=obj.get("tables", {}),
                   wall_time_s=obj.get("wall_time_s", 0.0))


REQUIRED = object()

# command -> {param: (parser, default)}
SCHEMAS: dict[str, dict] = {
    "sprinkle-height": {"geometry": (str, "cube"), "d": (int, 2),
                        "n": (float, REQUIRED), "replicas": (int, 50),
                        "mode": (str, "binomial")},
    "csg-grow": {"params": (dict, REQUIRED), "n": (int, REQUIRED),
                 "replicas": (int, 20)},
    "covariance-check": {"max_size": (int, 4), "param_seqs": (int, 5),
                         "perturbation": (float, 0.01),
                         "bell_instances": (int, 200),
                         "likelihood_n": (int, 0), "likelihood_p": (float, 0.3),
                         "likelihood_replicas": (int, 100_000)},
    "ladder-invariance": {"stems": (str, REQUIRED), "replicas": (int, 100_000),
                          "dlr_k": (int, 0), "dlr_n": (int, 8)},
    "swappable": {"n": (int, 1000), "replicas": (int, 10_000)},
    "rgo-limit": {"c": (float, 0.5), "n": (int, 500), "replicas": (int, 5),
                  "samples": (int, 100_000), "max_size": (int, 4)},
    "post-frequency": {"p": (float, 0.5), "n": (int, 2000), "replicas": (int, 50)},
    "midpoint-dim": {"d": (int, 2), "n": (float, 10_000.0), "replicas": (int, 5),
                     "geometry": (str, "cube"), "mode": (str, "poisson")},
    "density-table": {"model": (str, REQUIRED), "n": (int, 500),
                      "samples": (int, 50_000), "replicas": (int, 5),
                      "p": (float, 0.3), "c": (float, 0.5), "d": (int, 2),
                      "max_size": (int, 4)},
}


def validate_params(command: str, raw: dict) -> dict:
    if command not in SCHEMAS:
        raise UnknownCommand(f"unknown command {command!r}")
    schema = SCHEMAS[command]
    unknown = set(raw) - set(schema)
    if unknown:
        raise SchemaError(f"unknown parameters for {command}: {sorted(unknown)}")
    out = {}
    for name, (parser, default) in schema.items():
        if name in raw:
            try:
                value = raw[name]
                out[name] = value if parser is dict else parser(value)
                if parser is dict and not isinstance(value, dict):
                    raise TypeError("expected a JSON object")
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"parameter {name}: {exc}")
        elif default is REQUIRED:
            raise SchemaError(f"missing required parameter {name!r} for {command}")
        else:
            out[name] = default
    if out.get("replicas", 1) < 1:
        raise SchemaError("replicas must be >= 1")
    return out


# ---------------------------------------------------------------------------
# Experiment bodies
# ---------------------------------------------------------------------------


def _sprinkle_one(geometry: str, d: int, n: float, mode: str, rng) -> tuple[int, int]:
    if geometry == "cube":
        s = sprinkle_cube(d, n, mode, rng)
    elif geometry == "diamond":
        region = unit_volume_diamond(d)
        if mode == "binomial":
            pts = _binomial_diamond_points(region, int(round(n)), rng)
            s = SprinkledSet(region, pts, float(n))
        else:
            s = sprinkle_diamond(d, region.a, region.b, n, rng)
    else:
        raise SchemaError(f"unknown geometry {geometry!r}")
    return s.height(), s.size


def _binomial_diamond_points(region, count: int, rng) -> np.ndarray:
    """Exactly `count` iid uniform points on the diamond, by rejection."""
    out = []
    have = 0
    while have < count:
        s = sprinkle_diamond(region.d, region.a, region.b,
                             max(count - have, 64) * 2.0, rng)
        take = min(count - have, s.size)
        out.append(s.points[:take])
        have += take
    return np.vstack(out)


def run_sprinkle_height(params: dict, seed: int):
    d, n = params["d"], params["n"]
    results = map_replicas(
        lambda rng, i: _sprinkle_one(params["geometry"], d, n, params["mode"], rng),
        params["replicas"], seed)
    heights = [h for h, _ in results]
    sizes = [c for _, c in results]
    mean, std, sem = summarize(heights)
    stats = [
        Statistic("mean_height_edges", mean, sem, params["replicas"]),
        Statistic("mean_chain_vertices", mean + 1.0, sem, params["replicas"]),
        Statistic("std_height", std, 0.0, params["replicas"]),
        Statistic("scaled_height", mean / n ** (1.0 / d), sem / n ** (1.0 / d),
                  params["replicas"]),
        Statistic("mean_points", float(np.mean(sizes)), 0.0, params["replicas"]),
    ]
    return stats, {}


def run_csg_grow(params: dict, seed: int):
    cfg = CsgParams.from_json(params["params"])
    n = params["n"]

    def one(rng, i):
        state = grow(cfg, n, rng)
        p = state.poset()
        posts = len(post_mask(state))
        pairs = n * (n - 1) / 2
        return p.height(), p.comparable_count() / pairs if pairs else 0.0, posts / n

    rows = map_replicas(one, params["replicas"], seed)
    h_mean, _, h_sem = summarize([r[0] for r in rows])
    c_mean, _, c_sem = summarize([r[1] for r in rows])
    p_mean, _, p_sem = summarize([r[2] for r in rows])
    stats = [
        Statistic("mean_height_edges", h_mean, h_sem, params["replicas"]),
        Statistic("comparable_fraction", c_mean, c_sem, params["replicas"]),
        Statistic("post_fraction", p_mean, p_sem, params["replicas"]),
    ]
    return stats, {}


def run_covariance_check(params: dict, seed: int):
    rng = replica_rng(seed)
    max_size = params["max_size"]
    posets = [q for m in range(1, max_size + 1) for q in natural_posets(m)]
    sequences = [CsgParams.explicit(tuple(rng.uniform(0.05, 3.0, size=5)))
                 for _ in range(params["param_seqs"])]
    max_dev = 0.0
    for cfg in sequences:
        for q in posets:
            max_dev = max(max_dev, check_general_covariance(q, cfg))
    control = check_general_covariance(Poset.antichain(3), sequences[0],
                                       perturbation=params["perturbation"])
    max_bell = 0.0
    down_sets_cache: dict[int, list[int]] = {}
    for _ in range(params["bell_instances"]):
        qi = int(rng.integers(len(posets)))
        q = posets[qi]
        if qi not in down_sets_cache:
            down_sets_cache[qi] = list(q.down_set_masks())
        masks = down_sets_cache[qi]
        m1 = masks[int(rng.integers(len(masks)))]
        m2 = masks[int(rng.integers(len(masks)))]
        cfg = sequences[int(rng.integers(len(sequences)))]
        s1 = [i for i in range(q.n) if m1 >> i & 1]
        s2 = [i for i in range(q.n) if m2 >> i & 1]
        max_bell = max(max_bell, check_bell_causality(q, s1, s2, cfg))
    stats = [
        Statistic("max_covariance_deviation", max_dev, 0.0, len(posets)),
        Statistic("negative_control_deviation", control, 0.0, 1),
        Statistic("max_bell_residual", max_bell, 0.0, params["bell_instances"]),
        Statistic("posets_checked", float(len(posets)), 0.0, 1),
    ]
    if params["likelihood_n"]:
        sigma, total = tp_likelihood_check(params["likelihood_n"],
                                           params["likelihood_p"],
                                           params["likelihood_replicas"],
                                           replica_rng(seed, 1))
        stats.append(Statistic("max_likelihood_sigma", sigma, 0.0,
                               params["likelihood_replicas"]))
        stats.append(Statistic("likelihood_total_probability", total, 0.0, 1))
    return stats, {}


def tp_likelihood_check(n: int, p: float, replicas: int,
                        rng: np.random.Generator) -> tuple[float, float]:
    """Empirical naturally-labelled poset frequencies from the random-graph
    construction against the closed-form likelihood.

    Returns (max |freq - formula| in binomial sigmas, sum of the formula over
    all naturally labelled posets, which must be 1).
    """
    from .growth import tp_labelled_probability
    from .poset import Poset, encode_relation

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    npairs = len(pairs)
    table = np.empty(1 << npairs, dtype=np.int64)
    code_to_poset: dict[int, Poset] = {}
    for cfg in range(1 << npairs):
        chosen = [pairs[b] for b in range(npairs) if cfg >> b & 1]
        q = Poset.from_relations(n, chosen)
        code = encode_relation(q.lt)
        table[cfg] = code
        code_to_poset[code] = q
    draws = rng.random((replicas, npairs)) < p
    cfgs = draws @ (1 << np.arange(npairs, dtype=np.int64))
    codes = table[cfgs]
    worst = 0.0
    total = 0.0
    for code, q in code_to_poset.items():
        expected = tp_labelled_probability(q, p)
        total += expected
        freq = float((codes == code).mean())
        sigma = math.sqrt(expected * (1.0 - expected) / replicas)
        worst = max(worst, abs(freq - expected) / sigma)
    return worst, total


def run_ladder_invariance(params: dict, seed: int):
    stems = [parse_stem(tok) for tok in params["stems"].split(";") if tok.strip()]
    if not stems:
        raise SchemaError("at least one stem required")
    stats = []
    rows = []
    for i, stem in enumerate(stems):
        rng = replica_rng(seed, i)
        est = stem_probability_mc(stem, params["replicas"], rng)
        exact = float(ladder_stem_probability_exact(stem))
        name = format_stem(stem)
        stats.append(Statistic(f"mu_mc[{name}]", est.value, est.stderr,
                               params["replicas"]))
        stats.append(Statistic(f"mu_exact[{name}]", exact, 0.0, 1))
        row = {"stem": name, "mc": est.value, "stderr": est.stderr, "exact": exact}
        if params["dlr_k"]:
            dlr = dlr_expectation(params["dlr_n"], params["dlr_k"], stem,
                                  params["replicas"], replica_rng(seed, 1000 + i))
            stats.append(Statistic(f"dlr_nu{params['dlr_k']}[{name}]", dlr.value,
                                   dlr.stderr, params["replicas"]))
            row["dlr"] = dlr.value
        rows.append(row)
    return stats, {"stems": rows}


def run_swappable(params: dict, seed: int):
    n = params["n"]
    counts = map_replicas(
        lambda rng, i: swappable_pairs(PermutationPair.random(n, 2, rng)),
        params["replicas"], seed)
    counts = np.asarray(counts)
    mean, _, sem = summarize(counts)
    max_k = 6
    emp = np.array([(counts == k).mean() for k in range(max_k + 1)])
    emp_tail = 1.0 - emp.sum()
    pois = np.array([math.exp(-1.0) / math.factorial(k) for k in range(max_k + 1)])
    pois_tail = 1.0 - pois.sum()
    tv = 0.5 * (np.abs(emp - pois).sum() + abs(emp_tail - pois_tail))
    stats = [
        Statistic("mean_swappable", mean, sem, params["replicas"]),
        Statistic("tv_to_poisson1", float(tv), 0.0, params["replicas"]),
    ]
    table = [{"count": k, "empirical": float(emp[k]), "poisson1": float(pois[k])}
             for k in range(max_k + 1)]
    return stats, {"histogram": table}


def run_rgo_limit(params: dict, seed: int):
    rng = replica_rng(seed)
    result = rgo_semiorder_limit_experiment(
        params["n"], params["c"], params["replicas"], params["samples"], rng,
        max_size=params["max_size"])
    stats = [
        Statistic("tuned_p", result.tuned_p, 0.0, 1),
        Statistic("h_density", result.h_density, 0.0, params["replicas"]),
        Statistic("l_density", result.l_density, 0.0, params["replicas"]),
        Statistic("semiorder_pass_rate", result.semiorder_pass_rate, 0.0,
                  params["replicas"]),
    ]
    table = [asdict(row) for row in result.rows]
    return stats, {"densities": table}


def run_post_frequency(params: dict, seed: int):
    rng = replica_rng(seed)
    est = post_frequency(params["p"], params["n"], params["replicas"], rng)
    formula = asymptotic_post_probability(params["p"])
    stats = [
        Statistic("post_frequency", est.value, est.stderr, est.replicas),
        Statistic("asymptotic_formula", formula, 0.0, 1),
        Statistic("ratio_to_formula", est.value / formula, 0.0, est.replicas),
    ]
    return stats, {}


def run_midpoint_dim(params: dict, seed: int):
    d, n = params["d"], params["n"]

    def one(rng, i):
        if params["geometry"] == "cube":
            s = sprinkle_cube(d, n, params["mode"], rng)
        else:
            region = unit_volume_diamond(d)
            s = sprinkle_diamond(d, region.a, region.b, n, rng)
        return midpoint_dimension_stat(s)

    values = map_replicas(one, params["replicas"], seed)
    mean, _, sem = summarize(values)
    stats = [
        Statistic("midpoint_statistic", mean, sem, params["replicas"]),
        Statistic("target", 2.0 ** (-d), 0.0, 1),
    ]
    return stats, {}


def run_density_table(params: dict, seed: int):
    model = params["model"]
    n, samples, max_size = params["n"], params["samples"], params["max_size"]
    classes = poset_classes(max_size)

    def sample_poset(rng):
        if model == "rgo":
            return random_graph_order(n, params["p"], rng).poset()
        if model == "poson":
            return sample_from_poson(SemiorderPoson(params["c"]), n, rng)
        if model == "kd":
            return random_kd_order(n, params["d"], rng)
        if model == "three-layer":
            return three_layer_random(n, rng)
        raise SchemaError(f"unknown model {model!r}")

    per_size = {s: [] for s in range(1, max_size + 1)}
    comparable = []
    for i in range(params["replicas"]):
        rng = replica_rng(seed, i)
        p = sample_poset(rng)
        comparable.append(p.comparable_count() / (n * (n - 1) / 2))
        for s in range(1, max_size + 1):
            per_size[s].append(classify_subsets(p, s, samples, rng, classes))
    rows = []
    for s in range(1, max_size + 1):
        mat = np.vstack(per_size[s])
        wanted = [k for k in classes if k.size == s]
        for col, cls in enumerate(wanted):
            rel = ";".join(f"{i}<{j}" for i, j in
                           sorted(cls.representative.covering_pairs())) or "-"
            se = (float(mat[:, col].std(ddof=1) / math.sqrt(mat.shape[0]))
                  if mat.shape[0] > 1 else 0.0)
            rows.append({"class_id": cls.class_id, "size": s,
                         "representative_relations": rel,
                         "density": float(mat[:, col].mean()), "stderr": se})
    mean_c, _, sem_c = summarize(comparable)
    stats = [Statistic("comparable_density", mean_c, sem_c, params["replicas"])]
    return stats, {"densities": rows}


RUNNERS = {
    "sprinkle-height": run_sprinkle_height,
    "csg-grow": run_csg_grow,
    "covariance-check": run_covariance_check,
    "ladder-invariance": run_ladder_invariance,
    "swappable": run_swappable,
    "rgo-limit": run_rgo_limit,
    "post-frequency": run_post_frequency,
    "midpoint-dim": run_midpoint_dim,
    "density-table": run_density_table,
}


# ---------------------------------------------------------------------------
# run / replay
# ---------------------------------------------------------------------------


def run(config: ExperimentConfig) -> ExperimentRecord:
    params = validate_params(config.command, config.params)
    start = time.perf_counter()
    stats, tables = RUNNERS[config.command](params, config.seed)
    record = ExperimentRecord(command=config.command, params=params,
                              seed=config.seed, version=__version__,
                              statistics=stats, tables=tables,
                              wall_time_s=time.perf_counter() - start)
    if config.output:
        write_record(record, config.output, config.fmt)
    return record


def write_record(record: ExperimentRecord, path: str, fmt: str = "json") -> None:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        out.write_text(record.to_json())
    elif fmt == "csv":
        import csv as _csv

        with open(out, "w", newline="") as fh:
            if record.tables:
                rows = next(iter(record.tables.values()))
                writer = _csv.DictWriter(fh, fieldnames=list(rows[0]))
                writer.writeheader()
                for row in rows:
                    writer.writerow({k: _fmt17(v) for k, v in row.items()})
            else:
                writer = _csv.writer(fh)
                writer.writerow(["name", "value", "stderr", "replicas"])
                for s in record.statistics:
                    writer.writerow([s.name, _fmt17(s.value), _fmt17(s.stderr),
                                     s.replicas])
    else:
        raise SchemaError(f"unknown format {fmt!r}")


def _fmt17(v) -> str:
    return format(v, ".17g") if isinstance(v, float) else str(v)


def replay(record_path: str) -> ExperimentRecord:
    """Rerun a record's config and require bit-identical statistics."""
    old = ExperimentRecord.from_json(Path(record_path).read_text())
    if old.version != __version__:
        import sys

        print(f"warning: record version {old.version} != toolkit {__version__}; "
              "comparing anyway", file=sys.stderr)
    new = run(ExperimentConfig(command=old.command, params=old.params,
                               seed=old.seed))
    old_stats = {s.name: s for s in old.statistics}
    new_stats = {s.name: s for s in new.statistics}
    if set(old_stats) != set(new_stats):
        raise ReplayMismatch(f"statistic sets differ: {sorted(set(old_stats) ^ set(new_stats))}")
    for name, s_old in old_stats.items():
        s_new = new_stats[name]
        for fld in ("value", "stderr"):
            a, b = getattr(s_old, fld), getattr(s_new, fld)
            if _fmt17(float(a)) != _fmt17(float(b)):
                raise ReplayMismatch(f"{name}.{fld}: recorded {a!r}, replay {b!r}")
    return new
