"""Uniform-flavoured models: intersected linear orders, swappable pairs,
3-layer posets, the labelled-poset count sum, and the step-poson limit of
tuned random graph orders."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoSolution, WrongD
from .growth import random_graph_order
from .poset import Poset, PosetClass, poset_classes

# ---------------------------------------------------------------------------
# Random d-dimensional orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PermutationPair:
    """d linear orders on [n], each stored as a permutation (element at rank)."""

    perms: tuple

    def __post_init__(self):
        n = len(self.perms[0])
        for p in self.perms:
            if sorted(p) != list(range(n)):
                raise ValueError("each order must be a permutation of range(n)")

    @property
    def n(self) -> int:
        return len(self.perms[0])

    @property
    def d(self) -> int:
        return len(self.perms)

    @classmethod
    def random(cls, n: int, d: int, rng: np.random.Generator) -> "PermutationPair":
        return cls(tuple(tuple(int(v) for v in rng.permutation(n)) for _ in range(d)))

    def positions(self) -> np.ndarray:
        """(d, n) array: positions[r][i] = rank of element i in order r."""
        pos = np.empty((self.d, self.n), dtype=np.int64)
        for r, perm in enumerate(self.perms):
            pos[r, list(perm)] = np.arange(self.n)
        return pos

    def intersection(self) -> Poset:
        pos = self.positions()
        lt = np.ones((self.n, self.n), dtype=bool)
        for r in range(self.d):
            lt &= pos[r][:, None] < pos[r][None, :]
        return Poset(lt, validate=False)


def random_kd_order(n: int, d: int, rng: np.random.Generator) -> Poset:
    """Intersection of d iid uniform linear orders: x < y iff x precedes y
    in all d of them."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    return PermutationPair.random(n, d, rng).intersection()


def swappable_pairs(pp: PermutationPair) -> int:
    """Pairs consecutive in both orders and incomparable in the intersection
    (for d=2: consecutive in both and oppositely ordered)."""
    if pp.d != 2:
        raise WrongD("swappable pairs defined for d = 2")
    pos = pp.positions()
    first = np.asarray(pp.perms[0])
    u, v = first[:-1], first[1:]  # consecutive in order 0
    adjacent = np.abs(pos[1, u] - pos[1, v]) == 1
    disagree = (pos[1, u] > pos[1, v])  # order 0 says u before v
    return int((adjacent & disagree).sum())


def swap_in_both(pp: PermutationPair, u: int, v: int) -> PermutationPair:
    """Swap two (adjacent) elements in both orders."""
    perms = []
    for perm in pp.perms:
        lst = list(perm)
        iu, iv = lst.index(u), lst.index(v)
        lst[iu], lst[iv] = lst[iv], lst[iu]
        perms.append(tuple(lst))
    return PermutationPair(tuple(perms))


def swappable_pair_indices(pp: PermutationPair) -> list[tuple[int, int]]:
    pos = pp.positions()
    first = np.asarray(pp.perms[0])
    out = []
    for u, v in zip(first[:-1], first[1:]):
        if abs(pos[1, u] - pos[1, v]) == 1 and pos[1, u] > pos[1, v]:
            out.append((int(u), int(v)))
    return out


# ---------------------------------------------------------------------------
# Layered posets
# ---------------------------------------------------------------------------


def three_layer_random(n: int, rng: np.random.Generator) -> Poset:
    """Random 3-layer poset: |A1| = |A3| = round(n/4), middle the rest;
    adjacent-layer relations independent with probability 1/2, all of
    A1 x A3 present.  The relation is transitive as built; validated anyway."""
    if n < 4:
        raise ValueError("n must be >= 4")
    n1 = round(n / 4)
    n3 = n1
    n2 = n - n1 - n3
    lt = np.zeros((n, n), dtype=bool)
    a1 = slice(0, n1)
    a2 = slice(n1, n1 + n2)
    a3 = slice(n1 + n2, n)
    lt[a1, a2] = rng.random((n1, n2)) < 0.5
    lt[a2, a3] = rng.random((n2, n3)) < 0.5
    lt[a1, a3] = True
    return Poset(lt, validate=True)


def mirsky_layers(p: Poset) -> list[list[int]]:
    """Canonical candidate layering: repeatedly peel minimal elements."""
    down = p.down_bits
    layers: list[list[int]] = []
    removed = 0
    remaining = set(range(p.n))
    while remaining:
        layer = [i for i in remaining if not (down[i] & ~removed)]
        layers.append(layer)
        for i in layer:
            removed |= 1 << i
        remaining -= set(layer)
    return layers


def _layering_valid(p: Poset, layers: list[list[int]]) -> bool:
    level = {}
    for li, layer in enumerate(layers):
        if not layer:
            return False
        for e in layer:
            level[e] = li
    for i in range(p.n):
        for j in range(p.n):
            if p.lt[i, j] and level[i] >= level[j]:  # condition (i)
                return False
    for li in range(len(layers) - 2):  # condition (ii): A_i below A_{i+2}
        for x in layers[li]:
            for y in layers[li + 2]:
                if not p.lt[x, y]:
                    return False
    return True


def is_k_layer(p: Poset, k: int, brute_force_limit: int = 2 * 10 ** 6) -> bool:
    """True iff some partition into k layers satisfies the layer conditions.

    Checks the minimal-element peeling first (sound for the generators in
    this package); for small posets a brute-force partition search backs it
    up, so the answer is only approximate for large posets whose peeling
    fails but some exotic layering exists.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    peeled = mirsky_layers(p)
    if len(peeled) == k and _layering_valid(p, peeled):
        return True
    if k ** p.n <= brute_force_limit:
        for assignment in itertools.product(range(k), repeat=p.n):
            layers: list[list[int]] = [[] for _ in range(k)]
            for e, li in enumerate(assignment):
                layers[li].append(e)
            if _layering_valid(p, layers):
                return True
        return False
    return False


def poset_count_estimate(n: int) -> int:
    """Raw value of the asymptotic labelled-poset count sum
    sum_s C(n,s) 2^{(s+1)(n-s)}, exactly in arbitrary precision.

    Asymptotic only: it approximates the true count C_n for large n and is
    not equal to it at small n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return sum(math.comb(n, s) * 2 ** ((s + 1) * (n - s)) for s in range(n + 1))


# ---------------------------------------------------------------------------
# Step poson and the tuned random-graph-order limit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SemiorderPoson:
    """Step kernel W(x, y) = 1 iff y > x + c; samples are semiorders."""

    c: float

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise ValueError("c must be in (0, 1)")

    def w(self, x: float, y: float) -> float:
        return 1.0 if y > x + self.c else 0.0


def sample_from_poson(w: SemiorderPoson, n: int, rng: np.random.Generator,
                      return_latents: bool = False):
    """n iid uniform latent values; x < y iff latent(y) > latent(x) + c.

    The latents are a unit-interval representation, so every sample is a
    semiorder and transitivity holds by construction."""
    if n < 1:
        raise ValueError("n must be >= 1")
    latents = rng.random(n)
    lt = latents[None, :] > latents[:, None] + w.c
    p = Poset(lt, validate=False)
    return (p, latents) if return_latents else p


def solve_rgo_density_parameter(c: float, n: int) -> float:
    """p with p^-1 log(p^-1) = c n, the tuning that holds the comparable-pair
    density steady; bisection on (0, 1/e]."""
    target = c * n
    if target < math.e:
        raise NoSolution(f"c*n = {target:.4g} < e: no p in the tuned regime")
    lo, hi = 1e-12, 1.0 / math.e

    def f(p: float) -> float:
        return math.log(1.0 / p) / p - target

    for _ in range(200):
        mid = math.sqrt(lo * hi)  # bisect in log space
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)


def classify_subsets(p: Poset, size: int, samples: int,
                     rng: np.random.Generator,
                     classes: list[PosetClass] | None = None) -> np.ndarray:
    """Monte Carlo densities of every isomorphism class of the given size
    among uniform size-subsets of P.  Returns one density per class."""
    if p.n < size:
        raise ValueError("poset smaller than the subset size")
    if classes is None:
        classes = poset_classes(size)
    wanted = [k for k in classes if k.size == size]
    perms = list(itertools.permutations(range(size)))
    bitweights = np.array([1 << (i * size + j) for i in range(size)
                           for j in range(size)], dtype=np.int64)
    key_to_slot = {k.key: i for i, k in enumerate(wanted)}

    # iid draws with collision resampling = uniform distinct tuples
    idx = rng.integers(0, p.n, size=(samples, size))
    while True:
        srt = np.sort(idx, axis=1)
        bad = (np.diff(srt, axis=1) == 0).any(axis=1)
        if not bad.any():
            break
        idx[bad] = rng.integers(0, p.n, size=(int(bad.sum()), size))
    sub = p.lt[idx[:, :, None], idx[:, None, :]]  # (samples, size, size)
    canon = None
    for perm in perms:
        perm = list(perm)
        enc = (sub[:, perm][:, :, perm].reshape(samples, -1).astype(np.int64)
               @ bitweights)
        canon = enc if canon is None else np.minimum(canon, enc)
    counts = np.zeros(len(wanted), dtype=np.int64)
    values, value_counts = np.unique(canon, return_counts=True)
    for val, cnt in zip(values, value_counts):
        counts[key_to_slot[int(val)]] += cnt
    return counts / samples


@dataclass
class DensityRow:
    class_id: int
    size: int
    representative_relations: str
    t_rgo: float
    t_rgo_stderr: float
    t_poson: float
    t_poson_stderr: float
    gap: float
    stderr: float


@dataclass
class RgoLimitResult:
    c: float
    n: int
    tuned_p: float
    rows: list[DensityRow]
    semiorder_pass_rate: float
    h_density: float
    l_density: float


def _h_l_keys() -> tuple[int, int]:
    from .poset import canonical_key, three_plus_one, two_plus_two

    return canonical_key(two_plus_two()), canonical_key(three_plus_one())


def rgo_semiorder_limit_experiment(n: int, c: float, replicas: int,
                                   samples: int, rng: np.random.Generator,
                                   max_size: int = 4) -> RgoLimitResult:
    """Densities of all classes of size <= max_size in tuned random graph
    orders, against samples of the step poson with the same c.

    Reports the per-class gap and the densities of the forbidden suborders
    H = 2+2 and L = 3+1, which should fall toward 0 as n grows."""
    p = solve_rgo_density_parameter(c, n)
    classes = poset_classes(max_size)
    poson = SemiorderPoson(c)
    per_size_rgo = {s: [] for s in range(1, max_size + 1)}
    per_size_poson = {s: [] for s in range(1, max_size + 1)}
    semiorder_hits = 0
    for _ in range(replicas):
        rgo = random_graph_order(n, p, rng).poset()
        pos = sample_from_poson(poson, n, rng)
        if pos.is_semiorder():
            semiorder_hits += 1
        for s in range(1, max_size + 1):
            per_size_rgo[s].append(classify_subsets(rgo, s, samples, rng, classes))
            per_size_poson[s].append(classify_subsets(pos, s, samples, rng, classes))
    rows = []
    h_key, l_key = _h_l_keys()
    h_density = l_density = 0.0
    for s in range(1, max_size + 1):
        rgo_mat = np.vstack(per_size_rgo[s])
        poson_mat = np.vstack(per_size_poson[s])
        wanted = [k for k in classes if k.size == s]
        for col, cls in enumerate(wanted):
            t_rgo = float(rgo_mat[:, col].mean())
            t_pos = float(poson_mat[:, col].mean())
            se_rgo = (float(rgo_mat[:, col].std(ddof=1) / math.sqrt(replicas))
                      if replicas > 1 else 0.0)
            se_pos = (float(poson_mat[:, col].std(ddof=1) / math.sqrt(replicas))
                      if replicas > 1 else 0.0)
            gap_se = math.hypot(se_rgo, se_pos)
            rel = ";".join(f"{i}<{j}" for i, j in
                           sorted(cls.representative.covering_pairs())) or "-"
            rows.append(DensityRow(cls.class_id, s, rel, t_rgo, se_rgo,
                                   t_pos, se_pos, t_rgo - t_pos, gap_se))
            if cls.key == h_key:
                h_density = t_rgo
            if cls.key == l_key:
                l_density = t_rgo
    return RgoLimitResult(c, n, p, rows, semiorder_hits / replicas,
                          h_density, l_density)


def poson_two_chain_density(c: float) -> float:
    """t(2-chain; W) for the step poson: both latents farther than c apart."""
    return (1.0 - c) ** 2
