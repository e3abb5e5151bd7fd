"""Order-invariant measures on the ladder causal set, and finite oracles.

The ladder on elements a_1, a_2, ... has a_i < a_j exactly when j > i + 1,
so while consuming it from below there are never more than two minimal
elements.  The sequential process picks the lower-indexed of two available
minimal elements with probability phi, where phi^2 = 1 - phi; this is the
unique choice making the induced measure on natural extensions
order-invariant.

Elements are 0-based here: index k stands for a_{k+1}.  Ordered stems are
tuples of element indices whose prefixes are all down-sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidStem, TooLarge
from .growth import Estimate
from .poset import LabelledPoset, Poset

PHI = (math.sqrt(5.0) - 1.0) / 2.0

# sequence of element indices whose prefixes are all down-sets
OrderedStem = tuple[int, ...]


@dataclass(frozen=True)
class GoldenRatioProcess:
    """Configuration for the two-minimal-element coin."""

    phi: float = PHI

    def __post_init__(self):
        if abs(self.phi * self.phi + self.phi - 1.0) >= 1e-15:
            raise ValueError("phi must satisfy phi^2 = 1 - phi")


class GoldenNumber:
    """Exact numbers a + b*phi over Fractions, reduced by phi^2 -> 1 - phi.

    Gives noise-free order-invariance identities: 1 - phi and phi^2 are the
    same GoldenNumber, so stem probabilities compare exactly.
    """

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def phi(cls) -> "GoldenNumber":
        return cls(0, 1)

    @classmethod
    def one_minus_phi(cls) -> "GoldenNumber":
        return cls(1, -1)

    def __add__(self, other: "GoldenNumber") -> "GoldenNumber":
        return GoldenNumber(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "GoldenNumber") -> "GoldenNumber":
        return GoldenNumber(self.a - other.a, self.b - other.b)

    def __mul__(self, other: "GoldenNumber") -> "GoldenNumber":
        # (a + b phi)(c + d phi) with phi^2 = 1 - phi
        a, b, c, d = self.a, self.b, other.a, other.b
        return GoldenNumber(a * c + b * d, a * d + b * c - b * d)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, GoldenNumber)
                and self.a == other.a and self.b == other.b)

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * PHI

    def __repr__(self) -> str:
        return f"GoldenNumber({self.a} + {self.b} phi)"


def ladder_poset(n: int) -> Poset:
    """Truncation to the first n elements: i < j iff j >= i + 2."""
    idx = np.arange(n)
    return Poset(idx[None, :] >= idx[:, None] + 2, validate=False)


def is_ladder_stem(stem: OrderedStem) -> bool:
    """True iff every prefix is a down-set of the infinite ladder."""
    seen: set[int] = set()
    for e in stem:
        if e < 0 or e in seen:
            return False
        if any(f not in seen for f in range(e - 1)):  # all below = 0..e-2
            return False
        seen.add(e)
    return True


def ladder_sampler(n_steps: int, rng: np.random.Generator,
                   process: GoldenRatioProcess = GoldenRatioProcess()) -> OrderedStem:
    """First n_steps elements of a random natural extension of the ladder.

    State: with two minimal elements (low, low+1) available, pick low with
    probability phi; once low+1 was taken first, low is forced next.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    out = []
    low = 0
    pending = -1
    for _ in range(n_steps):
        if pending >= 0:
            out.append(pending)
            pending = -1
        elif rng.random() < process.phi:
            out.append(low)
            low += 1
        else:
            out.append(low + 1)
            pending = low
            low += 2
    return tuple(out)


def ladder_sampler_batch(n_steps: int, replicas: int, rng: np.random.Generator,
                         process: GoldenRatioProcess = GoldenRatioProcess()) -> np.ndarray:
    """Vectorized ladder_sampler: (replicas, n_steps) array of elements."""
    out = np.empty((replicas, n_steps), dtype=np.int64)
    low = np.zeros(replicas, dtype=np.int64)
    pending = np.full(replicas, -1, dtype=np.int64)
    for step in range(n_steps):
        forced = pending >= 0
        take_low = ~forced & (rng.random(replicas) < process.phi)
        take_high = ~forced & ~take_low
        out[forced, step] = pending[forced]
        pending[forced] = -1
        out[take_low, step] = low[take_low]
        low[take_low] += 1
        out[take_high, step] = low[take_high] + 1
        pending[take_high] = low[take_high]
        low[take_high] += 2
    return out


def ladder_stem_probability_exact(stem: OrderedStem) -> GoldenNumber:
    """mu(E(stem)) as an exact GoldenNumber, by replaying the process."""
    if not is_ladder_stem(stem):
        raise InvalidStem(f"{stem} is not an ordered stem of the ladder")
    prob = GoldenNumber(1, 0)
    low = 0
    pending = -1
    for e in stem:
        if pending >= 0:
            if e != pending:
                raise InvalidStem(f"{stem}: {pending} was forced")
            pending = -1
        elif e == low:
            prob = prob * GoldenNumber.phi()
            low += 1
        elif e == low + 1:
            prob = prob * GoldenNumber.one_minus_phi()
            pending = low
            low += 2
        else:  # unreachable for a valid stem
            raise InvalidStem(f"{stem}: {e} is not minimal at its step")
    return prob


def stem_probability_mc(stem: OrderedStem, replicas: int,
                        rng: np.random.Generator) -> Estimate:
    """Monte Carlo estimate of mu(E(stem)) with binomial standard error."""
    if not is_ladder_stem(stem):
        raise InvalidStem(f"{stem} is not an ordered stem of the ladder")
    draws = ladder_sampler_batch(len(stem), replicas, rng)
    hits = np.all(draws == np.asarray(stem, dtype=np.int64), axis=1)
    mean = float(hits.mean())
    stderr = math.sqrt(mean * (1.0 - mean) / replicas)
    return Estimate(mean, stderr, replicas)


# ---------------------------------------------------------------------------
# Finite uniform-extension oracles and the nu^k kernels
# ---------------------------------------------------------------------------


def finite_uniform_stem_probability(p: Poset, stem: OrderedStem) -> Fraction:
    """nu^P(E(stem)): share of linear extensions of P starting with stem."""
    placed = 0
    down = p.down_bits
    for e in stem:
        bit = 1 << e
        if placed & bit or down[e] & ~placed:
            raise InvalidStem(f"{stem} is not an ordered stem of P")
        placed |= bit
    rest = [i for i in range(p.n) if not placed >> i & 1]
    numer = p.restrict(rest).count_linear_extensions()
    denom = p.count_linear_extensions()
    return Fraction(numer, denom)


def nu_k(p: Poset, arrival: tuple[int, ...], k: int,
         stem: OrderedStem) -> float:
    """Fraction of linear extensions of the order induced on the first k
    arrivals whose relabelled outcome starts with the given stem.

    arrival must list at least max(k, len(stem)) elements of a natural
    extension of p; positions beyond k are kept fixed.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > 12:
        raise TooLarge("nu^k enumerates extensions; k <= 12 supported")
    need = max(k, len(stem))
    if len(arrival) < need:
        raise ValueError(f"arrival must contain at least {need} elements")
    if any(e >= p.n for e in arrival[:need]) or any(e >= p.n for e in stem):
        raise ValueError("arrival/stem elements must index into p")
    head = list(arrival[:k])
    induced = p.restrict(head)
    m = len(stem)
    matches = 0
    total = 0
    tail = list(arrival[k:m]) if m > k else []
    target = tuple(stem)
    for ext in induced.linear_extensions(limit=500_000):
        total += 1
        permuted = tuple(head[i] for i in ext[:m]) if m <= k else (
            tuple(head[i] for i in ext) + tuple(tail))
        if permuted[:m] == target:
            matches += 1
    return matches / total


def dlr_expectation(n_ambient: int, k: int, stem: OrderedStem, replicas: int,
                    rng: np.random.Generator) -> Estimate:
    """Monte Carlo E_mu[nu^k(E(stem))] over ladder arrivals, with stderr.

    Identical arrival prefixes are grouped before the nu^k enumeration, so
    large replica counts cost little beyond sampling.  For an order-invariant
    measure this expectation equals mu(E(stem)) for every k.
    """
    need = max(k, len(stem))
    batch = ladder_sampler_batch(need, replicas, rng)
    ambient = ladder_poset(n_ambient)
    uniq, counts = np.unique(batch, axis=0, return_counts=True)
    values = np.array([nu_k(ambient, tuple(int(v) for v in row), k, stem)
                       for row in uniq])
    weights = counts / replicas
    mean = float((weights * values).sum())
    var = float((weights * (values - mean) ** 2).sum())
    return Estimate(mean, math.sqrt(var / replicas), replicas)


def exchangeable_antichain(n: int, rng: np.random.Generator) -> LabelledPoset:
    """Antichain with iid uniform labels; the label sequence is exchangeable."""
    if n < 1:
        raise ValueError("n must be >= 1")
    labels = rng.random(n)
    while len(np.unique(labels)) != n:  # a.s. never loops
        labels = rng.random(n)
    return LabelledPoset(Poset.antichain(n), labels)


# ---------------------------------------------------------------------------
# Exploratory: the quadrant question (limit existence open)
# ---------------------------------------------------------------------------


def quadrant_bottom_probability(side: float, intensity: float,
                                rng: np.random.Generator,
                                max_points: int = 24) -> tuple[int, float]:
    """q_N(x) for one sprinkle of [0, side]^2: the probability, under a
    uniform random linear extension, that the minimal point nearest the
    origin is the bottom element.  Returns (point count, q_N).

    Only a finite-truncation trend probe; whether q_N converges is open.
    """
    count = int(rng.poisson(intensity * side * side))
    if count > max_points:
        raise TooLarge(f"{count} points exceeds exact-oracle cap {max_points}")
    if count == 0:
        return 0, float("nan")
    pts = rng.random((count, 2)) * side
    lt = np.all(pts[:, None, :] <= pts[None, :, :], axis=2)
    np.fill_diagonal(lt, False)
    p = Poset(lt, validate=False)
    minimal = p.minimal_elements()
    x = min(minimal, key=lambda i: pts[i, 0] ** 2 + pts[i, 1] ** 2)
    return count, float(finite_uniform_stem_probability(p, (x,)))


def parse_stem(text: str) -> OrderedStem:
    """CLI stem syntax 'a2,a1,a3' -> 0-based element indices (1, 0, 2)."""
    items = [tok.strip() for tok in text.split(",") if tok.strip()]
    out = []
    for tok in items:
        if not tok.startswith("a"):
            raise InvalidStem(f"stem token {tok!r} must look like 'a3'")
        try:
            idx = int(tok[1:])
        except ValueError:
            raise InvalidStem(f"stem token {tok!r} must look like 'a3'")
        if idx < 1:
            raise InvalidStem("stem indices are 1-based")
        out.append(idx - 1)
    if not out:
        raise InvalidStem("empty stem")
    return tuple(out)


def format_stem(stem: OrderedStem) -> str:
    return ",".join(f"a{e + 1}" for e in stem)
