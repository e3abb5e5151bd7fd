"""Classical sequential growth: one new maximal element per step.

At a state with m elements a subset S of them is selected with probability
proportional to t_{|S|}; the newcomer goes above the down-closure of S.
Weight sequences can grow super-exponentially, so normalizers are handled
in log space; the verifier operations also run exactly over Fractions for
rational weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateWeights, InvalidP, NotNaturallyLabelled
from .poset import LabelledPoset, Poset, _iter_bits, bits_to_matrix, matrix_to_bits


@dataclass(frozen=True)
class CsgParams:
    """Growth weight sequence (t_0, t_1, ...), t_0 > 0, all t_k >= 0.

    kinds:
      explicit                -- finite list, padded with zeros
      transitive_percolation  -- t_k = (p/(1-p))^k
      closed_form             -- t_k = expr(k, t) for k >= 2, with the
                                 convention t_0 = 1, t_1 = t (the asymptotic
                                 form fixes only large k)
    """

    kind: str
    t: tuple = ()
    p: float = 0.0
    expr: str = ""
    scale: float = 0.0

    @classmethod
    def explicit(cls, weights: Sequence) -> "CsgParams":
        ws = tuple(weights)
        if not ws or ws[0] <= 0:
            raise DegenerateWeights("t_0 must be positive")
        if any(w < 0 for w in ws):
            raise DegenerateWeights("weights must be nonnegative")
        return cls(kind="explicit", t=ws)

    @classmethod
    def transitive_percolation(cls, p: float) -> "CsgParams":
        if not 0.0 < p < 1.0:
            raise InvalidP(f"p must be in (0,1), got {p}")
        return cls(kind="transitive_percolation", p=float(p))

    @classmethod
    def closed_form(cls, expr: str, scale: float) -> "CsgParams":
        params = cls(kind="closed_form", expr=expr, scale=float(scale))
        params.weight(5)  # fail fast on unparsable expressions
        return params

    def weight(self, k: int):
        """t_k; exact (int/Fraction) for explicit rational weights."""
        if self.kind == "explicit":
            return self.t[k] if k < len(self.t) else 0
        if self.kind == "transitive_percolation":
            return (self.p / (1.0 - self.p)) ** k
        if k == 0:
            return 1.0
        if k == 1:
            return self.scale
        env = {"k": float(k), "t": self.scale, "log": math.log, "exp": math.exp,
               "sqrt": math.sqrt, "pi": math.pi}
        try:
            val = float(eval(self.expr, {"__builtins__": {}}, env))  # noqa: S307
        except Exception as exc:
            raise DegenerateWeights(f"cannot evaluate {self.expr!r} at k={k}: {exc}")
        if val < 0 or math.isnan(val):
            raise DegenerateWeights(f"weight t_{k} = {val} invalid")
        return val

    def log_weight(self, k: int) -> float:
        if self.kind == "transitive_percolation":
            return k * math.log(self.p / (1.0 - self.p))
        w = self.weight(k)
        return math.log(w) if w > 0 else -math.inf

    def max_index(self, m: int) -> int:
        """Largest k <= m with possibly nonzero weight."""
        if self.kind == "explicit":
            return min(m, len(self.t) - 1)
        return m

    def to_json(self) -> dict:
        if self.kind == "explicit":
            return {"kind": "explicit", "t": [float(w) for w in self.t]}
        if self.kind == "transitive_percolation":
            return {"kind": "transitive_percolation", "p": self.p}
        return {"kind": "closed_form", "expr": self.expr, "t": self.scale}

    @classmethod
    def from_json(cls, obj: dict) -> "CsgParams":
        kind = obj.get("kind")
        if kind == "explicit":
            return cls.explicit(obj["t"])
        if kind == "transitive_percolation":
            return cls.transitive_percolation(obj["p"])
        if kind == "closed_form":
            return cls.closed_form(obj["expr"], obj["t"])
        raise DegenerateWeights(f"unknown params kind {kind!r}")


def transitive_percolation_params(p: float) -> CsgParams:
    return CsgParams.transitive_percolation(p)


def _log_binomial(m: int, k: int) -> float:
    return math.lgamma(m + 1) - math.lgamma(k + 1) - math.lgamma(m - k + 1)


def log_normalizer(m: int, params: CsgParams) -> float:
    """log sum_k C(m,k) t_k, via logsumexp."""
    terms = [_log_binomial(m, k) + params.log_weight(k)
             for k in range(params.max_index(m) + 1)]
    top = max(terms)
    if top == -math.inf:
        raise DegenerateWeights("all weights vanish")
    return top + math.log(math.fsum(math.exp(v - top) for v in terms))


def select_set_probability(m: int, s_size: int, params: CsgParams) -> float:
    """Probability that the selected set equals one PARTICULAR set of the
    given size: t_{|S|} / sum_k C(m,k) t_k."""
    if s_size > m:
        raise ValueError("set cannot exceed the current state")
    return math.exp(params.log_weight(s_size) - log_normalizer(m, params))


def _size_distribution(m: int, params: CsgParams) -> np.ndarray:
    logs = np.array([_log_binomial(m, k) + params.log_weight(k)
                     for k in range(params.max_index(m) + 1)])
    top = logs.max()
    if top == -math.inf:
        raise DegenerateWeights("all weights vanish")
    w = np.exp(logs - top)
    return w / w.sum()


class GrowthState:
    """Labelled poset under construction plus its arrival order.

    down[i] is the bitmask of elements strictly below i; arrival is a linear
    extension by construction (each element is maximal when it arrives).
    """

    __slots__ = ("down", "labels", "arrival", "_label_set")

    def __init__(self):
        self.down: list[int] = []
        self.labels: list[float] = []
        self.arrival: list[int] = []
        self._label_set: set[float] = set()

    @property
    def n(self) -> int:
        return len(self.down)

    def add_element(self, down_mask: int, rng: np.random.Generator) -> None:
        label = float(rng.random())
        while label in self._label_set:  # a.s. never loops
            label = float(rng.random())
        self._label_set.add(label)
        self.arrival.append(self.n)
        self.down.append(down_mask)
        self.labels.append(label)

    def poset(self) -> Poset:
        return Poset(bits_to_matrix(self.down, self.n).T, validate=False)

    def labelled(self) -> LabelledPoset:
        return LabelledPoset(self.poset(), np.asarray(self.labels))

    def validate_arrival(self) -> None:
        """Replay check: every element maximal at insertion."""
        for i, mask in enumerate(self.down):
            if mask >> i:
                raise ValueError(f"element {i} arrived above a later element")


def csg_step(state: GrowthState, params: CsgParams,
             rng: np.random.Generator) -> GrowthState:
    """One growth transition; mutates and returns the state."""
    m = state.n
    if m == 0:
        state.add_element(0, rng)
        return state
    dist = _size_distribution(m, params)
    k = int(rng.choice(len(dist), p=dist))
    mask = 0
    if k:
        for s in rng.choice(m, size=k, replace=False):
            mask |= state.down[s] | (1 << int(s))
    state.add_element(mask, rng)
    return state


def grow(params: CsgParams, n: int, rng: np.random.Generator) -> GrowthState:
    """n growth steps from the empty order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    state = GrowthState()
    for _ in range(n):
        csg_step(state, params, rng)
    return state


def random_forest(n: int, rng: np.random.Generator,
                  t0: float = 1.0, t1: float = 1.0) -> GrowthState:
    """Sparse csg model t = (t0, t1, 0, ...): every element covers at most one."""
    return grow(CsgParams.explicit((t0, t1)), n, rng)


def random_binary_order(n: int, rng: np.random.Generator,
                        mode: str = "independent") -> GrowthState:
    """Each newcomer goes above (up to) two uniform existing elements.

    mode 'independent': two independent picks, duplicates collapse to one
    (the text does not fix the convention); 'subset': a uniform 2-subset
    whenever m >= 2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    state = GrowthState()
    state.add_element(0, rng)
    for _ in range(1, n):
        m = state.n
        if mode == "independent":
            picks = {int(rng.integers(m)), int(rng.integers(m))}
        elif mode == "subset":
            size = 2 if m >= 2 else 1
            picks = {int(v) for v in rng.choice(m, size=size, replace=False)}
        else:
            raise ValueError(f"unknown mode {mode!r}")
        mask = 0
        for s in picks:
            mask |= state.down[s] | (1 << s)
        state.add_element(mask, rng)
    return state


# ---------------------------------------------------------------------------
# Transitive percolation (random graph orders)
# ---------------------------------------------------------------------------


def random_graph_order(n: int, p: float, rng: np.random.Generator) -> GrowthState:
    """Independent edges i -> j (i < j) with probability p, then transitive
    closure; arrival is the natural index order."""
    if not 0.0 < p < 1.0:
        raise InvalidP(f"p must be in (0,1), got {p}")
    edges = rng.random((n, n)) < p
    direct = [0] * n
    for i in range(n):
        row = 0
        for j in np.nonzero(edges[i, i + 1:])[0]:
            row |= 1 << (i + 1 + int(j))
        direct[i] = row
    reach = [0] * n
    for i in range(n - 1, -1, -1):
        acc = 0
        pending = direct[i]
        while pending:
            low = pending & -pending
            j = low.bit_length() - 1
            acc |= low | reach[j]
            pending &= ~acc  # skip successors already covered
        reach[i] = acc
    state = GrowthState()
    down_rows = matrix_to_bits(bits_to_matrix(reach, n).T)
    state.down = down_rows
    labels = rng.random(n)
    state.labels = [float(v) for v in labels]
    state._label_set = set(state.labels)
    state.arrival = list(range(n))
    return state


def tp_labelled_probability(q: Poset, p: float) -> float:
    """Transitive-percolation likelihood p^c(Q) (1-p)^i(Q) of a naturally
    labelled poset."""
    if not 0.0 < p < 1.0:
        raise InvalidP(f"p must be in (0,1), got {p}")
    if np.tril(q.lt).any():
        raise NotNaturallyLabelled("identity must be a linear extension")
    c = len(q.covering_pairs())
    i = q.incomparable_count()
    return p ** c * (1.0 - p) ** i


# ---------------------------------------------------------------------------
# Transition probabilities and the two structural verifiers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionSpec:
    """Adding a new maximal element above down-set B, covering C subseteq B."""

    q: Poset
    b_set: frozenset[int]
    c_set: frozenset[int]

    def __post_init__(self):
        down = self.q.down_bits
        up = self.q.up_bits
        b_mask = 0
        for i in self.b_set:
            b_mask |= 1 << i
        for i in self.b_set:
            if down[i] & ~b_mask:
                raise ValueError("B is not a down-set")
        maximal = {i for i in self.b_set if not (up[i] & b_mask)}
        if not self.c_set <= maximal:
            raise ValueError("C must consist of maximal elements of B")


def _weight_above(b: int, c: int, params: CsgParams, exact: bool):
    """a = sum_{l=c..b} C(b-c, l-c) t_l, the mass of sets C <= S <= B."""
    if exact:
        return sum(Fraction(math.comb(b - c, l - c)) * Fraction(params.weight(l))
                   for l in range(c, b + 1))
    terms = [_log_binomial(b - c, l - c) + params.log_weight(l)
             for l in range(c, min(b, params.max_index(b)) + 1)]
    if not terms:
        return 0.0
    top = max(terms)
    if top == -math.inf:
        return 0.0
    return math.exp(top) * math.fsum(math.exp(v - top) for v in terms)


def _normalizer(m: int, params: CsgParams, exact: bool):
    if exact:
        total = sum(Fraction(math.comb(m, k)) * Fraction(params.weight(k))
                    for k in range(params.max_index(m) + 1))
        if total <= 0:
            raise DegenerateWeights("normalizer vanished")
        return total
    return math.exp(log_normalizer(m, params))


def transition_probability(spec: TransitionSpec, params: CsgParams,
                           exact: bool = False):
    """Probability of the (B, C) transition from the m-element state."""
    b, c = len(spec.b_set), len(spec.c_set)
    m = spec.q.n
    a = _weight_above(b, c, params, exact)
    return a / _normalizer(m, params, exact)


def _down_closure_spec(q: Poset, s_mask: int) -> tuple[frozenset[int], frozenset[int]]:
    up = q.up_bits
    b_set = frozenset(_iter_bits(s_mask))
    c_set = frozenset(i for i in b_set if not (up[i] & s_mask))
    return b_set, c_set


def down_set_transition_probability(q: Poset, s_mask: int, params: CsgParams,
                                    exact: bool = False):
    """p(Q; S): probability the newcomer lands exactly above down-set S."""
    b_set, c_set = _down_closure_spec(q, s_mask)
    return transition_probability(TransitionSpec(q, b_set, c_set), params, exact)


def check_general_covariance(q: Poset, params: CsgParams,
                             perturbation: float = 0.0,
                             exact: bool = False) -> float:
    """Max relative deviation of path probabilities across the linear
    extensions of Q; 0 means covariant.

    A nonzero perturbation multiplies each step probability by
    (1 + perturbation)^(element * step), an order-dependent factor that a
    covariant rule must not contain; it serves as a negative control.
    """
    if np.tril(q.lt).any():
        raise NotNaturallyLabelled("identity must be a linear extension")
    down = q.down_bits
    up = q.up_bits
    b_counts = [q.lt[:, i].sum() for i in range(q.n)]
    c_counts = [sum(1 for j in _iter_bits(down[i]) if not (up[j] & down[i]))
                for i in range(q.n)]
    products = []
    for ext in q.linear_extensions(limit=50_000):
        if exact:
            prob = Fraction(1)
        else:
            prob = 1.0
        for step, elem in enumerate(ext):
            a = _weight_above(int(b_counts[elem]), int(c_counts[elem]), params, exact)
            prob *= a / _normalizer(step, params, exact)
            if perturbation:
                prob *= (1.0 + perturbation) ** (elem * step)
        products.append(prob)
    top = max(products)
    if top <= 0:
        raise DegenerateWeights("state unreachable under these weights")
    spread = (top - min(products)) / top
    return float(spread)


def check_bell_causality(q: Poset, s1: Iterable[int], s2: Iterable[int],
                         params: CsgParams, exact: bool = False) -> float:
    """Residual |p(Q;S1) p(Q';S2) - p(Q;S2) p(Q';S1)| with Q' = Q restricted
    to S1 union S2; identically 0 for csg transition probabilities."""
    m1 = 0
    for i in s1:
        m1 |= 1 << i
    m2 = 0
    for i in s2:
        m2 |= 1 << i
    for mask in (m1, m2):
        if not q.is_down_set(mask):
            raise ValueError("S1 and S2 must be down-sets of Q")
    union = sorted(_iter_bits(m1 | m2))
    pos = {e: i for i, e in enumerate(union)}
    q_prime = q.restrict(union)
    pm1 = 0
    for i in _iter_bits(m1):
        pm1 |= 1 << pos[i]
    pm2 = 0
    for i in _iter_bits(m2):
        pm2 |= 1 << pos[i]
    p_q_s1 = down_set_transition_probability(q, m1, params, exact)
    p_q_s2 = down_set_transition_probability(q, m2, params, exact)
    p_qp_s1 = down_set_transition_probability(q_prime, pm1, params, exact)
    p_qp_s2 = down_set_transition_probability(q_prime, pm2, params, exact)
    return abs(float(p_q_s1 * p_qp_s2 - p_q_s2 * p_qp_s1))


# ---------------------------------------------------------------------------
# Posts
# ---------------------------------------------------------------------------


def post_mask(state: GrowthState) -> list[int]:
    """Indices comparable (above or below) to every other element."""
    n = state.n
    if n == 0:
        return []
    m = bits_to_matrix(state.down, n)  # m[i, j]: j strictly below i
    degree = m.sum(axis=1) + m.sum(axis=0)
    return [int(i) for i in np.nonzero(degree == n - 1)[0]]


def asymptotic_post_probability(p: float) -> float:
    """Small-p asymptotic for the probability that a fixed element of a
    random graph order is a post: 2 pi e^{pi^2/6} p^{-1} e^{-pi^2 / 3p}."""
    return 2.0 * math.pi * math.exp(math.pi ** 2 / 6.0) / p * math.exp(
        -math.pi ** 2 / (3.0 * p))


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    replicas: int


def post_frequency(p: float, n: int, replicas: int,
                   rng: np.random.Generator) -> Estimate:
    """Fraction of bulk-window elements (indices in [n/4, 3n/4)) that are
    posts, averaged over random graph orders.

    The asymptotic statement concerns infinite orders; the bulk window is the
    finite-sample proxy that damps boundary effects.
    """
    if n < 100:
        raise ValueError("n must be >= 100")
    lo, hi = n // 4, 3 * n // 4
    fractions = []
    for _ in range(replicas):
        state = random_graph_order(n, p, rng)
        posts = post_mask(state)
        bulk = sum(1 for i in posts if lo <= i < hi)
        fractions.append(bulk / (hi - lo))
    arr = np.asarray(fractions)
    stderr = float(arr.std(ddof=1) / math.sqrt(replicas)) if replicas > 1 else 0.0
    return Estimate(float(arr.mean()), stderr, replicas)
