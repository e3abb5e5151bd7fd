"""Finite strict partial orders and the exact combinatorics used everywhere else.

Conventions
-----------
* Elements are the indices 0..n-1; ``lt[i, j]`` means i < j strictly.
* ``height`` counts edges: a chain x0 < ... < xh has height h, so an
  antichain has height 0.  Some of the literature counts vertices instead;
  every consumer of this module states which convention it uses.
* The relation is stored densely (full strict order, not just covers).
  Bit-row views (one Python int per row) give O(n^2 / wordsize) transitive
  closure and O(1) comparability tests.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import CycleError, NotComparable, QTooLarge, TooLarge

# Down-set DP state budget; entries beyond this raise TooLarge.
DEFAULT_STATE_BUDGET = 1 << 24


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask: int) -> int:
    return mask.bit_count()


def transitive_closure_bits(rows: list[int]) -> list[int]:
    """Floyd-Warshall closure on bit rows; rows[i] = successor mask of i."""
    n = len(rows)
    out = list(rows)
    for k in range(n):
        bit = 1 << k
        row_k = out[k]
        for i in range(n):
            if out[i] & bit:
                out[i] |= row_k
    return out


def bits_to_matrix(rows: Sequence[int], n: int) -> np.ndarray:
    """Bit rows to a dense boolean matrix (row i = successors of i)."""
    nbytes = (n + 7) // 8
    buf = b"".join(r.to_bytes(nbytes, "little") for r in rows)
    bits = np.unpackbits(np.frombuffer(buf, dtype=np.uint8).reshape(len(rows), nbytes),
                         axis=1, bitorder="little")
    return bits[:, :n].astype(bool)


def matrix_to_bits(m: np.ndarray) -> list[int]:
    packed = np.packbits(m.astype(np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


class Poset:
    """Immutable strict partial order on 0..n-1."""

    __slots__ = ("n", "lt", "_up", "_down", "_ext_memo")

    def __init__(self, lt: np.ndarray, validate: bool = True):
        lt = np.asarray(lt, dtype=bool)
        if lt.ndim != 2 or lt.shape[0] != lt.shape[1]:
            raise ValueError("lt must be a square boolean matrix")
        lt = lt.copy()
        lt.setflags(write=False)
        self.n = lt.shape[0]
        self.lt = lt
        self._up: list[int] | None = None
        self._down: list[int] | None = None
        self._ext_memo: dict[int, int] | None = None
        if validate:
            self.validate()

    # -- construction ------------------------------------------------

    @classmethod
    def from_relations(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Poset":
        """Transitive closure of the given pairs; CycleError on any cycle."""
        rows = [0] * n
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"pair ({i},{j}) out of range for n={n}")
            if i == j:
                raise CycleError(f"self-loop at {i}")
            rows[i] |= 1 << j
        rows = transitive_closure_bits(rows)
        for i in range(n):
            if rows[i] >> i & 1:
                raise CycleError(f"element {i} lies on a directed cycle")
        return cls(bits_to_matrix(rows, n), validate=False)

    @classmethod
    def chain(cls, n: int) -> "Poset":
        idx = np.arange(n)
        return cls(idx[:, None] < idx[None, :], validate=False)

    @classmethod
    def antichain(cls, n: int) -> "Poset":
        return cls(np.zeros((n, n), dtype=bool), validate=False)

    @classmethod
    def from_up_bits(cls, rows: Sequence[int], n: int, validate: bool = False) -> "Poset":
        return cls(bits_to_matrix(rows, n), validate=validate)

    # -- serialization: covering pairs only, loader re-closes ---------

    def to_json(self) -> str:
        pairs = sorted(self.covering_pairs())
        return json.dumps({"n": self.n, "relations": [[i, j] for i, j in pairs]})

    @classmethod
    def from_json(cls, text: str) -> "Poset":
        obj = json.loads(text)
        return cls.from_relations(int(obj["n"]), [tuple(p) for p in obj["relations"]])

    # -- bit-row views -------------------------------------------------

    @property
    def up_bits(self) -> list[int]:
        """up_bits[i] = bitmask of elements strictly above i."""
        if self._up is None:
            self._up = matrix_to_bits(self.lt)
        return self._up

    @property
    def down_bits(self) -> list[int]:
        """down_bits[i] = bitmask of elements strictly below i."""
        if self._down is None:
            self._down = matrix_to_bits(self.lt.T)
        return self._down

    # -- basic queries -------------------------------------------------

    def validate(self) -> None:
        """Check irreflexivity, antisymmetry, transitivity; raise ValueError."""
        lt = self.lt
        if lt.diagonal().any():
            raise ValueError("relation is not irreflexive")
        if (lt & lt.T).any():
            raise ValueError("relation is not antisymmetric")
        reach = (lt.astype(np.uint8) @ lt.astype(np.uint8)) > 0
        if (reach & ~lt).any():
            raise ValueError("relation is not transitive")

    def comparable(self, i: int, j: int) -> bool:
        return bool(self.lt[i, j] or self.lt[j, i])

    def comparable_count(self) -> int:
        return int(self.lt.sum())

    def incomparable_count(self) -> int:
        """Number of unordered pairs with neither i < j nor j < i."""
        return self.n * (self.n - 1) // 2 - self.comparable_count()

    def covering_pairs(self) -> set[tuple[int, int]]:
        """All (i, j) with i < j and no k strictly between."""
        up, down = self.up_bits, self.down_bits
        out = set()
        for i in range(self.n):
            for j in _iter_bits(up[i]):
                if not (up[i] & down[j]):
                    out.add((i, j))
        return out

    def minimal_elements(self) -> list[int]:
        return [i for i in range(self.n) if not self.down_bits[i]]

    def maximal_elements(self) -> list[int]:
        return [i for i in range(self.n) if not self.up_bits[i]]

    def height(self) -> int:
        """Longest chain length in EDGES (antichain -> 0)."""
        if self.n == 0:
            return 0
        down = self.down_bits
        order = sorted(range(self.n), key=lambda i: _popcount(down[i]))
        h = [0] * self.n
        for i in order:
            best = 0
            for j in _iter_bits(down[i]):
                if h[j] + 1 > best:
                    best = h[j] + 1
            h[i] = best
        return max(h)

    def width(self) -> int:
        """Largest antichain, via Dilworth: n minus a maximum matching of
        the comparability relation split into a bipartite graph."""
        if self.n == 0:
            return 0
        if not self.lt.any():
            return self.n
        graph = scipy.sparse.csr_matrix(self.lt)
        match = maximum_bipartite_matching(graph, perm_type="column")
        return self.n - int((match >= 0).sum())

    def find_posts(self) -> list[int]:
        """Elements comparable (above or below) to every other element."""
        full = (1 << self.n) - 1
        up, down = self.up_bits, self.down_bits
        return [i for i in range(self.n) if (up[i] | down[i] | (1 << i)) == full]

    # -- subposets -------------------------------------------------------

    def restrict(self, indices: Sequence[int]) -> "Poset":
        """Induced suborder on the given elements, in the given order."""
        idx = np.asarray(indices, dtype=int)
        return Poset(self.lt[np.ix_(idx, idx)], validate=False)

    def interval_indices(self, a: int, b: int) -> list[int]:
        if a != b and not self.lt[a, b]:
            raise NotComparable(f"{a} and {b} are not comparable")
        if a == b:
            return [a]
        inside = (1 << a) | (1 << b) | (self.up_bits[a] & self.down_bits[b])
        return list(_iter_bits(inside))

    def interval(self, a: int, b: int) -> "Poset":
        """Induced subposet on {z : a <= z <= b}, endpoints included."""
        return self.restrict(self.interval_indices(a, b))

    # -- down-sets and linear extensions ----------------------------------

    def is_down_set(self, mask: int) -> bool:
        down = self.down_bits
        for i in _iter_bits(mask):
            if down[i] & ~mask:
                return False
        return True

    def down_set_masks(self) -> Iterator[int]:
        """All down-sets, as bitmasks (exponential; small n only)."""
        for mask in range(1 << self.n):
            if self.is_down_set(mask):
                yield mask

    def _extension_counts(self, budget: int) -> dict[int, int]:
        """memo[mask] = number of ways to build down-set `mask` one maximal
        element at a time (= linear extensions of the induced subposet).
        Cached on the instance; posets are immutable."""
        if self._ext_memo is not None:
            return self._ext_memo
        up = self.up_bits
        memo: dict[int, int] = {0: 1}

        def count(mask: int) -> int:
            cached = memo.get(mask)
            if cached is not None:
                return cached
            total = 0
            rest = mask
            while rest:
                low = rest & -rest
                rest ^= low
                i = low.bit_length() - 1
                if not (up[i] & mask):  # i maximal within mask
                    total += count(mask ^ low)
            if len(memo) >= budget:
                raise TooLarge(f"down-set DP exceeded budget of {budget} states")
            memo[mask] = total
            return total

        count((1 << self.n) - 1)
        self._ext_memo = memo
        return memo

    def count_linear_extensions(self, budget: int = DEFAULT_STATE_BUDGET) -> int:
        """Exact e(P) by DP over the lattice of down-sets."""
        if self.n == 0:
            return 1
        return self._extension_counts(budget)[(1 << self.n) - 1]

    def sample_linear_extension(self, rng: np.random.Generator,
                                budget: int = DEFAULT_STATE_BUDGET) -> list[int]:
        """Exactly uniform random linear extension, using the DP table."""
        if self.n == 0:
            return []
        memo = self._extension_counts(budget)
        up = self.up_bits
        mask = (1 << self.n) - 1
        rev: list[int] = []
        while mask:
            total = memo[mask]
            r = _rand_below(rng, total)
            for i in _iter_bits(mask):
                if up[i] & mask:
                    continue
                w = memo[mask ^ (1 << i)]
                if r < w:
                    rev.append(i)
                    mask ^= 1 << i
                    break
                r -= w
        rev.reverse()
        return rev

    def linear_extensions(self, limit: int | None = None) -> Iterator[tuple[int, ...]]:
        """Enumerate all linear extensions (DFS over minimal elements)."""
        n = self.n
        down = self.down_bits
        full = (1 << n) - 1
        seq: list[int] = []
        produced = 0

        def rec(placed: int) -> Iterator[tuple[int, ...]]:
            nonlocal produced
            if placed == full:
                produced += 1
                if limit is not None and produced > limit:
                    raise TooLarge(f"more than {limit} linear extensions")
                yield tuple(seq)
                return
            for i in range(n):
                bit = 1 << i
                if not placed & bit and down[i] & placed == down[i]:
                    seq.append(i)
                    yield from rec(placed | bit)
                    seq.pop()

        yield from rec(0)

    # -- semiorder test ----------------------------------------------------

    def is_semiorder(self) -> bool:
        """True iff no induced 2+2 and no induced 3+1 suborder.

        Equivalent trace test: the preorder  x <= y iff D(x) subseteq D(y)
        and U(y) subseteq U(x)  must be complete (D/U = strict down/up sets).
        Matrix products count set differences exactly (entries < 2^24).
        """
        if self.n <= 1:
            return True
        m = self.lt.astype(np.float32)
        below = m.T  # below[x] = indicator of D(x)
        above = m    # above[x] = indicator of U(x)
        d_sub = (below @ (1.0 - below).T) == 0  # d_sub[x,y]: D(x) subset of D(y)
        u_sub = (above @ (1.0 - above).T) == 0
        ok = d_sub & u_sub.T  # ok[x,y]: x <= y in the trace
        return bool((ok | ok.T).all())

    # -- dunder ------------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poset) and self.n == other.n and bool(
            np.array_equal(self.lt, other.lt))

    def __hash__(self) -> int:
        return hash((self.n, self.lt.tobytes()))

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, relations={sorted(self.covering_pairs())})"


@dataclass
class LabelledPoset:
    """Poset plus one real label per element, pairwise distinct."""

    poset: Poset
    labels: np.ndarray

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=float)
        if self.labels.shape != (self.poset.n,):
            raise ValueError("one label per element required")
        if len(np.unique(self.labels)) != self.poset.n:
            raise ValueError("labels must be pairwise distinct")


def _rand_below(rng: np.random.Generator, total: int) -> int:
    """Exact uniform integer in [0, total); works for arbitrary-size ints."""
    if total <= 0:
        raise ValueError("total must be positive")
    bits = total.bit_length()
    nbytes = (bits + 7) // 8
    mask = (1 << bits) - 1
    while True:
        r = int.from_bytes(rng.bytes(nbytes), "little") & mask
        if r < total:
            return r


def from_relations(n: int, pairs: Iterable[tuple[int, int]]) -> Poset:
    return Poset.from_relations(n, pairs)


# ---------------------------------------------------------------------------
# Isomorphism and small-poset catalogues
# ---------------------------------------------------------------------------


def _element_profile(p: Poset) -> list[tuple[int, int]]:
    return [(int(p.lt[:, i].sum()), int(p.lt[i, :].sum())) for i in range(p.n)]


def is_isomorphic(p: Poset, q: Poset) -> bool:
    """Order-isomorphism test by backtracking with degree-profile pruning."""
    if p.n != q.n:
        return False
    if p.comparable_count() != q.comparable_count():
        return False
    prof_p, prof_q = _element_profile(p), _element_profile(q)
    if sorted(prof_p) != sorted(prof_q):
        return False
    n = p.n
    # most-constrained-first: rare profiles early
    order = sorted(range(n), key=lambda i: (prof_p.count(prof_p[i]), i))
    candidates = [[j for j in range(n) if prof_q[j] == prof_p[i]] for i in range(n)]
    mapping = [-1] * n
    used = [False] * n

    def backtrack(pos: int) -> bool:
        if pos == n:
            return True
        i = order[pos]
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for kpos in range(pos):
                k = order[kpos]
                if p.lt[i, k] != q.lt[j, mapping[k]] or p.lt[k, i] != q.lt[mapping[k], j]:
                    ok = False
                    break
            if ok:
                mapping[i] = j
                used[j] = True
                if backtrack(pos + 1):
                    return True
                used[j] = False
                mapping[i] = -1
        return False

    return backtrack(0)


def encode_relation(lt: np.ndarray) -> int:
    """Row-major bit encoding of a small relation matrix."""
    n = lt.shape[0]
    code = 0
    for i in range(n):
        for j in range(n):
            if lt[i, j]:
                code |= 1 << (i * n + j)
    return code


def canonical_key(p: Poset) -> int:
    """Minimum relation encoding over all relabellings (n <= 7 sensible)."""
    n = p.n
    best = None
    for perm in itertools.permutations(range(n)):
        idx = np.asarray(perm)
        code = encode_relation(p.lt[np.ix_(idx, idx)])
        if best is None or code < best:
            best = code
    return best if best is not None else 0


def all_posets(n: int) -> Iterator[Poset]:
    """All labelled posets on n elements (brute force; n <= 5).

    Each unordered pair independently takes one of three states (incomparable,
    i<j, j<i); assignments failing transitivity are discarded.
    """
    if n > 5:
        raise TooLarge("labelled poset enumeration supported for n <= 5")
    if n == 0:
        yield Poset.antichain(0)
        return
    pairs = list(itertools.combinations(range(n), 2))
    for states in itertools.product((0, 1, 2), repeat=len(pairs)):
        rows = [0] * n
        for (i, j), s in zip(pairs, states):
            if s == 1:
                rows[i] |= 1 << j
            elif s == 2:
                rows[j] |= 1 << i
        ok = True
        for i in range(n):
            acc = rows[i]
            for j in _iter_bits(rows[i]):
                if rows[j] & ~acc:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield Poset.from_up_bits(rows, n)


def natural_posets(n: int) -> Iterator[Poset]:
    """Labelled posets on n elements for which identity is a linear extension
    (equivalently: transitively closed sub-relations of the index order)."""
    pairs = list(itertools.combinations(range(n), 2))
    seen: set[tuple[int, ...]] = set()
    for picks in itertools.product((0, 1), repeat=len(pairs)):
        rows = [0] * n
        for (i, j), s in zip(pairs, picks):
            if s:
                rows[i] |= 1 << j
        code = tuple(transitive_closure_bits(rows))
        if code in seen:
            continue
        seen.add(code)
        yield Poset.from_up_bits(list(code), n)


def enumerate_posets(n: int) -> int:
    """Exact count of labelled posets on n elements (n <= 5)."""
    return sum(1 for _ in all_posets(n))


@dataclass(frozen=True)
class PosetClass:
    """One isomorphism class of small posets."""

    size: int
    class_id: int
    representative: Poset = field(compare=False)
    key: int


_CLASS_CACHE: dict[int, list[PosetClass]] = {}


def poset_classes(max_size: int) -> list[PosetClass]:
    """Isomorphism classes of posets with 1 <= size <= max_size (max 5)."""
    if max_size not in _CLASS_CACHE:
        classes: list[PosetClass] = []
        for n in range(1, max_size + 1):
            seen: dict[int, Poset] = {}
            for p in all_posets(n):
                key = canonical_key(p)
                if key not in seen:
                    seen[key] = p
            for key in sorted(seen):
                classes.append(PosetClass(size=n, class_id=len(classes),
                                          representative=seen[key], key=key))
        _CLASS_CACHE[max_size] = classes
    return _CLASS_CACHE[max_size]


# ---------------------------------------------------------------------------
# Suborder density
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityEstimate:
    value: float
    stderr: float
    exact: bool
    samples: int


def density(q: Poset, p: Poset, samples: int = 10000,
            rng: np.random.Generator | None = None,
            exact_limit: int = 10 ** 6) -> DensityEstimate:
    """Density t(Q; P): proportion of |Q|-subsets of P isomorphic to Q.

    Subsets are unordered and compared by induced-suborder isomorphism.
    When C(|P|, |Q|) <= exact_limit the proportion is enumerated exactly;
    otherwise it is Monte Carlo estimated with a binomial standard error.
    """
    k = q.n
    if k > 6:
        raise QTooLarge("pattern posets limited to |Q| <= 6")
    if k > p.n:
        return DensityEstimate(0.0, 0.0, True, 0)
    q_key = canonical_key(q)
    total = math.comb(p.n, k)
    if total <= exact_limit:
        hits = sum(1 for sub in itertools.combinations(range(p.n), k)
                   if canonical_key(p.restrict(sub)) == q_key)
        return DensityEstimate(hits / total, 0.0, True, total)
    if rng is None:
        raise ValueError("rng required for Monte Carlo density estimation")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    hits = 0
    for _ in range(samples):
        sub = rng.choice(p.n, size=k, replace=False)
        if canonical_key(p.restrict(sorted(sub))) == q_key:
            hits += 1
    mean = hits / samples
    stderr = math.sqrt(mean * (1.0 - mean) / samples)
    return DensityEstimate(mean, stderr, False, samples)


# Shared obstruction patterns: 2+2 (two disjoint 2-chains) and 3+1.
def two_plus_two() -> Poset:
    return Poset.from_relations(4, [(0, 1), (2, 3)])


def three_plus_one() -> Poset:
    return Poset.from_relations(4, [(0, 1), (1, 2)])
