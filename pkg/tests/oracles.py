"""Independent brute-force oracles.

Everything here recomputes results from first principles (permutation
filtering, subset enumeration, exact feasibility over Fractions) and stays
deliberately independent of the package's algorithmic paths.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from causet.poset import Poset


def brute_linear_extension_count(p: Poset) -> int:
    """Filter all n! permutations."""
    n = p.n
    count = 0
    for perm in itertools.permutations(range(n)):
        pos = {e: i for i, e in enumerate(perm)}
        if all(pos[i] < pos[j] for i in range(n) for j in range(n) if p.lt[i, j]):
            count += 1
    return count


def brute_extensions(p: Poset) -> list[tuple[int, ...]]:
    out = []
    n = p.n
    for perm in itertools.permutations(range(n)):
        pos = {e: i for i, e in enumerate(perm)}
        if all(pos[i] < pos[j] for i in range(n) for j in range(n) if p.lt[i, j]):
            out.append(perm)
    return out


def brute_height(p: Poset) -> int:
    """Longest chain in edges by DFS over all chains."""
    best = 0
    n = p.n

    def extend(last: int, length: int) -> None:
        nonlocal best
        best = max(best, length)
        for nxt in range(n):
            if p.lt[last, nxt]:
                extend(nxt, length + 1)

    for start in range(n):
        extend(start, 0)
    return best


def brute_width(p: Poset) -> int:
    """Largest antichain by subset enumeration."""
    best = 0
    n = p.n
    for mask in range(1 << n):
        elems = [i for i in range(n) if mask >> i & 1]
        if all(not p.comparable(a, b) for a, b in itertools.combinations(elems, 2)):
            best = max(best, len(elems))
    return best


def brute_covering_pairs(p: Poset) -> set[tuple[int, int]]:
    out = set()
    n = p.n
    for i in range(n):
        for j in range(n):
            if p.lt[i, j] and not any(p.lt[i, k] and p.lt[k, j] for k in range(n)):
                out.add((i, j))
    return out


def brute_incomparable_count(p: Poset) -> int:
    return sum(1 for i, j in itertools.combinations(range(p.n), 2)
               if not p.comparable(i, j))


def brute_posts(p: Poset) -> list[int]:
    return [i for i in range(p.n)
            if all(p.comparable(i, j) for j in range(p.n) if j != i)]


def brute_is_isomorphic(p: Poset, q: Poset) -> bool:
    """Try every bijection."""
    if p.n != q.n:
        return False
    for perm in itertools.permutations(range(q.n)):
        if all(p.lt[i, j] == q.lt[perm[i], perm[j]]
               for i in range(p.n) for j in range(p.n)):
            return True
    return False


def brute_density(q: Poset, p: Poset) -> Fraction:
    """Exact density by full subset enumeration and bijection search."""
    hits = 0
    total = 0
    for sub in itertools.combinations(range(p.n), q.n):
        total += 1
        if brute_is_isomorphic(p.restrict(sub), q):
            hits += 1
    return Fraction(hits, total)


def contains_induced(p: Poset, pattern: Poset) -> bool:
    for sub in itertools.combinations(range(p.n), pattern.n):
        if brute_is_isomorphic(p.restrict(sub), pattern):
            return True
    return False


def brute_is_semiorder(p: Poset) -> bool:
    """Forbidden induced suborders 2+2 and 3+1, by enumeration."""
    two_two = Poset.from_relations(4, [(0, 1), (2, 3)])
    three_one = Poset.from_relations(4, [(0, 1), (1, 2)])
    return not contains_induced(p, two_two) and not contains_induced(p, three_one)


def unit_interval_representable(p: Poset) -> bool:
    """Exact feasibility of a unit-interval representation.

    Needs reals x_i with x_j - x_i > 1 whenever i < j, and |x_i - x_j| <= 1
    for incomparable pairs.  Encoded as difference constraints with a
    rational slack eps = 1/(n+1) (small enough that a negative cycle exists
    iff one exists for every positive slack) and solved by Floyd-Warshall
    over Fractions: representable iff no negative cycle.
    """
    n = p.n
    if n <= 1:
        return True
    eps = Fraction(1, n + 1)
    inf = None
    dist: list[list[Fraction | None]] = [[inf] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = Fraction(0)

    def relax(u: int, v: int, w: Fraction) -> None:
        if dist[u][v] is None or w < dist[u][v]:
            dist[u][v] = w

    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if p.lt[i, j]:
                relax(j, i, -(1 + eps))  # x_i <= x_j - (1+eps)
            elif not p.lt[j, i]:
                relax(j, i, Fraction(1))  # x_i <= x_j + 1
    for k in range(n):
        for i in range(n):
            dik = dist[i][k]
            if dik is None:
                continue
            for j in range(n):
                dkj = dist[k][j]
                if dkj is None:
                    continue
                cand = dik + dkj
                if dist[i][j] is None or cand < dist[i][j]:
                    dist[i][j] = cand
    return all(dist[i][i] >= 0 for i in range(n))


def enumerate_posets_by_matrix(n: int) -> int:
    """Second, independent enumeration order: all 0/1 off-diagonal adjacency
    matrices, filtered for antisymmetry and transitivity (n <= 4)."""
    cells = [(i, j) for i in range(n) for j in range(n) if i != j]
    count = 0
    for bits in itertools.product((0, 1), repeat=len(cells)):
        lt = np.zeros((n, n), dtype=bool)
        for (i, j), b in zip(cells, bits):
            lt[i, j] = bool(b)
        if (lt & lt.T).any():
            continue
        ok = True
        for i in range(n):
            for j in range(n):
                if not lt[i, j]:
                    continue
                for k in range(n):
                    if lt[j, k] and not lt[i, k]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            count += 1
    return count


def brute_closure(edges: list[tuple[int, int]], n: int) -> np.ndarray:
    """Reachability by repeated squaring of the adjacency matrix."""
    m = np.zeros((n, n), dtype=bool)
    for i, j in edges:
        m[i, j] = True
    while True:
        nxt = m | ((m.astype(np.uint8) @ m.astype(np.uint8)) > 0)
        if (nxt == m).all():
            return m
        m = nxt


def random_poset(rng: np.random.Generator, n: int, p: float = 0.4) -> Poset:
    """Random labelled poset: closed random DAG, then a random relabelling."""
    lt = np.triu(rng.random((n, n)) < p, k=1)
    closed = brute_closure([(i, j) for i in range(n) for j in range(n) if lt[i, j]], n)
    perm = rng.permutation(n)
    return Poset(closed[np.ix_(perm, perm)], validate=False)
