"""Hot loops for order construction on large point sets.

Kernels are numba-jitted when numba is importable and fall back to plain
Python otherwise (correct but slow; fine at test scale).  All take points
as float64 arrays of shape (n, d) with column 0 the time/first coordinate,
pre-sorted ascending by that column.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba present in target env
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


@njit(cache=True)
def chain_vertices_dominance(pts):
    """Longest chain (vertex count) under coordinatewise strict dominance.

    pts sorted ascending by column 0; ties in later columns are measure-zero
    for the continuous samplers that feed this.
    """
    n, d = pts.shape
    h = np.ones(n, dtype=np.int64)
    best = 0 if n == 0 else 1
    for i in range(n):
        hi = 1
        for j in range(i - 1, -1, -1):
            if h[j] < hi:  # cannot improve, skip distance work
                continue
            ok = True
            for k in range(d):
                if pts[j, k] >= pts[i, k]:
                    ok = False
                    break
            if ok:
                hi = h[j] + 1
        h[i] = hi
        if hi > best:
            best = hi
    return best


@njit(cache=True)
def chain_vertices_causal(pts):
    """Longest chain (vertex count) under the Minkowski causal order.

    pts sorted ascending by time (column 0); j precedes i iff
    (t_i - t_j)^2 >= |x_i - x_j|^2.
    """
    n, d = pts.shape
    h = np.ones(n, dtype=np.int64)
    best = 0 if n == 0 else 1
    for i in range(n):
        hi = 1
        ti = pts[i, 0]
        for j in range(i - 1, -1, -1):
            if h[j] < hi:
                continue
            dt = ti - pts[j, 0]
            s = 0.0
            for k in range(1, d):
                dx = pts[i, k] - pts[j, k]
                s += dx * dx
            if dt * dt >= s:
                hi = h[j] + 1
        h[i] = hi
        if hi > best:
            best = hi
    return best


@njit(cache=True)
def interval_counts_dominance(pts):
    """For each point c: (#points <= c, #points >= c) coordinatewise,
    both counts including c itself."""
    n, d = pts.shape
    below = np.zeros(n, dtype=np.int64)
    above = np.zeros(n, dtype=np.int64)
    for i in range(n):
        nb = 0
        na = 0
        for j in range(n):
            le = True
            ge = True
            for k in range(d):
                if pts[j, k] > pts[i, k]:
                    le = False
                if pts[j, k] < pts[i, k]:
                    ge = False
                if not le and not ge:
                    break
            if le:
                nb += 1
            if ge:
                na += 1
        below[i] = nb
        above[i] = na
    return below, above


@njit(cache=True)
def interval_counts_causal(pts, a, b):
    """For each point c: (#points in [a, c], #points in [c, b]) under the
    causal order, both counts including c itself."""
    n, d = pts.shape
    below = np.zeros(n, dtype=np.int64)
    above = np.zeros(n, dtype=np.int64)
    for i in range(n):
        nb = 0
        na = 0
        ti = pts[i, 0]
        for j in range(n):
            tj = pts[j, 0]
            # a <= pts[j] and pts[j] <= b hold by construction of the sample.
            dt = ti - tj
            s = 0.0
            for k in range(1, d):
                dx = pts[i, k] - pts[j, k]
                s += dx * dx
            if dt >= 0.0 and dt * dt >= s:
                nb += 1
            if dt <= 0.0 and dt * dt >= s:
                na += 1
        below[i] = nb
        above[i] = na
    return below, above


def warmup() -> None:
    """Trigger jit compilation outside timed sections."""
    pts = np.random.default_rng(0).random((4, 2))
    pts = pts[np.argsort(pts[:, 0])]
    chain_vertices_dominance(pts)
    chain_vertices_causal(pts)
    interval_counts_dominance(pts)
    interval_counts_causal(pts, pts[0], pts[-1])
