"""Poisson and binomial point processes in [0,1]^d and Minkowski diamonds.

Units: speed of light is 1.  Events carry a time coordinate t and a spatial
vector x of dimension d-1.  For cube regions the order is coordinatewise
dominance and column 0 of the point array plays the role of time.

Light-cone boundary pairs (proper time exactly 0) count as comparable, per
the <= convention of the causal order; under continuous sampling these are
probability-zero events, so no tolerance parameter exists.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_left
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (DegenerateInterval, DimensionMismatch, InvalidBeta, NotSpacelike,
                     NotTimelike, TooFewPoints, TooManyPoints, WrongDimension)
from .poset import Poset

# Desk-scale ceiling for materializing the full induced relation.
MAX_ORDER_POINTS = 30_000


@dataclass(frozen=True)
class Event:
    """Spacetime event (t, x) in M^d with d = 1 + len(x)."""

    t: float
    x: tuple[float, ...] = ()

    def __post_init__(self):
        xs = self.x
        if isinstance(xs, (int, float)):
            xs = (float(xs),)
        object.__setattr__(self, "x", tuple(float(v) for v in xs))
        object.__setattr__(self, "t", float(self.t))
        if not math.isfinite(self.t) or not all(math.isfinite(v) for v in self.x):
            raise ValueError("event coordinates must be finite")

    @property
    def d(self) -> int:
        return 1 + len(self.x)

    def as_array(self) -> np.ndarray:
        return np.asarray((self.t, *self.x), dtype=float)


def _check_dims(a: Event, b: Event) -> None:
    if a.d != b.d:
        raise DimensionMismatch(f"dimensions differ: {a.d} vs {b.d}")


def causal_leq(a: Event, b: Event) -> bool:
    """True iff b is in the closed future light cone of a."""
    _check_dims(a, b)
    dt = b.t - a.t
    if dt < 0:
        return False
    dx2 = sum((bb - aa) ** 2 for aa, bb in zip(a.x, b.x))
    return dx2 <= dt * dt


def proper_time(a: Event, b: Event) -> float:
    """Lorentz-invariant distance for a causal pair: sqrt(dt^2 - |dx|^2)."""
    if not causal_leq(a, b):
        raise NotTimelike("proper time requires a <= b causally")
    dt = b.t - a.t
    dx2 = sum((bb - aa) ** 2 for aa, bb in zip(a.x, b.x))
    return math.sqrt(max(dt * dt - dx2, 0.0))


def spacelike_distance(a: Event, b: Event) -> float:
    """Distance for an incomparable pair: sqrt(|dx|^2 - dt^2)."""
    if causal_leq(a, b) or causal_leq(b, a):
        raise NotSpacelike("pair is causally related")
    dt = b.t - a.t
    dx2 = sum((bb - aa) ** 2 for aa, bb in zip(a.x, b.x))
    return math.sqrt(max(dx2 - dt * dt, 0.0))


def lorentz_boost(e: Event, beta: float, axis: int = 0) -> Event:
    """Boost with velocity beta along the given spatial axis."""
    if not -1.0 < beta < 1.0:
        raise InvalidBeta(f"|beta| must be < 1, got {beta}")
    if not 0 <= axis < len(e.x):
        raise ValueError(f"axis {axis} out of range for d={e.d}")
    gamma = 1.0 / math.sqrt(1.0 - beta * beta)
    xs = list(e.x)
    xa = xs[axis]
    xs[axis] = gamma * (xa - beta * e.t)
    return Event(gamma * (e.t - beta * xa), tuple(xs))


def map_m2_to_r2(e: Event) -> tuple[float, float]:
    """Light-cone coordinates ((t+x)/sqrt2, (t-x)/sqrt2); order- and
    measure-preserving isomorphism M^2 -> R^2."""
    if e.d != 2:
        raise WrongDimension("map defined for d=2 only")
    x = e.x[0]
    return ((e.t + x) / math.sqrt(2.0), (e.t - x) / math.sqrt(2.0))


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CubeRegion:
    """Unit cube [0,1]^d with coordinatewise order."""

    d: int

    @property
    def kind(self) -> str:
        return "cube"


@dataclass(frozen=True)
class DiamondRegion:
    """Causal interval [a, b] in M^d."""

    a: Event
    b: Event

    def __post_init__(self):
        _check_dims(self.a, self.b)
        if not causal_leq(self.a, self.b) or proper_time(self.a, self.b) <= 0.0:
            raise DegenerateInterval("diamond needs a < b with positive proper time")

    @property
    def d(self) -> int:
        return self.a.d

    @property
    def kind(self) -> str:
        return "diamond"


def diamond_volume(d: int, tau: float) -> float:
    """Volume of a causal interval of proper time tau in M^d."""
    ball = math.pi ** ((d - 1) / 2.0) / math.gamma((d - 1) / 2.0 + 1.0)
    return 2.0 * ball * (tau / 2.0) ** d / d


def unit_volume_diamond(d: int) -> DiamondRegion:
    """Axis-aligned diamond from the origin with volume exactly 1."""
    tau = (1.0 / diamond_volume(d, 1.0)) ** (1.0 / d)
    zero = (0.0,) * (d - 1)
    return DiamondRegion(Event(0.0, zero), Event(tau, zero))


# ---------------------------------------------------------------------------
# Sprinkled sets
# ---------------------------------------------------------------------------


@dataclass
class SprinkledSet:
    """Points of one sprinkle plus (lazily) the induced order."""

    region: CubeRegion | DiamondRegion
    points: np.ndarray  # (N, d); column 0 = time / first coordinate
    intensity: float
    _order: Poset | None = field(default=None, repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.region.d

    def order(self) -> Poset:
        if self._order is None:
            self._order = induced_order(self.points, self.region)
        return self._order

    def height(self) -> int:
        """Longest chain in edges, via the d=2 / generic fast paths."""
        return chain_height(self.points, self.region)

    def to_csv(self, path) -> None:
        d = self.d
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "t"] + [f"x{i}" for i in range(1, d)])
            for i, row in enumerate(self.points):
                writer.writerow([i] + [f"{v:.17g}" for v in row])


def sprinkle_cube(d: int, n: float, mode: str = "poisson",
                  rng: np.random.Generator | None = None) -> SprinkledSet:
    """Sprinkle [0,1]^d: Poisson(n) many points, or exactly round(n) in
    binomial mode.  Induced order is coordinatewise dominance."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if n <= 0:
        raise ValueError("intensity must be positive")
    if rng is None:
        raise ValueError("rng required")
    if mode == "poisson":
        count = int(rng.poisson(n))
    elif mode == "binomial":
        count = int(round(n))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    pts = rng.random((count, d))
    return SprinkledSet(CubeRegion(d), pts, float(n))


def sprinkle_diamond(d: int, a: Event, b: Event, n: float,
                     rng: np.random.Generator | None = None) -> SprinkledSet:
    """Poisson process of intensity n on the causal interval [a, b].

    Sampled by rejection from the smallest axis-aligned bounding box; the
    retained set is exactly Poisson with intensity n on the diamond.  The
    per-coordinate acceptance ratio is vol(diamond) / dt^d.
    """
    if a.d != d or b.d != d:
        raise DimensionMismatch("endpoint dimensions must match d")
    region = DiamondRegion(a, b)  # raises DegenerateInterval when unusable
    if rng is None:
        raise ValueError("rng required")
    dt = b.t - a.t
    lo = np.empty(d)
    hi = np.empty(d)
    lo[0], hi[0] = a.t, b.t
    for k in range(1, d):
        ak, bk = a.x[k - 1], b.x[k - 1]
        slack = (dt - abs(ak - bk)) / 2.0
        lo[k], hi[k] = min(ak, bk) - slack, max(ak, bk) + slack
    box_vol = float(np.prod(hi - lo))
    count = int(rng.poisson(n * box_vol))
    pts = lo + rng.random((count, d)) * (hi - lo)
    arr_a, arr_b = a.as_array(), b.as_array()
    keep = _causal_between(pts, arr_a, arr_b)
    return SprinkledSet(region, pts[keep], float(n))


def _causal_between(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    dt_a = pts[:, 0] - a[0]
    dt_b = b[0] - pts[:, 0]
    dx_a = ((pts[:, 1:] - a[1:]) ** 2).sum(axis=1)
    dx_b = ((b[1:] - pts[:, 1:]) ** 2).sum(axis=1)
    return (dt_a >= 0) & (dt_a * dt_a >= dx_a) & (dt_b >= 0) & (dt_b * dt_b >= dx_b)


def induced_order(points: np.ndarray, region: CubeRegion | DiamondRegion) -> Poset:
    """Exact induced Poset on the sampled points (O(n^2) relation).

    Memory is n^2 booleans; the cap keeps this at desk scale.  Large-n height
    queries should use chain_height, which never builds the matrix.
    """
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    if n > MAX_ORDER_POINTS:
        raise TooManyPoints(f"{n} points exceeds cap of {MAX_ORDER_POINTS}")
    if n == 0:
        return Poset.antichain(0)
    lt = np.zeros((n, n), dtype=bool)
    chunk = max(1, 2 ** 22 // max(n, 1))
    if region.kind == "cube":
        for s in range(0, n, chunk):
            e = min(s + chunk, n)
            block = np.all(pts[s:e, None, :] <= pts[None, :, :], axis=2)
            lt[s:e] = block
    else:
        t = pts[:, 0]
        for s in range(0, n, chunk):
            e = min(s + chunk, n)
            dt = t[None, :] - t[s:e, None]
            dx2 = ((pts[None, :, 1:] - pts[s:e, None, 1:]) ** 2).sum(axis=2)
            lt[s:e] = (dt >= 0) & (dt * dt >= dx2)
    np.fill_diagonal(lt, False)
    # distinct points a.s.; exact duplicates would break irreflexivity upstream
    return Poset(lt, validate=False)


def lis_vertices(values: np.ndarray) -> int:
    """Longest strictly increasing subsequence length by patience sorting."""
    piles: list[float] = []
    for v in values:
        pos = bisect_left(piles, v)
        if pos == len(piles):
            piles.append(v)
        else:
            piles[pos] = v
    return len(piles)


def height_2d_fast(points: np.ndarray) -> int:
    """Longest chain (EDGES) for cube d=2 via patience sorting, O(n log n).

    Equals Poset.height of the induced order: sort by the first coordinate,
    then a chain is a strictly increasing subsequence of the second."""
    pts = np.asarray(points, dtype=float)
    if pts.shape[0] == 0:
        return 0
    if pts.shape[1] != 2:
        raise WrongDimension("fast path requires d=2")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    return lis_vertices(pts[order, 1]) - 1


def chain_height(points: np.ndarray, region: CubeRegion | DiamondRegion) -> int:
    """Longest chain (EDGES) without materializing the relation."""
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    if n == 0:
        return 0
    if region.kind == "cube":
        if region.d == 2:
            return height_2d_fast(pts)
        pts = pts[np.argsort(pts[:, 0], kind="stable")]
        return int(kernels.chain_vertices_dominance(pts)) - 1
    if region.d == 2:
        # M^2 is order-isomorphic to R^2 in light-cone coordinates
        u = (pts[:, 0] + pts[:, 1]) / math.sqrt(2.0)
        v = (pts[:, 0] - pts[:, 1]) / math.sqrt(2.0)
        return height_2d_fast(np.column_stack([u, v]))
    pts = pts[np.argsort(pts[:, 0], kind="stable")]
    return int(kernels.chain_vertices_causal(pts)) - 1


def midpoint_dimension_stat(s: SprinkledSet) -> float:
    """Box-space dimension statistic: max over sampled midpoints c of
    min(count[a,c], count[c,b]) / total, an estimator of 2^-d."""
    n = s.size
    if n < 100:
        raise TooFewPoints(f"need >= 100 points, got {n}")
    if s.region.kind == "cube":
        below, above = kernels.interval_counts_dominance(s.points)
    else:
        below, above = kernels.interval_counts_causal(
            s.points, s.region.a.as_array(), s.region.b.as_array())
    return float(np.minimum(below, above).max()) / float(n)
