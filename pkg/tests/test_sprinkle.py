import math

import numpy as np
import pytest
from scipy import stats as sps

from causet import sprinkle
from causet.errors import (DegenerateInterval, DimensionMismatch, InvalidBeta,
                           NotSpacelike, NotTimelike, TooFewPoints, TooManyPoints,
                           WrongDimension)
from causet.poset import Poset
from causet.sprinkle import (CubeRegion, DiamondRegion, Event, causal_leq,
                             chain_height, diamond_volume, height_2d_fast,
                             induced_order, lorentz_boost, map_m2_to_r2,
                             midpoint_dimension_stat, proper_time,
                             spacelike_distance, sprinkle_cube, sprinkle_diamond,
                             unit_volume_diamond)

A2 = Event(0.0, (0.0,))
B2 = Event(1.0, (0.0,))


def random_events(rng, d, count, scale=1.0):
    return [Event(float(t), tuple(x)) for t, x in
            zip(rng.uniform(-scale, scale, count),
                rng.uniform(-scale, scale, (count, d - 1)))]


class TestCausalPredicates:
    def test_timelike_on_axis(self):
        assert causal_leq(A2, B2)

    def test_spacelike(self):
        assert not causal_leq(Event(0.0, (0.0, 0.0, 0.0)), Event(1.0, (2.0, 0.0, 0.0)))

    def test_light_cone_boundary_is_comparable(self):
        a, b = Event(0.0, (0.0, 0.0, 0.0)), Event(1.0, (1.0, 0.0, 0.0))
        assert causal_leq(a, b)
        assert proper_time(a, b) == 0.0

    def test_backwards_not_leq(self):
        assert not causal_leq(B2, A2)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            causal_leq(A2, Event(1.0, (0.0, 0.0)))


class TestDistances:
    def test_proper_time_m2(self):
        assert proper_time(A2, B2) == 1.0

    def test_proper_time_m4(self):
        assert proper_time(Event(0.0, (0.0, 0.0, 0.0)),
                           Event(2.0, (1.0, 0.0, 0.0))) == pytest.approx(math.sqrt(3))

    def test_not_timelike(self):
        with pytest.raises(NotTimelike):
            proper_time(Event(0.0, (0.0,)), Event(0.0, (1.0,)))

    def test_spacelike_distance(self):
        assert spacelike_distance(Event(0.0, (0.0,)), Event(0.0, (1.0,))) == 1.0
        assert spacelike_distance(Event(0.0, (0.0,)), Event(0.5, (1.0,))) == \
            pytest.approx(math.sqrt(0.75))

    def test_not_spacelike(self):
        with pytest.raises(NotSpacelike):
            spacelike_distance(A2, B2)


class TestBoost:
    def test_identity_at_zero(self):
        e = Event(0.3, (0.7, -0.1, 0.2))
        assert lorentz_boost(e, 0.0) == e

    def test_invalid_beta(self):
        with pytest.raises(InvalidBeta):
            lorentz_boost(A2, 1.0)

    def test_comparability_preserved(self, rng):
        events = random_events(rng, 4, 40)
        for beta in rng.uniform(-0.9, 0.9, 5):
            axis = int(rng.integers(3))
            boosted = [lorentz_boost(e, float(beta), axis) for e in events]
            for i in range(len(events)):
                for j in range(len(events)):
                    assert causal_leq(events[i], events[j]) == \
                        causal_leq(boosted[i], boosted[j])

    def test_proper_time_invariant(self, rng):
        events = random_events(rng, 4, 60)
        pairs = [(a, b) for a in events for b in events
                 if a is not b and causal_leq(a, b) and proper_time(a, b) > 1e-6]
        assert pairs
        for a, b in pairs:
            tau = proper_time(a, b)
            tau_b = proper_time(lorentz_boost(a, 0.6), lorentz_boost(b, 0.6))
            assert abs(tau_b - tau) <= 1e-9 * tau


class TestLightConeMap:
    def test_origin(self):
        assert map_m2_to_r2(Event(0.0, (0.0,))) == (0.0, 0.0)

    def test_wrong_dimension(self):
        with pytest.raises(WrongDimension):
            map_m2_to_r2(Event(0.0, (0.0, 0.0)))

    def test_order_preserving(self, rng):
        events = random_events(rng, 2, 60)
        for a in events[:20]:
            for b in events[:20]:
                ua, va = map_m2_to_r2(a)
                ub, vb = map_m2_to_r2(b)
                assert causal_leq(a, b) == (ua <= ub and va <= vb)

    def test_measure_preserving(self, rng):
        # image of an axis-aligned rectangle is a rectangle rotated by 45
        # degrees with the same area (|det| = 1)
        for _ in range(20):
            t0, x0 = rng.uniform(-1, 1, 2)
            dt, dx = rng.uniform(0.1, 1, 2)
            corners = [Event(t0, (x0,)), Event(t0 + dt, (x0,)),
                       Event(t0, (x0 + dx,)), Event(t0 + dt, (x0 + dx,))]
            mapped = [map_m2_to_r2(e) for e in corners]
            u = np.array([m[0] for m in mapped])
            v = np.array([m[1] for m in mapped])
            side1 = math.hypot(u[1] - u[0], v[1] - v[0])
            side2 = math.hypot(u[2] - u[0], v[2] - v[0])
            assert side1 * side2 == pytest.approx(dt * dx, abs=1e-12)


class TestSprinkleCube:
    def test_binomial_single_point(self, rng):
        s = sprinkle_cube(3, 1, "binomial", rng)
        assert s.size == 1
        assert s.order().n == 1

    def test_d1_is_chain(self, rng):
        s = sprinkle_cube(1, 50, "binomial", rng)
        assert s.order().height() == s.size - 1

    def test_poisson_count_fluctuates(self, rng):
        sizes = {sprinkle_cube(2, 50, "poisson", rng).size for _ in range(30)}
        assert len(sizes) > 1

    def test_comparable_fraction_d2(self, rng):
        # P(coordinatewise dominance either way) = 1/2 at d=2
        fracs = []
        n = 200
        for _ in range(40):
            s = sprinkle_cube(2, n, "binomial", rng)
            pairs = n * (n - 1) / 2
            fracs.append(s.order().comparable_count() / pairs)
        mean = np.mean(fracs)
        sem = np.std(fracs, ddof=1) / math.sqrt(len(fracs))
        assert abs(mean - 0.5) <= 3 * sem

    def test_bad_mode(self, rng):
        with pytest.raises(ValueError):
            sprinkle_cube(2, 10, "negative-binomial", rng)


class TestSprinkleDiamond:
    def test_acceptance_rate_d2(self, rng):
        # unit-interval diamond in M^2 fills half its bounding box
        n = 1000.0
        sizes = [sprinkle_diamond(2, A2, B2, n, rng).size for _ in range(20)]
        mean = np.mean(sizes)
        sigma = math.sqrt(n / 2 / len(sizes))
        assert abs(mean - n / 2) <= 4 * sigma

    def test_all_points_inside(self, rng):
        s = sprinkle_diamond(2, A2, B2, 300, rng)
        for row in s.points:
            e = Event(row[0], tuple(row[1:]))
            assert causal_leq(A2, e) and causal_leq(e, B2)

    def test_order_consistent_with_causal_leq(self, rng):
        s = sprinkle_diamond(2, A2, B2, 120, rng)
        p = s.order()
        events = [Event(r[0], tuple(r[1:])) for r in s.points]
        for i in range(len(events)):
            for j in range(len(events)):
                expected = i != j and causal_leq(events[i], events[j])
                assert bool(p.lt[i, j]) == expected

    def test_matches_lightcone_cube_order(self, rng):
        s = sprinkle_diamond(2, A2, B2, 150, rng)
        mapped = np.array([map_m2_to_r2(Event(r[0], (r[1],))) for r in s.points])
        assert induced_order(mapped, CubeRegion(2)) == s.order()

    def test_degenerate_interval(self, rng):
        with pytest.raises(DegenerateInterval):
            sprinkle_diamond(2, A2, Event(1.0, (1.0,)), 10, rng)  # null pair

    def test_uniform_on_diamond_chi_square(self, rng):
        # quadrants of the light-cone square are equiprobable cells
        s = sprinkle_diamond(2, A2, B2, 10_000, rng)
        u = (s.points[:, 0] + s.points[:, 1]) / math.sqrt(2)
        v = (s.points[:, 0] - s.points[:, 1]) / math.sqrt(2)
        half = 1.0 / (2 * math.sqrt(2))
        cells = np.array([((u < half) & (v < half)).sum(),
                          ((u < half) & (v >= half)).sum(),
                          ((u >= half) & (v < half)).sum(),
                          ((u >= half) & (v >= half)).sum()])
        chi2 = ((cells - cells.mean()) ** 2 / cells.mean()).sum()
        assert sps.chi2.sf(chi2, df=3) > 0.001

    def test_m4_volume(self):
        assert diamond_volume(4, 1.0) == pytest.approx(math.pi / 24)
        region = unit_volume_diamond(4)
        assert diamond_volume(4, region.b.t) == pytest.approx(1.0)


class TestInducedOrder:
    def test_two_comparable_points(self):
        pts = np.array([[0.1, 0.1], [0.9, 0.9]])
        assert induced_order(pts, CubeRegion(2)) == Poset.chain(2)

    def test_spacelike_hyperplane_antichain(self):
        pts = np.column_stack([np.zeros(10), np.linspace(0, 1, 10)])
        p = induced_order(pts, DiamondRegion(Event(-2.0, (0.5,)), Event(2.0, (0.5,))))
        assert p.comparable_count() == 0

    def test_matches_pairwise_brute_force(self, rng):
        pts = rng.random((500, 3))
        p = induced_order(pts, CubeRegion(3))
        brute = np.all(pts[:, None, :] <= pts[None, :, :], axis=2)
        np.fill_diagonal(brute, False)
        assert np.array_equal(p.lt, brute)

    def test_too_many_points(self, rng, monkeypatch):
        monkeypatch.setattr(sprinkle, "MAX_ORDER_POINTS", 10)
        with pytest.raises(TooManyPoints):
            induced_order(rng.random((11, 2)), CubeRegion(2))


class TestFastHeights:
    def test_diagonal_chain(self):
        pts = np.column_stack([np.linspace(0, 1, 20), np.linspace(0, 1, 20)])
        assert height_2d_fast(pts) == 19

    def test_antidiagonal_antichain(self):
        pts = np.column_stack([np.linspace(0, 1, 20), np.linspace(1, 0, 20)])
        assert height_2d_fast(pts) == 0

    def test_matches_generic_height_n2000(self, rng):
        pts = rng.random((2000, 2))
        assert height_2d_fast(pts) == induced_order(pts, CubeRegion(2)).height()

    def test_kernel_paths_match_generic(self, rng):
        cube3 = rng.random((400, 3))
        assert chain_height(cube3, CubeRegion(3)) == \
            induced_order(cube3, CubeRegion(3)).height()
        region = unit_volume_diamond(4)
        s = sprinkle_diamond(4, region.a, region.b, 300, rng)
        assert chain_height(s.points, region) == s.order().height()
        region2 = DiamondRegion(A2, B2)
        s2 = sprinkle_diamond(2, A2, B2, 300, rng)
        assert chain_height(s2.points, region2) == s2.order().height()


class TestMidpointStat:
    def test_d1_half(self, rng):
        s = sprinkle_cube(1, 2000, "binomial", rng)
        assert midpoint_dimension_stat(s) == pytest.approx(0.5, abs=0.05)

    def test_too_few_points(self, rng):
        with pytest.raises(TooFewPoints):
            midpoint_dimension_stat(sprinkle_cube(2, 50, "binomial", rng))

    def test_diamond_d2(self, rng):
        s = sprinkle_diamond(2, A2, B2, 4000, rng)
        assert midpoint_dimension_stat(s) == pytest.approx(0.25, abs=0.03)


class TestCsvExport:
    def test_header_and_rows(self, rng, tmp_path):
        s = sprinkle_cube(3, 5, "binomial", rng)
        path = tmp_path / "points.csv"
        s.to_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "id,t,x1,x2"
        assert len(lines) == 6
