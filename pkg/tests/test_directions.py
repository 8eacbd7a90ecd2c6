import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conelab.directions import (
    ANGLE_TOL,
    DirectionSet,
    annulus_index,
    equispaced,
    lacunary_polygon,
    lift3d,
    localization_segments,
    make_lacunary_order1,
    make_lacunary_orderK,
    perp,
    polygon_halfplanes,
    sector_indices,
    sector_of,
    union,
    validate_lacunary,
)
from conelab.lab import cyclic_gaps
from oracles import sector_by_arcs, slope_annulus

lams = st.sampled_from([0.5, 1 / math.sqrt(2), 0.3])


def _slopes(dirs):
    m = dirs.members
    return np.abs(m[:, 1] / m[:, 0])


class TestDirectionSet:
    def test_members_sorted_clockwise(self):
        d = DirectionSet(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]))
        assert np.all(np.diff(d.angles) < 0)
        assert np.allclose(d.members[0], [-1.0, 0.0])

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError, match="unit"):
            DirectionSet(np.array([[1.0, 1.0]]))

    def test_rejects_duplicates(self):
        a = 0.3
        rows = [[math.cos(a), math.sin(a)], [math.cos(a + ANGLE_TOL / 10), math.sin(a + ANGLE_TOL / 10)]]
        with pytest.raises(ValueError, match="closer"):
            DirectionSet(np.array(rows))

    def test_rejects_bad_lambda(self):
        with pytest.raises(ValueError, match="lambda"):
            DirectionSet(np.array([[1.0, 0.0]]), lam=1.5)

    def test_prev_wraps(self):
        d = equispaced(4)
        assert np.array_equal(d.prev(0), d.members[-1])
        assert np.array_equal(d.prev(2), d.members[1])

    def test_members_read_only(self):
        d = equispaced(3)
        with pytest.raises(ValueError):
            d.members[0, 0] = 2.0


class TestOrder1:
    def test_single_member(self):
        d = make_lacunary_order1(0.5, 1)
        assert len(d) == 1 and d.order == 0
        assert np.allclose(d.members[0], [1 / math.sqrt(2), 1 / math.sqrt(2)])
        assert validate_lacunary(d, 0.5, 0)

    def test_five_slopes(self):
        d = make_lacunary_order1(0.5, 5)
        assert np.allclose(sorted(_slopes(d)), [1 / 16, 1 / 8, 1 / 4, 1 / 2, 1])

    def test_one_member_per_annulus_by_scan(self):
        d = make_lacunary_order1(0.5, 8)
        hits = [slope_annulus(s, 0.5) for s in _slopes(d)]
        assert all(len(h) == 1 for h in hits)
        assert len({h[0] for h in hits}) == 8

    @given(lam=lams, count=st.integers(1, 12))
    def test_accepted(self, lam, count):
        d = make_lacunary_order1(lam, count)
        rep = validate_lacunary(d, lam, 1)
        assert rep.accepted and rep.order == (1 if count > 1 else 0)

    @pytest.mark.parametrize("lam, count", [(0.0, 3), (1.0, 3), (0.5, 0)])
    def test_rejects(self, lam, count):
        with pytest.raises(ValueError):
            make_lacunary_order1(lam, count)

    def test_basis_argument(self):
        b = np.array([[0.0, 1.0], [-1.0, 0.0]])
        d = make_lacunary_order1(0.5, 4, b)
        assert validate_lacunary(d, 0.5, 1)


class TestOrderK:
    def test_k0_singleton(self):
        d = make_lacunary_orderK(0.5, 3, 0)
        assert len(d) == 1 and d.order == 0

    def test_three_by_two(self):
        d = make_lacunary_orderK(0.5, 3, 2)
        assert len(d) == 9
        assert all(len(c) == 3 for c in d.tree.values())
        assert all(validate_lacunary(c, 0.5, 1) for c in d.tree.values())

    def test_two_cubed(self):
        d = make_lacunary_orderK(0.5, 2, 3)
        rep = validate_lacunary(d, 0.5, 3)
        assert len(d) == 8 and rep.accepted and rep.order <= 3
        assert all(c <= 0.5 + 1e-12 for c in rep.constants.values())

    @pytest.mark.parametrize("lam", [0.5, 1 / math.sqrt(2)])
    @pytest.mark.parametrize("b", [2, 3])
    @pytest.mark.parametrize("K", [0, 1, 2, 3])
    def test_generator_accepted(self, lam, b, K):
        d = make_lacunary_orderK(lam, b, K)
        assert len(d) == b**K
        assert validate_lacunary(d, lam, K)

    def test_not_accepted_below_its_order(self):
        d = make_lacunary_orderK(0.5, 3, 2)
        rep = validate_lacunary(d, 0.5, 1)
        assert not rep.accepted and "annulus" in rep.reason


class TestValidator:
    def test_quarter_circle_equispaced_rejected(self):
        ang = np.arange(8) * (math.pi / 2) / 8
        d = DirectionSet(np.column_stack([np.cos(ang), np.sin(ang)]))
        assert not validate_lacunary(d, 0.5, 1)

    def test_singleton_any_lambda(self):
        d = DirectionSet(np.array([[0.6, 0.8]]), lam=0.9)
        assert validate_lacunary(d, 0.9, 0)

    def test_two_directions_order_zero_rejected(self):
        assert not validate_lacunary(make_lacunary_order1(0.5, 2), 0.5, 0)

    def test_annulus_index_boundaries(self):
        assert annulus_index(1.0, 0.5) == 0
        assert annulus_index(0.5, 0.5) == 1
        assert annulus_index(0.6, 0.5) == 0
        assert annulus_index(0.0, 0.5) == math.inf
        assert annulus_index(math.inf, 0.5) == -math.inf

    @given(s=st.floats(1e-6, 1e6), lam=lams)
    def test_annulus_index_matches_scan(self, s, lam):
        hits = slope_annulus(s, lam)
        assert annulus_index(s, lam) in hits


class TestPerp:
    def test_e1(self):
        d = perp(DirectionSet(np.array([[1.0, 0.0]])))
        assert np.array_equal(d.members[0], [0.0, -1.0])

    def test_double_perp_is_negation(self):
        d = make_lacunary_order1(0.5, 5)
        dd = perp(perp(d))
        assert np.allclose(np.sort(dd.angles), np.sort(np.angle(np.exp(1j * (d.angles + math.pi)))))

    def test_validated_in_swapped_basis(self):
        d = perp(make_lacunary_order1(0.5, 5))
        assert validate_lacunary(d, 0.5, 1)

    @given(count=st.integers(1, 10), lam=lams)
    def test_gaps_preserved(self, count, lam):
        d = make_lacunary_order1(lam, count)
        assert np.array_equal(np.sort(cyclic_gaps(perp(d))), np.sort(cyclic_gaps(d)))

    def test_rejects_3d(self):
        with pytest.raises(ValueError):
            perp(lift3d(equispaced(2)))


class TestLift:
    def test_e1(self):
        d = lift3d(DirectionSet(np.array([[1.0, 0.0]])))
        s = 1 / math.sqrt(2)
        assert {tuple(r) for r in d.members} == {(s, 0.0, s), (s, 0.0, -s)}

    @given(count=st.integers(1, 8))
    def test_shape_and_norms(self, count):
        d = lift3d(make_lacunary_order1(0.5, count))
        assert len(d) == 2 * count
        assert np.all(np.abs(d.members[:, 2]) == 1 / math.sqrt(2))
        assert np.allclose(np.linalg.norm(d.members, axis=1), 1.0, atol=1e-12)


class TestSectors:
    def test_origin(self):
        assert sector_of(equispaced(3), (0, 0)) is None

    def test_antipodal_pair(self):
        d = DirectionSet(np.array([[1.0, 0.0], [-1.0, 0.0]]))
        for xi in [(3, 1), (-2, -5), (0, 4), (7, 0)]:
            assert sector_of(d, xi) in (0, 1)

    def test_matches_arc_oracle(self, rng):
        d = make_lacunary_order1(0.5, 4)
        pts = rng.integers(-200, 200, size=(10_000, 2))
        pts = pts[np.any(pts != 0, axis=1)]
        idx = sector_indices(d, pts[:, 0], pts[:, 1])
        ang = list(d.angles)
        expect = [sector_by_arcs(ang, math.atan2(p[1], p[0])) for p in pts[:300]]
        assert list(idx[:300]) == expect

    def test_member_direction_in_own_sector(self):
        d = equispaced(6)
        for k, w in enumerate(d.members):
            xi = np.rint(w * 1000)
            assert sector_of(d, xi) == k or abs(math.atan2(xi[1], xi[0]) - d.angles[k]) > 0

    def test_partition_exhaustive_256(self):
        d = make_lacunary_order1(0.5, 7)
        k = np.arange(-128, 128)
        X1, X2 = np.meshgrid(k, k, indexing="ij")
        idx = sector_indices(d, X1, X2)
        origin = (X1 == 0) & (X2 == 0)
        counts = np.zeros(X1.shape, dtype=int)
        for j in range(len(d)):
            counts += idx == j
        assert np.all(counts[~origin] == 1)
        assert idx[origin].item() == -1


class TestPolygon:
    def test_origin_inside(self):
        assert polygon_halfplanes(equispaced(5)).contains(np.zeros(2))

    def test_single_constraint(self):
        hp = polygon_halfplanes(DirectionSet(np.array([[1.0, 0.0]])))
        assert not hp.contains(np.array([2.0, 0.0]))

    def test_square(self):
        sq = DirectionSet(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]))
        hp = polygon_halfplanes(sq)
        assert hp.contains(np.array([0.9, -0.9]))
        assert not hp.contains(np.array([1.1, 0.0]))


class TestSegments:
    def test_singleton(self):
        d = equispaced(1)
        segs = localization_segments(d, 0.5, 3)
        assert len(segs) == 1 and np.array_equal(segs[0].members, d.members)

    def test_order1_gives_singletons(self):
        segs = localization_segments(make_lacunary_order1(0.5, 8), 0.5, 3)
        assert len(segs) == 8 and all(len(s) == 1 for s in segs)

    def test_interleaved_union(self):
        a = make_lacunary_order1(0.5, 6)
        b = DirectionSet(np.array([[math.cos(t), math.sin(t)] for t in 0.8 * np.arctan(0.5 ** np.arange(6))]))
        merged = DirectionSet(union(a, b))
        segs = localization_segments(merged, 0.5, 3)
        assert max(len(s) for s in segs) <= 2
        assert sum(len(s) for s in segs) == len(merged)

    @given(count=st.integers(1, 12), lam=lams)
    def test_partition(self, count, lam):
        d = lacunary_polygon(lam, count)
        segs = localization_segments(d, lam, 3)
        flat = {tuple(r) for s in segs for r in s.members}
        assert flat == {tuple(r) for r in d.members}
        assert sum(len(s) for s in segs) == len(d)

    def test_axis_needs_3d(self):
        with pytest.raises(ValueError):
            localization_segments(equispaced(4), 0.5, 1)
        assert localization_segments(lift3d(equispaced(4)), 0.5, 1)

    def test_bad_axis(self):
        with pytest.raises(ValueError):
            localization_segments(equispaced(4), 0.5, 4)


class TestFamilies:
    def test_single_member_families_coincide(self):
        assert np.array_equal(equispaced(1).members, lacunary_polygon(0.5, 1).members)

    def test_nested(self):
        big = lacunary_polygon(0.5, 32)
        for N in (4, 8, 16):
            small = lacunary_polygon(0.5, N)
            assert all(any(np.array_equal(w, v) for v in big.members) for w in small.members)

    def test_polygon_quadrants_order1(self):
        assert validate_lacunary(lacunary_polygon(0.5, 32), 0.5, 1)
