"""Core value types, measure, point-set operations, metrics."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from l1geo import (
    BoxUnion,
    CellSet,
    CoordSubspace,
    IVVector,
    RatBox,
    SignedPerm,
    apply_isometry,
    box_intersection,
    box_minkowski,
    boxunion_equal_pointsets,
    boxunion_intersection,
    boxunion_minkowski_box,
    cell_box,
    cellset_boolean,
    cellset_to_boxunion,
    clip_cells,
    coordinate_subspaces,
    embed,
    hausdorff_distance,
    hyperoctahedral_group,
    minkowski_sum_box,
    point_box_distance,
    project,
    scale,
    subdivide,
    union_volume,
)

F = Fraction


# ---------------------------------------------------------------------------
# value types


class TestCellSet:
    def test_basic(self):
        x = CellSet(2, {(0, 0), (1, 0)}, F(1, 2))
        assert not x.is_empty
        assert x.sorted_cells() == ((0, 0), (1, 0))
        assert x.resolution == F(1, 2)

    def test_empty_and_dim0(self):
        assert CellSet(3).is_empty
        z = CellSet(0, {()})
        assert z.sorted_cells() == ((),)

    def test_validation(self):
        with pytest.raises(ValueError):
            CellSet(2, {(0,)})
        with pytest.raises(ValueError):
            CellSet(2, {(0, 0)}, 0)
        with pytest.raises(ValueError):
            CellSet(-1)
        with pytest.raises(TypeError):
            CellSet(1, {(0,)}, 0.5)

    def test_bounding_box(self):
        x = CellSet(2, {(0, 0), (2, 1)}, F(1, 2))
        box = x.bounding_box()
        assert box.mins == (F(0), F(0)) and box.maxs == (F(3, 2), F(1))


class TestRatBox:
    def test_volume_and_degenerate(self):
        b = RatBox((0, F(1, 2)), (2, F(1, 2)))
        assert b.volume() == 0
        assert b.side_lengths() == (F(2), F(0))
        assert RatBox((0,), (F(3, 2),)).volume() == F(3, 2)

    def test_validation(self):
        with pytest.raises(ValueError):
            RatBox((1,), (0,))
        with pytest.raises(ValueError):
            RatBox((0, 0), (1,))

    def test_contains_and_translate(self):
        b = RatBox((0, 0), (1, 2))
        assert b.contains_point((F(1, 2), F(2)))
        assert not b.contains_point((F(3, 2), F(0)))
        t = b.translate((F(1), F(-1)))
        assert t.mins == (F(1), F(-1)) and t.maxs == (F(2), F(1))

    def test_corners(self):
        b = RatBox((0, 0), (1, 2))
        assert set(b.corners()) == {(0, 0), (0, 2), (1, 0), (1, 2)}


class TestSignedPerm:
    def test_identity_apply(self):
        g = SignedPerm.identity(3)
        assert g.apply_point((1, 2, 3)) == (1, 2, 3)
        assert g.apply_cell((4, -1, 0)) == (4, -1, 0)

    def test_validation(self):
        with pytest.raises(ValueError):
            SignedPerm((0, 0), (1, 1))
        with pytest.raises(ValueError):
            SignedPerm((0, 1), (1, 2))

    def test_reflection_cell_convention(self):
        g = SignedPerm((0,), (-1,))
        # cube of cell h reflects onto cube of cell -h-1
        assert g.apply_cell((0,)) == (-1,)
        assert g.apply_cell((2,)) == (-3,)

    def test_group_laws_random(self):
        rng = random.Random(0)
        for _ in range(100):
            n = rng.choice([1, 2, 3])

            def rand_g():
                p = list(range(n))
                rng.shuffle(p)
                return SignedPerm(tuple(p), tuple(rng.choice((1, -1)) for _ in range(n)))

            g, h = rand_g(), rand_g()
            x = tuple(F(rng.randint(-8, 8), 2) for _ in range(n))
            assert g.compose(h).apply_point(x) == g.apply_point(h.apply_point(x))
            assert g.inverse().apply_point(g.apply_point(x)) == x
            c = tuple(rng.randint(-4, 4) for _ in range(n))
            lam = F(1, 2)
            assert cell_box(g.apply_cell(c), lam) == g.apply_box(cell_box(c, lam))

    def test_group_enumeration(self):
        for n in (0, 1, 2, 3):
            group = hyperoctahedral_group(n)
            assert len(group) == 2**n * [1, 1, 2, 6][n]
            assert len(set(group)) == len(group)
            assert group[0] == SignedPerm.identity(n)


class TestEnumeration:
    def test_coordinate_subspaces(self):
        subs = coordinate_subspaces(3, 2)
        assert [s.axes for s in subs] == [(0, 1), (0, 2), (1, 2)]
        assert subs[0].complement().axes == (2,)
        assert coordinate_subspaces(3, 0)[0].axes == ()

    def test_validation(self):
        with pytest.raises(ValueError):
            CoordSubspace(2, (1, 0))
        with pytest.raises(ValueError):
            CoordSubspace(2, (0, 2))


class TestIVVector:
    def test_validation(self):
        IVVector((F(1), F(2)))
        IVVector((F(0), F(0)))
        with pytest.raises(ValueError):
            IVVector((F(2), F(1)))
        with pytest.raises(ValueError):
            IVVector(())


# ---------------------------------------------------------------------------
# cell-set operations


class TestCellOps:
    def test_boolean(self):
        x = CellSet(1, {(0,), (1,)})
        y = CellSet(1, {(1,), (2,)})
        assert cellset_boolean(x, y, "union").sorted_cells() == ((0,), (1,), (2,))
        assert cellset_boolean(x, y, "intersection").sorted_cells() == ((1,),)
        assert cellset_boolean(x, y, "difference").sorted_cells() == ((0,),)
        with pytest.raises(ValueError):
            cellset_boolean(x, CellSet(1, {(0,)}, F(1, 2)), "union")
        with pytest.raises(ValueError):
            cellset_boolean(x, y, "xor")

    def test_clip(self):
        x = CellSet(2, {(0, 0), (1, 1), (3, 3)})
        assert clip_cells(x, (0, 0), (2, 2)).sorted_cells() == ((0, 0), (1, 1))

    def test_subdivide_preserves_pointset(self):
        x = CellSet(2, {(0, 0), (1, 0)}, F(1, 2))
        fine = subdivide(x, 3)
        assert fine.resolution == F(1, 6)
        assert len(fine.cells) == 2 * 9
        assert union_volume(cellset_to_boxunion(fine)) == union_volume(
            cellset_to_boxunion(x)
        )
        sub = CoordSubspace(2, (0,))
        assert boxunion_equal_pointsets(
            cellset_to_boxunion(project(fine, sub)),
            cellset_to_boxunion(project(x, sub)),
        )

    def test_scale(self):
        x = CellSet(2, {(0, 0), (1, 1)}, F(1, 2))
        big = scale(x, 2)
        assert big.resolution == F(1, 2)
        assert len(big.cells) == 2 * 4
        assert union_volume(cellset_to_boxunion(big)) == 4 * union_volume(
            cellset_to_boxunion(x)
        )

    def test_project_cellset(self):
        x = CellSet(3, {(0, 1, 2), (1, 1, 0)})
        p = project(x, CoordSubspace(3, (0, 2)))
        assert p.dimension == 2 and p.sorted_cells() == ((0, 2), (1, 0))
        # composition law: projecting a projection = projecting once
        q = project(p, CoordSubspace(2, (1,)))
        assert q.sorted_cells() == project(x, CoordSubspace(3, (2,))).sorted_cells()
        zero = project(x, CoordSubspace(3, ()))
        assert zero.dimension == 0 and zero.sorted_cells() == ((),)
        assert project(CellSet(3), CoordSubspace(3, ())).is_empty

    def test_apply_isometry_aligned_stays_cellset(self):
        x = CellSet(2, {(0, 0), (1, 0), (0, 1)})
        g = SignedPerm((0, 1), (-1, -1))
        moved = apply_isometry(x, g, (F(2), F(1)))
        assert isinstance(moved, CellSet)
        assert moved.sorted_cells() == ((0, 0), (1, -1), (1, 0))

    def test_apply_isometry_unaligned_becomes_boxunion(self):
        x = CellSet(2, {(0, 0), (1, 0), (0, 1)})
        g = hyperoctahedral_group(2)[3]
        moved = apply_isometry(x, g, (F(1, 3), F(0)))
        assert isinstance(moved, BoxUnion)
        assert union_volume(moved) == 3

    def test_minkowski_aligned_matches_box_route(self):
        x = CellSet(2, {(0, 0), (1, 0), (0, 1)})
        box = RatBox((0, 0), (1, 2))
        fast = minkowski_sum_box(x, box)
        assert isinstance(fast, CellSet)
        slow = minkowski_sum_box(cellset_to_boxunion(x), box)
        assert boxunion_equal_pointsets(cellset_to_boxunion(fast), slow)

    def test_minkowski_unaligned(self):
        x = CellSet(1, {(0,)})
        out = minkowski_sum_box(x, RatBox((0,), (F(1, 2),)))
        assert isinstance(out, BoxUnion)
        assert union_volume(out) == F(3, 2)

    def test_minkowski_zero_width(self):
        x = CellSet(2, {(0, 0), (2, 2)})
        out = minkowski_sum_box(x, RatBox((0, 0), (0, 0)))
        assert isinstance(out, CellSet) and out.sorted_cells() == x.sorted_cells()

    def test_embed(self):
        x = CellSet(2, {(0, 0), (1, 1)}, F(1, 2))
        slab = embed(x, 1)
        assert slab.dimension == 3
        assert union_volume(slab) == 0
        assert all(b.mins[1] == b.maxs[1] == 0 for b in slab.boxes)


# ---------------------------------------------------------------------------
# measure


def brute_union_volume(boxes):
    total = F(0)
    for r in range(1, len(boxes) + 1):
        for sub in combinations(boxes, r):
            inter = sub[0]
            for b in sub[1:]:
                if inter is None:
                    break
                inter = box_intersection(inter, b)
            if inter is not None:
                total += (-1) ** (r + 1) * inter.volume()
    return total


class TestUnionVolume:
    def test_examples(self):
        u = BoxUnion(2, [RatBox((0, 0), (2, 2)), RatBox((1, 1), (3, 3))])
        assert union_volume(u) == 7  # 4 + 4 - 1
        assert union_volume(BoxUnion(2)) == 0
        degenerate = BoxUnion(2, [RatBox((0, 0), (0, 5))])
        assert union_volume(degenerate) == 0

    def test_overlaps_and_duplicates_kept(self):
        b = RatBox((0,), (1,))
        assert union_volume(BoxUnion(1, [b, b, b])) == 1

    def test_random_vs_inclusion_exclusion(self):
        rng = random.Random(7)
        for _ in range(150):
            n = rng.choice([1, 2, 3])
            boxes = []
            for _ in range(rng.randint(1, 4)):
                lo = [F(rng.randint(-4, 4), rng.choice([1, 2])) for _ in range(n)]
                hi = [a + F(rng.randint(0, 6), 2) for a in lo]
                boxes.append(RatBox(tuple(lo), tuple(hi)))
            u = BoxUnion(n, boxes)
            assert union_volume(u) == brute_union_volume(boxes)

    def test_bigint_fallback_matches(self):
        # coordinates huge enough to overflow any int64 staging
        shift = 10**12
        boxes = [
            RatBox((shift, shift), (shift + 10**6, shift + 10**6)),
            RatBox((shift + 5 * 10**5, shift), (shift + 15 * 10**5, shift + 10**6)),
        ]
        u = BoxUnion(2, boxes)
        assert union_volume(u) == brute_union_volume(boxes)

    def test_grid_limit(self):
        boxes = [
            RatBox((F(i), F(i, 10**4)), (F(i) + 1, F(i, 10**4) + 1))
            for i in range(6000)
        ]
        with pytest.raises(ValueError):
            union_volume(BoxUnion(2, boxes))


class TestBoxOps:
    def test_intersection(self):
        a = RatBox((0, 0), (2, 2))
        assert box_intersection(a, RatBox((3, 0), (4, 1))) is None
        touch = box_intersection(a, RatBox((2, 0), (3, 1)))
        assert touch is not None and touch.volume() == 0
        inner = box_intersection(a, RatBox((1, 1), (5, 5)))
        assert inner == RatBox((1, 1), (2, 2))

    def test_minkowski(self):
        a = RatBox((0, 0), (1, 1))
        b = RatBox((-1, 0), (0, F(1, 2)))
        assert box_minkowski(a, b) == RatBox((-1, 0), (1, F(3, 2)))

    def test_boxunion_intersection(self):
        u = BoxUnion(1, [RatBox((0,), (1,))])
        v = BoxUnion(1, [RatBox((1,), (2,)), RatBox((3,), (4,))])
        w = boxunion_intersection(u, v)
        assert len(w.boxes) == 1 and w.boxes[0] == RatBox((1,), (1,))

    def test_boxunion_minkowski(self):
        u = BoxUnion(1, [RatBox((0,), (0,)), RatBox((2,), (3,))])
        out = boxunion_minkowski_box(u, RatBox((0,), (1,)))
        assert union_volume(out) == 3


class TestPointsetEquality:
    def test_decompositions_equal(self):
        # an L-shape cut two different ways
        u = BoxUnion(2, [RatBox((0, 0), (2, 1)), RatBox((0, 1), (1, 2))])
        v = BoxUnion(2, [RatBox((0, 0), (1, 2)), RatBox((1, 0), (2, 1))])
        assert boxunion_equal_pointsets(u, v)

    def test_degenerate_pieces_matter(self):
        cube = BoxUnion(2, [RatBox((0, 0), (1, 1))])
        with_whisker = BoxUnion(
            2, [RatBox((0, 0), (1, 1)), RatBox((1, 0), (2, 0))]
        )
        assert not boxunion_equal_pointsets(cube, with_whisker)
        assert boxunion_equal_pointsets(with_whisker, with_whisker)

    def test_point_vs_cell_intersection(self):
        # adjacent cubes share a face the cell model cannot represent
        x = cellset_to_boxunion(CellSet(1, {(0,)}))
        y = cellset_to_boxunion(CellSet(1, {(1,)}))
        shared = boxunion_intersection(x, y)
        assert union_volume(shared) == 0 and not shared.is_empty
        assert not boxunion_equal_pointsets(shared, BoxUnion(1))

    def test_empty_cases(self):
        assert boxunion_equal_pointsets(BoxUnion(2), BoxUnion(2))
        assert not boxunion_equal_pointsets(
            BoxUnion(2), BoxUnion(2, [RatBox((0, 0), (0, 0))])
        )

    def test_dim0(self):
        full = BoxUnion(0, [RatBox((), ())])
        assert boxunion_equal_pointsets(full, full)
        assert not boxunion_equal_pointsets(full, BoxUnion(0))


# ---------------------------------------------------------------------------
# metrics


class TestMetrics:
    def test_point_box_distance(self):
        b = RatBox((0, 0), (1, 1))
        assert point_box_distance((F(1, 2), F(1, 2)), b) == 0
        assert point_box_distance((2, 3), b) == 1 + 2
        assert point_box_distance((-1, F(1, 2)), b) == 1

    def test_hausdorff_separated_boxes(self):
        u = BoxUnion(2, [RatBox((0, 0), (1, 1))])
        v = BoxUnion(2, [RatBox((2, 0), (3, 1))])
        lower, upper = hausdorff_distance(u, v, F(1, 4))
        # true distance 2 is attained at sampled corners
        assert lower == 2
        assert upper == 2 + 2 * F(1, 4) / 2

    def test_hausdorff_identical(self):
        u = BoxUnion(2, [RatBox((0, 0), (1, 1)), RatBox((1, 0), (2, 1))])
        lower, upper = hausdorff_distance(u, u, F(1, 2))
        assert lower == 0 and upper == F(1, 2)

    def test_hausdorff_bracket_width(self):
        u = BoxUnion(1, [RatBox((0,), (1,))])
        v = BoxUnion(1, [RatBox((F(1, 3),), (F(5, 3),))])
        for delta in (F(1, 2), F(1, 8)):
            lower, upper = hausdorff_distance(u, v, delta)
            assert upper - lower == 1 * delta / 2
            assert lower <= F(2, 3) <= upper

    def test_hausdorff_validation(self):
        u = BoxUnion(1, [RatBox((0,), (1,))])
        with pytest.raises(ValueError):
            hausdorff_distance(u, BoxUnion(1), F(1, 2))
        with pytest.raises(ValueError):
            hausdorff_distance(u, u, 0)
