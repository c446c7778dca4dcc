"""Intrinsic-volume vectors: closed forms, dual computation routes, axioms."""

import itertools
import random
from fractions import Fraction
from math import comb, factorial

import pytest

from l1geo import (
    BoxUnion,
    CellSet,
    IVVector,
    L1Ball,
    RatBox,
    SignedPerm,
    apply_isometry,
    ball_intrinsic_volumes,
    box_intrinsic_volumes,
    cellset_product,
    cellset_to_boxunion,
    convexify,
    elementary_symmetric,
    euler_characteristic,
    gen_random_cellset,
    gen_random_convex,
    intrinsic_volumes,
    intrinsic_volumes_boxunion,
    intrinsic_volumes_cellset,
    outer_pixellate,
    product_rhs,
    scale,
    subdivide,
    union_volume,
)

F = Fraction


def unit_cube(n: int, lam=F(1)) -> CellSet:
    per_axis = int(1 / lam)
    cells = itertools.product(range(per_axis), repeat=n)
    return CellSet(n, cells, lam)


class TestClosedForms:
    def test_cube_binomials(self):
        for n in range(0, 7):
            vec = intrinsic_volumes_cellset(unit_cube(n))
            assert tuple(vec) == tuple(comb(n, i) for i in range(n + 1))

    def test_cube_resolution_invariance(self):
        for n in range(1, 5):
            fine = intrinsic_volumes_cellset(unit_cube(n, F(1, 2)))
            assert tuple(fine) == tuple(comb(n, i) for i in range(n + 1))

    def test_subdivide_invariance(self):
        for seed in range(8):
            x = gen_random_convex(2, 5, 0.4, seed)
            for m in (2, 3):
                assert intrinsic_volumes_cellset(subdivide(x, m)) == intrinsic_volumes_cellset(x)

    def test_ball_closed_form(self):
        for n in range(0, 6):
            vec = ball_intrinsic_volumes(n)
            expected = tuple(F(2**i, factorial(i)) * comb(n, i) for i in range(n + 1))
            assert tuple(vec) == expected

    def test_ball_radius_scaling(self):
        vec = ball_intrinsic_volumes(3, F(5, 2))
        base = ball_intrinsic_volumes(3)
        assert tuple(vec) == tuple(F(5, 2) ** i * v for i, v in enumerate(base))

    def test_pixellated_unit_ball(self):
        pix = outer_pixellate(L1Ball((0, 0), 1), 1)
        assert tuple(intrinsic_volumes_cellset(pix)) == (1, 8, 12)

    def test_tromino(self):
        x = CellSet(2, {(0, 0), (1, 0), (0, 1)})
        assert tuple(intrinsic_volumes_cellset(x)) == (1, 4, 3)

    def test_box_sides(self):
        assert tuple(box_intrinsic_volumes((1, 2, 3))) == (1, 6, 11, 6)
        assert tuple(box_intrinsic_volumes(())) == (1,)

    def test_solid_box_cellset(self):
        cells = itertools.product(range(1), range(2), range(3))
        x = CellSet(3, cells)
        assert intrinsic_volumes_cellset(x) == box_intrinsic_volumes((1, 2, 3))


class TestElementarySymmetric:
    def test_values(self):
        assert elementary_symmetric((2, 3)) == (1, 5, 6)
        assert elementary_symmetric((1, 1, 1)) == (1, 3, 3, 1)
        e = elementary_symmetric((F(1, 2), F(1, 3), 4))
        assert e == (1, F(29, 6), F(7, 2), F(2, 3))

    def test_degenerate_side(self):
        assert elementary_symmetric((0, 5)) == (1, 5, 0)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            elementary_symmetric((1, -2))


class TestHadwigerMatrix:
    """Embedded i-dimensional cubes in R^n produce the binomial transition
    matrix M[i][j] = C(i, j): unitriangular, determinant one."""

    def test_matrix(self):
        n = 6
        rows = []
        for i in range(n + 1):
            sides = (1,) * i + (0,) * (n - i)
            box = RatBox((0,) * n, sides)
            vec = intrinsic_volumes_boxunion(BoxUnion(n, [box]))
            rows.append(tuple(vec))
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                assert entry == comb(i, j)
            assert row[i] == 1
            assert all(v == 0 for v in row[i + 1 :])
        # unitriangular, so the determinant is the diagonal product
        det = 1
        for i in range(n + 1):
            det *= rows[i][i]
        assert det == 1

    def test_embed_adds_zero_direction(self):
        x = CellSet(2, {(0, 0), (1, 0), (0, 1)})
        from l1geo import embed

        lifted = intrinsic_volumes_boxunion(embed(x, 1))
        base = intrinsic_volumes_cellset(x)
        assert tuple(lifted) == tuple(base) + (0,)


class TestDualRoutes:
    """Cell counting and box-union projected volumes are independent
    computations of the same vector and must agree on every cell set."""

    def test_random_agreement(self):
        rng = random.Random(11)
        for trial in range(80):
            n = rng.choice([1, 2, 3])
            x = gen_random_cellset(n, 4, rng.randint(1, 12), 3000 + trial)
            a = intrinsic_volumes_cellset(x)
            b = intrinsic_volumes_boxunion(cellset_to_boxunion(x))
            assert a == b

    def test_finer_resolutions(self):
        for seed in range(10):
            x = gen_random_cellset(2, 5, 8, seed, resolution=F(1, 3))
            assert intrinsic_volumes_cellset(x) == intrinsic_volumes_boxunion(
                cellset_to_boxunion(x)
            )

    def test_top_degree_is_volume(self):
        for seed in range(10):
            x = gen_random_convex(2, 5, 0.5, 60 + seed)
            vec = intrinsic_volumes_cellset(x)
            assert vec[2] == union_volume(cellset_to_boxunion(x))

    def test_degree_zero_is_euler(self):
        x = gen_random_convex(2, 4, 0.4, 7)
        assert intrinsic_volumes_cellset(x)[0] == euler_characteristic(x) == 1
        empty = CellSet(3)
        assert euler_characteristic(empty) == 0
        assert tuple(intrinsic_volumes_cellset(empty)) == (0, 0, 0, 0)


class TestAxioms:
    def test_isometry_invariance(self):
        rng = random.Random(23)
        for seed in range(25):
            n = 2 + seed % 2
            x = gen_random_convex(n, 5, 0.4, 400 + seed)
            perm = tuple(rng.sample(range(n), n))
            signs = tuple(rng.choice([1, -1]) for _ in range(n))
            g = SignedPerm(perm, signs)
            shift = tuple(x.resolution * rng.randint(-3, 3) for _ in range(n))
            moved = apply_isometry(x, g, shift)
            assert isinstance(moved, CellSet)
            assert intrinsic_volumes_cellset(moved) == intrinsic_volumes_cellset(x)

    def test_scale_homogeneity(self):
        x = CellSet(2, {(0, 0), (1, 0), (0, 1)})
        base = intrinsic_volumes_cellset(x)
        for m in (2, 3):
            big = intrinsic_volumes_cellset(scale(x, m))
            assert tuple(big) == tuple(m**i * v for i, v in enumerate(base))

    def test_monotone_on_convex_pairs(self):
        for seed in range(15):
            x = gen_random_convex(2, 5, 0.5, 800 + seed)
            sub = CellSet(
                2,
                [c for c in x.cells if (c[0] + c[1]) % 2 == 0] or x.sorted_cells()[:1],
                x.resolution,
            )
            smaller = convexify(sub)
            if not (smaller.cells <= x.cells):
                continue
            a = intrinsic_volumes_cellset(smaller)
            b = intrinsic_volumes_cellset(x)
            assert all(a[i] <= b[i] for i in range(3))

    def test_additivity_point_level(self):
        # valuation rule on a genuine overlap, computed on box unions where
        # the intersection is the true point intersection
        a = BoxUnion(2, [RatBox((0, 0), (2, 1))])
        b = BoxUnion(2, [RatBox((1, 0), (3, 1))])
        inter = BoxUnion(2, [RatBox((1, 0), (2, 1))])
        lhs = intrinsic_volumes_boxunion(BoxUnion(2, list(a.boxes) + list(b.boxes)))
        rhs = [
            intrinsic_volumes_boxunion(a)[i]
            + intrinsic_volumes_boxunion(b)[i]
            - intrinsic_volumes_boxunion(inter)[i]
            for i in range(3)
        ]
        assert list(lhs) == rhs


class TestProducts:
    def test_tromino_times_interval(self):
        x = CellSet(2, {(0, 0), (1, 0), (0, 1)})
        y = CellSet(1, {(0,), (1,)})
        prod = cellset_product(x, y)
        assert prod.dimension == 3
        lhs = intrinsic_volumes_cellset(prod)
        rhs = product_rhs(intrinsic_volumes_cellset(x), intrinsic_volumes_cellset(y))
        assert lhs == rhs
        assert tuple(lhs) == (1, 6, 11, 6)

    def test_random_products(self):
        for seed in range(12):
            x = gen_random_convex(2, 4, 0.4, 900 + seed)
            y = gen_random_convex(1, 4, 0.6, 901 + seed)
            lhs = intrinsic_volumes_cellset(cellset_product(x, y))
            rhs = product_rhs(
                intrinsic_volumes_cellset(x), intrinsic_volumes_cellset(y)
            )
            assert lhs == rhs

    def test_product_with_point(self):
        x = CellSet(2, {(0, 0), (1, 1)})
        point = CellSet(0, {()})
        assert cellset_product(x, point).sorted_cells() == x.sorted_cells()

    def test_resolution_mismatch(self):
        with pytest.raises(ValueError):
            cellset_product(CellSet(1, {(0,)}), CellSet(1, {(0,)}, F(1, 2)))


class TestIVVector:
    def test_accessors(self):
        v = IVVector((1, 4, 3))
        assert v.dimension == 2
        assert v[1] == 4
        assert tuple(v) == (1, 4, 3)
        assert len(v) == 3

    def test_fractions(self):
        v = IVVector((F(1), F(1, 2)))
        assert v[1] == F(1, 2)

    def test_equality(self):
        assert IVVector((1, 2)) == IVVector((F(1), F(2)))
        assert IVVector((1, 2)) != IVVector((1, 3))

    def test_validation(self):
        with pytest.raises(ValueError):
            IVVector(())

    def test_generic_dispatch(self):
        x = CellSet(2, {(0, 0)})
        assert intrinsic_volumes(x) == intrinsic_volumes_cellset(x)
        u = cellset_to_boxunion(x)
        assert intrinsic_volumes(u) == intrinsic_volumes_boxunion(u)
