"""Exact intrinsic volumes for the taxicab metric.

The degree-i intrinsic volume of a pixellated set X in R^n is the sum, over
all C(n, i) coordinate subspaces P, of the i-dimensional volume of the
projection of X onto P.  Degree 0 is the nonempty indicator, degree n the
volume.  On convex sets these are valuation-additive, invariant under signed
permutations and translations, homogeneous of degree i under dilation, and
multiplicative under cartesian products.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ._util import RationalLike, as_fraction
from .lattice import (
    BoxUnion,
    CellSet,
    IVVector,
    coordinate_subspaces,
    project,
    union_volume,
)

_NUMPY_CELL_THRESHOLD = 4096


def _distinct_projection_count(cells_arr: np.ndarray, axes: tuple[int, ...]) -> int:
    sub = cells_arr[:, axes]
    return int(np.unique(sub, axis=0).shape[0])


def intrinsic_volumes_cellset(x: CellSet) -> IVVector:
    """Exact intrinsic-volume vector of a cell set.

    Degree i counts distinct projected cell indices over every i-subset of
    axes, scaled by resolution^i.
    """
    n = x.dimension
    if not x.cells:
        return IVVector((Fraction(0),) * (n + 1))
    lam = x.resolution
    values: list[Fraction] = [Fraction(1)]
    big = len(x.cells) > _NUMPY_CELL_THRESHOLD
    arr = np.asarray(x.sorted_cells(), dtype=np.int64) if big else None
    for i in range(1, n + 1):
        total = 0
        for sub in coordinate_subspaces(n, i):
            if big:
                total += _distinct_projection_count(arr, sub.axes)
            else:
                total += len({tuple(c[a] for a in sub.axes) for c in x.cells})
        values.append(lam**i * total)
    return IVVector(values)


def intrinsic_volumes_boxunion(u: BoxUnion) -> IVVector:
    """Exact intrinsic-volume vector of a box union (degenerate boxes allowed):
    degree i sums exact projected volumes over the i-dimensional coordinate
    subspaces."""
    n = u.dimension
    if u.is_empty:
        return IVVector((Fraction(0),) * (n + 1))
    values = [Fraction(1)]
    for i in range(1, n + 1):
        total = Fraction(0)
        for sub in coordinate_subspaces(n, i):
            total += union_volume(project(u, sub))
        values.append(total)
    return IVVector(values)


def intrinsic_volumes(x: CellSet | BoxUnion) -> IVVector:
    if isinstance(x, CellSet):
        return intrinsic_volumes_cellset(x)
    return intrinsic_volumes_boxunion(x)


def euler_characteristic(x: CellSet | BoxUnion) -> int:
    """The nonempty indicator — the combinatorial Euler characteristic of a
    taxicab-convex set (convex sets are contractible)."""
    empty = x.is_empty
    return 0 if empty else 1


def elementary_symmetric(lengths) -> tuple[Fraction, ...]:
    """Coefficients (e_0, ..., e_k) of prod_i (1 + u_i t) for side lengths u.

    These are the intrinsic volumes of a box with those side lengths.
    Negative lengths are rejected.
    """
    vals = [as_fraction(v) for v in lengths]
    if any(v < 0 for v in vals):
        raise ValueError("side lengths must be nonnegative")
    coeffs = [Fraction(1)]
    for u in vals:
        nxt = coeffs + [Fraction(0)]
        for j in range(len(coeffs), 0, -1):
            nxt[j] = nxt[j] + u * coeffs[j - 1]
        coeffs = nxt
    return tuple(coeffs)


def box_intrinsic_volumes(sides) -> IVVector:
    return IVVector(elementary_symmetric(sides))


def cellset_product(x: CellSet, y: CellSet) -> CellSet:
    """Cartesian product of two cell sets on a common resolution."""
    if x.resolution != y.resolution:
        raise ValueError("resolution mismatch")
    cells = {cx + cy for cx in x.cells for cy in y.cells}
    return CellSet(x.dimension + y.dimension, cells, x.resolution)


def product_rhs(vx: IVVector, vy: IVVector) -> IVVector:
    """Predicted intrinsic volumes of a product: the convolution
    V'_k(X x Y) = sum_{i+j=k} V'_i(X) V'_j(Y)."""
    n, m = vx.dimension, vy.dimension
    out = []
    for k in range(n + m + 1):
        s = Fraction(0)
        for i in range(max(0, k - m), min(n, k) + 1):
            s += vx[i] * vy[k - i]
        out.append(s)
    return IVVector(out)


def ball_intrinsic_volumes(n: int, radius: RationalLike = 1) -> IVVector:
    """Exact intrinsic volumes of the taxicab ball of a given radius:
    degree i equals C(n, i) * (2r)^i / i!."""
    from math import comb, factorial

    r = as_fraction(radius)
    vals = [Fraction(comb(n, i)) * (2 * r) ** i / factorial(i) for i in range(n + 1)]
    return IVVector(vals)
