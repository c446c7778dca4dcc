"""Deciding geodesic convexity of cell sets in the taxicab metric.

A union of grid cubes is geodesically convex for the 1-norm iff every pair
of points is joined by a componentwise-monotone path inside the set.  For a
CellSet this reduces to a finite pairwise criterion on cell indices:

    for every pair of cells h, h' with max_i |h_i - h'_i| >= 2 there is a
    third cell k of the set with k_i between h_i and h'_i in every axis.

Sufficiency: two cubes whose indices differ by at most 1 in every axis touch,
and a dilation of a discrete set with a strict-betweenness witness for every
separated pair is geodesic.  Necessity: a monotone path between the centers
of two cubes separated by >= 2 in some axis crosses the open slab between
them, and the cube containing the crossing point is a strictly intermediate
cell.  The decision procedure below is this pairwise criterion — path search
(`monotone_reachable`) is kept separate as a one-sided sanity oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .lattice import Cell, CellSet, RatBox, cell_box

_PREFIX_GRID_LIMIT = 30_000_000


@dataclass(frozen=True)
class ConvexityVerdict:
    """Outcome of the convexity test; ``witness`` is the lexicographically
    smallest violating pair when the set is not convex."""

    is_convex: bool
    witness: tuple[Cell, Cell] | None = None

    def __bool__(self) -> bool:
        return self.is_convex


def _witness_direct(arr: np.ndarray, collect: bool = False):
    """Pairwise scan with explicit betweenness tests, anchors chunked so the
    (chunk, m, m, n) comparison block stays small.  Returns the first (lex
    order) violating index pair, or with ``collect`` the array of all pairs."""
    m = arr.shape[0]
    if m < 2:
        return [] if collect else None
    chunk = max(1, 2_000_000 // (m * m))
    found = []
    cols = np.arange(m)
    for start in range(0, m, chunk):
        anchors = arr[start:start + chunk]          # (c, n)
        far = np.abs(anchors[:, None, :] - arr[None, :, :]).max(axis=2) >= 2
        far &= cols[None, :] > np.arange(start, start + anchors.shape[0])[:, None]
        if not far.any():
            continue
        lo = np.minimum(anchors[:, None, :], arr[None, :, :])   # (c, m, n)
        hi = np.maximum(anchors[:, None, :], arr[None, :, :])
        between = (
            (arr[None, None, :, :] >= lo[:, :, None, :])
            & (arr[None, None, :, :] <= hi[:, :, None, :])
        ).all(axis=3)
        counts = between.sum(axis=2)                # (c, m)
        bad = far & (counts < 3)
        if not bad.any():
            continue
        pairs = np.argwhere(bad)                    # row-major: lex order
        pairs[:, 0] += start
        if not collect:
            return int(pairs[0, 0]), int(pairs[0, 1])
        found.append(pairs)
    if collect:
        return np.concatenate(found) if found else []
    return None


def _witness_prefix(arr: np.ndarray, collect: bool = False):
    """Prefix-sum variant: counts cells in an index box by inclusion-exclusion.

    Builds the cumulative count grid of the cell indicator over the bounding
    box, then answers every pair's "how many cells lie between" query in
    O(2^n) gathers, vectorized over anchor chunks.  Same contract as
    ``_witness_direct``.
    """
    m, n = arr.shape
    if m < 2:
        return [] if collect else None
    lo = arr.min(axis=0)
    extent = arr.max(axis=0) - lo + 1
    grid = np.zeros(extent, dtype=np.int32)
    shifted = arr - lo
    grid[tuple(shifted.T)] = 1
    for axis in range(n):
        np.cumsum(grid, axis=axis, out=grid)
    padded = np.zeros(tuple(e + 1 for e in extent), dtype=np.int32)
    padded[tuple(slice(1, None) for _ in range(n))] = grid
    strides = np.asarray(padded.strides, dtype=np.int64) // padded.itemsize
    flat = padded.ravel()

    corners = list(itertools.product((0, 1), repeat=n))
    chunk = max(1, 1_000_000 // m)
    found = []
    cols = np.arange(m)
    for start in range(0, m, chunk):
        anchors = shifted[start:start + chunk]      # (c, n)
        far = np.abs(anchors[:, None, :] - shifted[None, :, :]).max(axis=2) >= 2
        far &= cols[None, :] > np.arange(start, start + anchors.shape[0])[:, None]
        if not far.any():
            continue
        blo = np.minimum(anchors[:, None, :], shifted[None, :, :])  # inclusive
        bhi = np.maximum(anchors[:, None, :], shifted[None, :, :]) + 1
        counts = np.zeros(far.shape, dtype=np.int64)
        for corner in corners:
            pick = np.where(np.asarray(corner, dtype=bool), bhi, blo)
            sign = -1 if (n - sum(corner)) % 2 else 1
            counts += sign * flat[pick @ strides]
        bad = far & (counts < 3)
        if not bad.any():
            continue
        pairs = np.argwhere(bad)
        pairs[:, 0] += start
        if not collect:
            return int(pairs[0, 0]), int(pairs[0, 1])
        found.append(pairs)
    if collect:
        return np.concatenate(found) if found else []
    return None


def is_l1_convex(x: CellSet) -> ConvexityVerdict:
    """Decide taxicab geodesic convexity of a cell set.

    Returns the lexicographically smallest violating pair as witness when not
    convex (pairs ordered by (h, h') with h < h' lexicographically).
    """
    m = len(x.cells)
    if m <= 1:
        return ConvexityVerdict(True, None)
    arr = np.asarray(x.sorted_cells(), dtype=np.int64)
    extent = arr.max(axis=0) - arr.min(axis=0) + 1
    grid_size = 1
    for e in extent:
        grid_size *= int(e)
    if m >= 48 and grid_size <= _PREFIX_GRID_LIMIT:
        hit = _witness_prefix(arr)
    else:
        hit = _witness_direct(arr)
    if hit is None:
        return ConvexityVerdict(True, None)
    i, j = hit
    return ConvexityVerdict(False, (tuple(map(int, arr[i])), tuple(map(int, arr[j]))))


def convexify(x: CellSet, bound: RatBox | None = None) -> CellSet:
    """Grow X to a convex set by repeated midpoint insertion.

    Each round collects every violating pair and inserts the componentwise
    floor midpoint of each, which is a new cell strictly between the pair
    whenever some axis gap is >= 2, so every round strictly grows the set.
    Inserted cells stay inside the bounding box of X, so the loop terminates.
    ``bound``, when given, must contain X (checked); it never constrains the
    result further.
    """
    if bound is not None and x.cells:
        lam = x.resolution
        for c in x.cells:
            cube = cell_box(c, lam)
            inside = all(
                bound.mins[i] <= cube.mins[i] and cube.maxs[i] <= bound.maxs[i]
                for i in range(x.dimension)
            )
            if not inside:
                raise ValueError(f"cell {c} lies outside the stated bound")
    cells = set(x.cells)
    n = x.dimension
    while True:
        if len(cells) < 2:
            return CellSet(n, cells, x.resolution)
        arr = np.asarray(sorted(cells), dtype=np.int64)
        extent = arr.max(axis=0) - arr.min(axis=0) + 1
        grid_size = 1
        for e in extent:
            grid_size *= int(e)
        scan = _witness_prefix if (len(cells) >= 48 and grid_size <= _PREFIX_GRID_LIMIT) else _witness_direct
        pairs = scan(arr, collect=True)
        if len(pairs) == 0:
            return CellSet(n, cells, x.resolution)
        mids = (arr[pairs[:, 0]] + arr[pairs[:, 1]]) // 2
        before = len(cells)
        cells.update(map(tuple, np.unique(mids, axis=0).tolist()))
        if len(cells) == before:
            raise AssertionError("violating pairs produced no new midpoint cell")


def split_halves(x: CellSet, axis: int, threshold: int) -> tuple[CellSet, CellSet]:
    """Partition by cell index along an axis: (cells with h_axis >= t, rest)."""
    if not 0 <= axis < x.dimension:
        raise ValueError("axis out of range")
    upper = {c for c in x.cells if c[axis] >= threshold}
    lower = x.cells - upper
    return (
        CellSet(x.dimension, upper, x.resolution),
        CellSet(x.dimension, lower, x.resolution),
    )


def is_orthogonally_convex(x: CellSet) -> bool:
    """Does every axis-parallel line of cells meet X in consecutive cells?

    A necessary condition for convexity: group the cells by all coordinates
    but one and require the remaining coordinate to fill an integer interval.
    """
    n = x.dimension
    if n == 0 or len(x.cells) < 2:
        return True
    for axis in range(n):
        lines: dict[tuple[int, ...], list[int]] = {}
        for c in x.cells:
            key = c[:axis] + c[axis + 1 :]
            lines.setdefault(key, []).append(c[axis])
        for values in lines.values():
            if max(values) - min(values) + 1 != len(values):
                return False
    return True


def monotone_reachable(x: CellSet, a: Cell, b: Cell) -> bool:
    """Is there a path of cells from a to b inside X whose king-move steps are
    all componentwise monotone toward b (never overshooting)?

    A sound one-sided oracle for convexity: on a convex set every pair is
    reachable; the converse is not relied upon.
    """
    a, b = tuple(a), tuple(b)
    if a not in x.cells or b not in x.cells:
        raise ValueError("both endpoints must be cells of X")
    cells = x.cells
    n = x.dimension
    seen = set()
    stack = [a]
    while stack:
        c = stack.pop()
        if c == b:
            return True
        if c in seen:
            continue
        seen.add(c)
        options = []
        for i in range(n):
            if b[i] > c[i]:
                options.append((0, 1))
            elif b[i] < c[i]:
                options.append((0, -1))
            else:
                options.append((0,))
        for step in itertools.product(*options):
            if all(s == 0 for s in step):
                continue
            nxt = tuple(c[i] + step[i] for i in range(n))
            if nxt in cells and nxt not in seen:
                stack.append(nxt)
    return False


def all_pairs_monotone_reachable(x: CellSet) -> bool:
    """Check monotone reachability for every ordered pair of cells of X.

    Vectorized fixpoint: reach[t, c] says cell c can reach target cell t.
    Each allowed step strictly decreases the taxicab distance to the target,
    so iterating the step relaxations to a fixpoint computes reachability.
    """
    m = len(x.cells)
    if m <= 1:
        return True
    arr = np.asarray(x.sorted_cells(), dtype=np.int64)
    n = x.dimension
    index = {tuple(map(int, arr[i])): i for i in range(m)}

    steps = [s for s in itertools.product((-1, 0, 1), repeat=n) if any(s)]
    neighbor = np.full((len(steps), m), -1, dtype=np.int64)
    for si, s in enumerate(steps):
        for ci in range(m):
            tgt = tuple(int(arr[ci, i] + s[i]) for i in range(n))
            neighbor[si, ci] = index.get(tgt, -1)

    diff = arr[:, None, :] - arr[None, :, :]  # diff[t, c, i] = t_i - c_i
    allowed = []
    for s in steps:
        ok = np.ones((m, m), dtype=bool)
        for i in range(n):
            if s[i] == 1:
                ok &= diff[:, :, i] >= 1
            elif s[i] == -1:
                ok &= diff[:, :, i] <= -1
        allowed.append(ok)

    reach = np.eye(m, dtype=bool)
    changed = True
    while changed:
        changed = False
        for si in range(len(steps)):
            nbr = neighbor[si]
            valid = nbr >= 0
            if not valid.any():
                continue
            gathered = np.zeros((m, m), dtype=bool)
            gathered[:, valid] = reach[:, nbr[valid]]
            upd = allowed[si] & gathered & ~reach
            if upd.any():
                reach |= upd
                changed = True
    return bool(reach.all())
