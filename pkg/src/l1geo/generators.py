"""Seeded random instance generators for the verification suites.

All generators are deterministic functions of their arguments: the RNG is
seeded from a stable hash of the parameters, so the same call always yields
the same instance regardless of process or platform.
"""

from __future__ import annotations

import random
from fractions import Fraction

from ._util import RationalLike, as_fraction, derive_seed
from .convexity import convexify, is_l1_convex
from .lattice import CellSet, RatBox
from .pixellation import L1Ball, outer_pixellate

MODES = ("blob", "staircase", "ball")


def _unrank_cell(index: int, n: int, bound: int) -> tuple[int, ...]:
    coords = []
    for _ in range(n):
        index, r = divmod(index, bound)
        coords.append(r)
    return tuple(coords)


def gen_random_convex(
    n: int,
    bound: int,
    density: float,
    seed: int,
    *,
    mode: str = "blob",
    resolution: RationalLike = 1,
) -> CellSet:
    """A random convex cell set with cells inside [0, bound)^n.

    Modes: "blob" scatters seed cells and repairs them with convexify;
    "staircase" takes the cells under a random monotone weighted-threshold
    boundary (convex by construction); "ball" pixellates a random rational
    ball.  ``density`` in [0, 1] scales the instance; density 0 yields a
    singleton in every mode.  Deterministic in (all arguments).
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if not 0 <= density <= 1:
        raise ValueError("density must lie in [0, 1]")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    lam = as_fraction(resolution)
    if lam <= 0:
        raise ValueError("resolution must be positive")
    rng = random.Random(derive_seed("gen_random_convex", mode, n, bound, repr(density), seed))

    if mode == "ball" and density > 0:
        center = tuple(
            lam * Fraction(rng.randint(0, 2 * bound), 2) for _ in range(n)
        )
        radius = lam * max(Fraction(1, 2), Fraction(round(density * bound * 2), 2))
        out = outer_pixellate(L1Ball(center, radius), lam)
    elif mode == "staircase" and density > 0:
        weights = [rng.randint(1, 4) for _ in range(n)]
        threshold = round(density * sum(w * (bound - 1) for w in weights))
        cells = {
            _unrank_cell(i, n, bound)
            for i in range(bound**n)
        }
        cells = {
            c for c in cells if sum(w * h for w, h in zip(weights, c)) <= threshold
        }
        out = CellSet(n, cells, lam)
    else:
        total = bound**n
        target = max(1, min(total, round(density * total)))
        picks = rng.sample(range(total), k=target)
        seeds = {_unrank_cell(i, n, bound) for i in picks}
        out = convexify(CellSet(n, seeds, lam))

    verdict = is_l1_convex(out)
    if not verdict:
        raise AssertionError(f"generator produced a non-convex set: {verdict.witness}")
    return out


def gen_random_cellset(
    n: int,
    bound: int,
    count: int,
    seed: int,
    *,
    resolution: RationalLike = 1,
) -> CellSet:
    """A random (usually non-convex) cell set: ``count`` distinct cells in
    [0, bound)^n, deterministic in the arguments."""
    if n < 1 or bound < 1:
        raise ValueError("need n >= 1 and bound >= 1")
    total = bound**n
    count = max(0, min(count, total))
    rng = random.Random(derive_seed("gen_random_cellset", n, bound, count, seed))
    picks = rng.sample(range(total), k=count)
    return CellSet(n, {_unrank_cell(i, n, bound) for i in picks}, as_fraction(resolution))


def gen_random_box(
    n: int,
    seed: int,
    *,
    low: int = 0,
    high: int = 6,
    denominator: int = 2,
    aligned: bool = False,
    resolution: RationalLike = 1,
    min_side: RationalLike = 0,
) -> RatBox:
    """A random rational box inside resolution*[low, high]^n.

    With ``aligned`` the corners are grid multiples of the resolution;
    otherwise they are multiples of resolution/denominator.  Sides are at
    least ``min_side`` (in resolution units), deterministic in the arguments.
    """
    if high <= low:
        raise ValueError("need high > low")
    lam = as_fraction(resolution)
    floor_side = as_fraction(min_side)
    rng = random.Random(
        derive_seed("gen_random_box", n, low, high, denominator, aligned, str(lam), str(floor_side), seed)
    )
    den = 1 if aligned else denominator
    mins = []
    maxs = []
    span = (high - low) * den
    for _ in range(n):
        a = rng.randint(0, span)
        b = rng.randint(0, span)
        if a > b:
            a, b = b, a
        lo = lam * (Fraction(a, den) + low)
        hi = lam * (Fraction(b, den) + low)
        if hi - lo < lam * floor_side:
            hi = lo + lam * floor_side
        mins.append(lo)
        maxs.append(hi)
    return RatBox(tuple(mins), tuple(maxs))
