"""Exact and Monte Carlo checks of integral-geometric identities.

Every identity here compares two independently computed sides:

* Steiner: intrinsic volumes of a cube dilation vs a binomial polynomial in
  the dilation width.
* Crofton: the integral of a slice valuation over all axis-parallel flats of
  a fixed dimension (an exact finite sum — slices are constant on the open
  cells of the complementary grid) vs a binomial multiple of one intrinsic
  volume.
* Kubota: projection sums over coordinate subspaces vs a binomial multiple.
* Kinematic: the measure of colliding placements of a moving copy of X
  against a fixed interval, exactly (degree 0) or by seeded Monte Carlo over
  translations (higher degree), vs a bilinear pairing of intrinsic volumes.

The invariant measure on placements is the uniform average over the 2^n n!
signed permutations times Lebesgue measure on translations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm, sqrt

import numpy as np

from ._util import as_fraction
from .lattice import (
    BoxUnion,
    CellSet,
    IVVector,
    RatBox,
    SignedPerm,
    apply_isometry,
    box_intersection,
    cell_box,
    coordinate_subspaces,
    hyperoctahedral_group,
    minkowski_sum_box,
    union_volume,
)
from .valuations import (
    elementary_symmetric,
    intrinsic_volumes_boxunion,
    intrinsic_volumes_cellset,
)


@dataclass(frozen=True)
class MCEstimate:
    """A Monte Carlo estimate with its exact comparison value.

    ``samples`` counts draws per group element; ``standard_error`` is the
    estimated standard deviation of ``estimate``.
    """

    estimate: float
    standard_error: float
    samples: int
    seed: int
    exact_rhs: Fraction

    @property
    def z_score(self) -> float:
        gap = self.estimate - float(self.exact_rhs)
        if self.standard_error == 0:
            return 0.0 if gap == 0 else float("inf")
        return gap / self.standard_error


# ---------------------------------------------------------------------------
# Steiner


def steiner_profile(x: CellSet, dilation: int) -> tuple[IVVector, IVVector]:
    """lhs/rhs vectors for cube dilation by ``dilation`` grid steps.

    lhs_k = V'_k(X + [0, m*lam]^n) computed from the dilated set; rhs_k is
    the polynomial sum_i C(n-i, n-k) V'_i(X) (m*lam)^(k-i).
    """
    if dilation < 0:
        raise ValueError("dilation must be >= 0")
    n = x.dimension
    lam = x.resolution
    width = dilation * lam
    box = RatBox((Fraction(0),) * n, (width,) * n)
    dilated = minkowski_sum_box(x, box)
    lhs = intrinsic_volumes_cellset(dilated)
    base = intrinsic_volumes_cellset(x)
    rhs = [
        sum(
            (comb(n - i, n - k) * base[i] * width ** (k - i) for i in range(k + 1)),
            start=Fraction(0),
        )
        for k in range(n + 1)
    ]
    return lhs, IVVector(rhs)


def steiner_check(x: CellSet, k: int, dilation: int) -> tuple[Fraction, Fraction]:
    """(lhs, rhs) of the Steiner identity in degree k."""
    if not 0 <= k <= x.dimension:
        raise ValueError("degree out of range")
    lhs, rhs = steiner_profile(x, dilation)
    return lhs[k], rhs[k]


# ---------------------------------------------------------------------------
# Crofton


def crofton_profile(x: CellSet, k: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """lhs/rhs tuples over j = 0..k for flats of dimension k.

    The flat integral is an exact finite sum: flats parallel to subspace P
    meet X in a set depending only on which complementary grid cell the
    offset lies in, so the integral is lam^(n-k) times a sum of slice
    valuations over occupied complementary cells.
    """
    n = x.dimension
    if not 0 <= k <= n:
        raise ValueError("flat dimension out of range")
    lam = x.resolution
    lhs = [Fraction(0)] * (k + 1)
    weight = lam ** (n - k)
    for sub in coordinate_subspaces(n, k):
        comp = sub.complement().axes
        groups: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
        for c in x.cells:
            key = tuple(c[a] for a in comp)
            groups.setdefault(key, set()).add(tuple(c[a] for a in sub.axes))
        for cells in groups.values():
            slice_iv = intrinsic_volumes_cellset(CellSet(k, cells, lam))
            for j in range(k + 1):
                lhs[j] += weight * slice_iv[j]
    base = intrinsic_volumes_cellset(x)
    rhs = [comb(n + j - k, j) * base[n + j - k] for j in range(k + 1)]
    return tuple(lhs), tuple(rhs)


def crofton_integral(x: CellSet, k: int, j: int) -> tuple[Fraction, Fraction]:
    """(lhs, rhs) of the flat-integral identity for k-flats in degree j."""
    if not 0 <= j <= k <= x.dimension:
        raise ValueError("need 0 <= j <= k <= n")
    lhs, rhs = crofton_profile(x, k)
    return lhs[j], rhs[j]


# ---------------------------------------------------------------------------
# Kubota


def kubota_profile(x: CellSet, k: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """lhs/rhs tuples over j = 0..k for projections onto k-subspaces."""
    from .lattice import project

    n = x.dimension
    if not 0 <= k <= n:
        raise ValueError("subspace dimension out of range")
    lhs = [Fraction(0)] * (k + 1)
    for sub in coordinate_subspaces(n, k):
        proj_iv = intrinsic_volumes_cellset(project(x, sub))
        for j in range(k + 1):
            lhs[j] += proj_iv[j]
    base = intrinsic_volumes_cellset(x)
    rhs = [comb(n - j, n - k) * base[j] for j in range(k + 1)]
    return tuple(lhs), tuple(rhs)


def kubota_sum(x: CellSet, k: int, j: int) -> tuple[Fraction, Fraction]:
    """(lhs, rhs) of the projection-sum identity."""
    if not 0 <= j <= k <= x.dimension:
        raise ValueError("need 0 <= j <= k <= n")
    lhs, rhs = kubota_profile(x, k)
    return lhs[j], rhs[j]


# ---------------------------------------------------------------------------
# kinematic: exact principal form


def principal_kinematic_rhs(x: CellSet, box: RatBox) -> Fraction:
    vx = intrinsic_volumes_cellset(x)
    e = elementary_symmetric(box.side_lengths())
    n = x.dimension
    return sum(
        (Fraction(1, comb(n, i)) * vx[i] * e[n - i] for i in range(n + 1)),
        start=Fraction(0),
    )


def kinematic_principal(x: CellSet, box: RatBox | None) -> tuple[Fraction, Fraction]:
    """(lhs, rhs) for the collision measure of a moving copy of X with a box.

    lhs averages, over all signed permutations g, the exact volume of
    {q : (gX + q) meets I} — a union of reflected boxes.  An absent interval
    (box=None) returns (0, 0) by convention.
    """
    if box is None:
        return Fraction(0), Fraction(0)
    n = x.dimension
    if box.dimension != n:
        raise ValueError("dimension mismatch")
    if n == 0:
        val = Fraction(1) if not x.is_empty else Fraction(0)
        return val, val
    lam = x.resolution
    group = hyperoctahedral_group(n)
    total = Fraction(0)
    for g in group:
        boxes = []
        for c in x.cells:
            img = g.apply_cell(c)
            cube = cell_box(img, lam)
            boxes.append(
                RatBox(
                    tuple(box.mins[i] - cube.maxs[i] for i in range(n)),
                    tuple(box.maxs[i] - cube.mins[i] for i in range(n)),
                )
            )
        total += union_volume(BoxUnion(n, boxes))
    lhs = total / len(group)
    return lhs, principal_kinematic_rhs(x, box)


# ---------------------------------------------------------------------------
# kinematic: higher degrees by Monte Carlo over translations


def clip_translate(x: CellSet, g: SignedPerm, translation, box: RatBox) -> BoxUnion:
    """The exact box union (gX + q) clipped to a box; degenerate pieces kept."""
    n = x.dimension
    q = tuple(as_fraction(v) for v in translation)
    if g.dimension != n or box.dimension != n or len(q) != n:
        raise ValueError("dimension mismatch")
    lam = x.resolution
    pieces = []
    for c in sorted(x.cells):
        cube = cell_box(g.apply_cell(c), lam).translate(q)
        hit = box_intersection(cube, box)
        if hit is not None:
            pieces.append(hit)
    return BoxUnion(n, pieces)


def exact_clip_valuation(x: CellSet, g: SignedPerm, translation, box: RatBox, k: int) -> Fraction:
    """Reference route for the Monte Carlo integrand: clip, then take V'_k."""
    return intrinsic_volumes_boxunion(clip_translate(x, g, translation, box))[k]


def higher_kinematic_rhs(x: CellSet, box: RatBox, k: int) -> Fraction:
    vx = intrinsic_volumes_cellset(x)
    e = elementary_symmetric(box.side_lengths())
    n = x.dimension
    total = Fraction(0)
    for j in range(k, n + 1):
        i = n + k - j
        if 0 <= i <= n:
            total += Fraction(comb(j, k), comb(n, i)) * vx[i] * e[j]
    return total


class _ElementSampler:
    """Vectorized exact evaluator of q -> V'_k((gX + q) clipped to I).

    All coordinates are scaled by a common denominator times 2^bits so that
    dyadic sample translations, cube corners, and the clip box are integers;
    per-sample values are integer multiples of scale^-k.  Per coordinate
    subspace, cells sharing a projected index contribute one segment whose
    side lengths are common to the segment, so the projected volume is a
    gated sum of segment products.  This equals V'_k of the clipped union
    (clipped cubes of distinct projected indices have disjoint interiors).
    """

    def __init__(self, x: CellSet, g: SignedPerm, box: RatBox, k: int, bits: int):
        n = x.dimension
        lam = x.resolution
        denom = lcm(
            lam.denominator,
            *(v.denominator for v in box.mins),
            *(v.denominator for v in box.maxs),
        )
        self.n = n
        self.k = k
        self.bits = bits
        self.denom = denom
        self.scale = denom << bits

        cells = np.asarray([g.apply_cell(c) for c in x.sorted_cells()], dtype=np.int64)
        lam_scaled = int(lam * denom) << bits
        self.lows = cells * lam_scaled
        self.highs = self.lows + lam_scaled
        self.box_lo = np.asarray([int(v * denom) << bits for v in box.mins], dtype=np.int64)
        self.box_hi = np.asarray([int(v * denom) << bits for v in box.maxs], dtype=np.int64)

        self.support_lo = self.box_lo - self.highs.max(axis=0)
        self.support_hi = self.box_hi - self.lows.min(axis=0)
        self.step = (self.support_hi - self.support_lo) >> bits
        vol = Fraction(1)
        for w in (self.support_hi - self.support_lo):
            vol *= Fraction(int(w), self.scale)
        self.support_volume = vol

        # segment structure per k-subspace
        self.subspaces = []
        m = cells.shape[0]
        for sub in coordinate_subspaces(n, k):
            if sub.axes:
                keys = cells[:, list(sub.axes)]
                order = np.lexsort(keys.T[::-1])
                sorted_keys = keys[order]
                new_seg = np.ones(m, dtype=bool)
                new_seg[1:] = (sorted_keys[1:] != sorted_keys[:-1]).any(axis=1)
                starts = np.flatnonzero(new_seg)
            else:
                order = np.arange(m)
                starts = np.asarray([0])
            reps = order[starts]
            self.subspaces.append((sub.axes, order, starts, reps))

        # rigorous int64 overflow bound for the gated segment sums
        max_len = [
            min(int(lam_scaled), int(self.box_hi[i] - self.box_lo[i]))
            for i in range(n)
        ]
        bound = 0
        for axes, _, starts, _ in self.subspaces:
            prod = 1
            for i in axes:
                prod *= max(max_len[i], 1)
            bound += prod * max(len(starts), 1)
        coord_mag = max(
            int(np.abs(self.lows).max(initial=0)),
            int(np.abs(self.highs).max(initial=0)),
            int(np.abs(self.support_lo).max(initial=0)),
            int(np.abs(self.support_hi).max(initial=0)),
        )
        self.int64_safe = bound < (1 << 62) and 4 * coord_mag < (1 << 62)

    def sample_points(self, t: np.ndarray) -> np.ndarray:
        """Scaled translations for dyadic draws t in [0, 2^bits)^n."""
        return self.support_lo[None, :] + t * self.step[None, :]

    def values(self, q_scaled: np.ndarray) -> np.ndarray:
        """Integer per-sample values: V'_k at q equals values/scale^k."""
        nsamp = q_scaled.shape[0]
        lengths = []
        alive = np.ones((nsamp, self.lows.shape[0]), dtype=bool)
        for i in range(self.n):
            lo = np.maximum(self.lows[None, :, i] + q_scaled[:, i, None], self.box_lo[i])
            hi = np.minimum(self.highs[None, :, i] + q_scaled[:, i, None], self.box_hi[i])
            length = hi - lo
            alive &= length >= 0
            lengths.append(length)
        out = np.zeros(nsamp, dtype=np.int64)
        for axes, order, starts, reps in self.subspaces:
            counts = np.add.reduceat(alive[:, order].astype(np.int64), starts, axis=1)
            prod = np.ones((nsamp, len(starts)), dtype=np.int64)
            for i in axes:
                prod *= np.maximum(lengths[i][:, reps], 0)
            out += (prod * (counts > 0)).sum(axis=1)
        return out


def kinematic_higher_mc(
    x: CellSet,
    box: RatBox,
    k: int,
    samples: int,
    seed: int,
    *,
    bits: int = 16,
    block_size: int = 8192,
) -> MCEstimate:
    """Monte Carlo estimate of the integrated degree-k valuation of clipped
    placements, with its exact closed-form comparison value.

    For each signed permutation g the translation integral over the support
    box is estimated from ``samples`` dyadic rational draws; draws are exact,
    per-sample values are exact rationals, and only the mean/variance
    aggregation uses floats.  Block b of group element e draws from the RNG
    stream seeded by (seed, e, b), so results are reproducible and
    independent of any execution schedule.
    """
    n = x.dimension
    if not 0 <= k <= n:
        raise ValueError("degree out of range")
    if samples < 2:
        raise ValueError("need at least 2 samples per group element")
    if box.dimension != n:
        raise ValueError("dimension mismatch")
    rhs = higher_kinematic_rhs(x, box, k)
    if x.is_empty:
        return MCEstimate(0.0, 0.0, samples, seed, rhs)

    group = hyperoctahedral_group(n)
    est_sum = 0.0
    var_sum = 0.0
    for e_idx, g in enumerate(group):
        sampler = None
        for b in range(bits, 3, -1):
            sampler = _ElementSampler(x, g, box, k, b)
            if sampler.int64_safe:
                break
        if sampler is None or not sampler.int64_safe:
            raise ValueError("coordinates too large for the int64 sampling path")
        scale_k = float(sampler.scale) ** k
        total = 0.0
        total_sq = 0.0
        done = 0
        block = 0
        while done < samples:
            count = min(block_size, samples - done)
            rng = np.random.default_rng(np.random.SeedSequence([seed, e_idx, block]))
            t = rng.integers(0, 1 << sampler.bits, size=(block_size, n), dtype=np.int64)
            vals = sampler.values(sampler.sample_points(t[:count]))
            real = vals.astype(np.float64) / scale_k
            total += float(real.sum())
            total_sq += float((real * real).sum())
            done += count
            block += 1
        mean = total / samples
        var = max(total_sq - samples * mean * mean, 0.0) / (samples - 1)
        vol = float(sampler.support_volume)
        est_sum += vol * mean
        var_sum += vol * vol * var / samples
    m = len(group)
    return MCEstimate(est_sum / m, sqrt(var_sum) / m, samples, seed, rhs)
