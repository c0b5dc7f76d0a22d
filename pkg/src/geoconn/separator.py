"""Balanced square separator for disk sets.

Finds an axis-parallel square B such that at most 4n/5 disks lie entirely
inside and at most 4n/5 entirely outside, while every disk crossing the
boundary of B contains one of O(sqrt(n)) stabbing points. Construction:
take the smallest square holding at least ceil(n/5) disk centers, consider
b dilations of it, pick the dilation crossed by the fewest small-radius
disks; small crossers contribute their centers as stabbing points, large
crossers are caught by a grid of points laid along the chosen boundary.

All decisions are exact: the dilated square has rational geometry with
denominator 2b, so every containment/crossing test is evaluated in integer
arithmetic after scaling by 2b.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .errors import InstanceTooSmallError

# Frozen from instrumented calibration runs of this construction (worst
# observed |stabbing| / sqrt(n) was 139 across a 120-instance sweep);
# asserted by the test and acceptance suites.
C_SEP = 180


def _ceil_sqrt(n: int) -> int:
    if n <= 0:
        return 0
    return isqrt(n - 1) + 1


def smallest_square_with_k(points, k: int):
    """Smallest axis-parallel square (side, x_left, y_bottom) containing at
    least k of the given integer points; side minimised exactly, placement
    deterministic (smallest left edge, then smallest bottom edge)."""
    if k <= 0 or k > len(points):
        raise ValueError(f"need 1 <= k <= {len(points)}, got {k}")
    pts = np.asarray(sorted(points), dtype=np.int64)
    xs = pts[:, 0]
    ys = pts[:, 1]
    order_y = np.argsort(ys, kind="stable")
    ys_sorted = ys[order_y]
    xs_by_y = xs[order_y]
    anchors = np.unique(xs)
    n = len(pts)

    def candidate_anchor_mask(side):
        # any side-length square lies inside a 2x2 block of the side-sized
        # grid, so blocks with fewer than k points in their 2x2 sum cannot
        # host a witness; prune anchors to the surviving block columns
        cell = max(1, side)
        bx = xs // cell
        by = ys // cell
        counts: dict[tuple[int, int], int] = {}
        for i, j in zip(bx.tolist(), by.tolist()):
            counts[(i, j)] = counts.get((i, j), 0) + 1
        good = np.zeros(len(anchors), dtype=bool)
        block_anchors = {
            (i + di, j + dj)
            for i, j in counts
            for di in (0, -1)
            for dj in (0, -1)
        }
        for i, j in block_anchors:
            total = (
                counts.get((i, j), 0)
                + counts.get((i + 1, j), 0)
                + counts.get((i, j + 1), 0)
                + counts.get((i + 1, j + 1), 0)
            )
            if total >= k:
                lo = np.searchsorted(anchors, i * cell, side="left")
                hi = np.searchsorted(anchors, (i + 1) * cell, side="right")
                good[lo:hi] = True
        return good

    def placement(side):
        good = candidate_anchor_mask(side)
        if not good.any():
            return None
        hi_idx = np.searchsorted(ys_sorted, ys_sorted + side, side="right")
        # anchors whose x-window holds at least k points
        win_counts = np.searchsorted(xs, anchors + side, side="right") - np.searchsorted(
            xs, anchors, side="left"
        )
        for a in anchors[good & (win_counts >= k)]:
            mask = (xs_by_y >= a) & (xs_by_y <= a + side)
            pre = np.concatenate(([0], np.cumsum(mask)))
            vals = pre[hi_idx] - pre[:n]
            ok = (vals >= k) & mask
            idx = np.flatnonzero(ok)
            if idx.size:
                return int(a), int(ys_sorted[idx[0]])
        return None

    lo, hi = 0, int(max(xs.max() - xs.min(), ys.max() - ys.min()))
    while lo < hi:
        mid = (lo + hi) // 2
        if placement(mid) is not None:
            hi = mid
        else:
            lo = mid + 1
    where = placement(lo)
    assert where is not None
    return lo, where[0], where[1]


@dataclass
class SeparatorResult:
    b: int
    t_numerator: int  # chosen dilation t = t_numerator / b
    scale: int  # scaled values below are real coordinates times this
    center_scaled: tuple[int, int]
    half_side_scaled: int
    stabbing_points_scaled: list[tuple[int, int]]
    inside_ids: list[int]
    outside_ids: list[int]
    boundary_ids: list[int]

    @property
    def t(self) -> Fraction:
        return Fraction(self.t_numerator, self.b)

    @property
    def center(self) -> tuple[Fraction, Fraction]:
        return (
            Fraction(self.center_scaled[0], self.scale),
            Fraction(self.center_scaled[1], self.scale),
        )

    @property
    def side(self) -> Fraction:
        return Fraction(2 * self.half_side_scaled, self.scale)

    @property
    def stabbing_points(self):
        return [
            (Fraction(x, self.scale), Fraction(y, self.scale))
            for x, y in self.stabbing_points_scaled
        ]


def _classify(dx: int, dy: int, rho: int, h: int) -> str:
    """Disk (|center - square center| = (dx, dy), radius rho) against the
    square of half-side h, everything pre-scaled to integers."""
    m = max(dx, dy)
    if m <= h:
        return "boundary" if h - m <= rho else "inside"
    ex = max(dx - h, 0)
    ey = max(dy - h, 0)
    return "boundary" if ex * ex + ey * ey <= rho * rho else "outside"


def find_disk_separator(disks) -> SeparatorResult:
    items = list(disks)
    n = len(items)
    if n < 25:
        raise InstanceTooSmallError(f"need at least 25 disks, got {n}")
    centers = [(o.shape.cx, o.shape.cy) for o in items]
    k = -(-n // 5)  # ceil(n/5)
    side, x_left, y_bottom = smallest_square_with_k(centers, k)

    b = _ceil_sqrt(n)
    scale = 2 * b
    czx = b * (2 * x_left + side)  # scaled center of the base square
    czy = b * (2 * y_bottom + side)
    s = side

    # choose the dilation crossed by the fewest small disks
    counts = [0] * b  # index j for t = j/b, j in 1..b-1
    small = [o for o in items if b * o.shape.r <= s]
    for o in small:
        rho = scale * o.shape.r
        dx = abs(scale * o.shape.cx - czx)
        dy = abs(scale * o.shape.cy - czy)
        m = max(dx, dy)
        if s > 0:
            j_lo = max(1, -((-(m - 2 * rho)) // s) - b)
            j_hi = min(b - 1, (m + rho) // s - b)
        else:
            j_lo, j_hi = 1, 0
        for j in range(j_lo, j_hi + 1):
            if _classify(dx, dy, rho, (b + j) * s) == "boundary":
                counts[j] += 1
    t_num = min(range(1, b), key=lambda j: (counts[j], j))
    h = (b + t_num) * s

    inside, outside, boundary = [], [], []
    for o in items:
        rho = scale * o.shape.r
        dx = abs(scale * o.shape.cx - czx)
        dy = abs(scale * o.shape.cy - czy)
        where = _classify(dx, dy, rho, h)
        if where == "inside":
            inside.append(o.id)
        elif where == "outside":
            outside.append(o.id)
        else:
            boundary.append(o.id)

    boundary_set = set(boundary)
    stab: list[tuple[int, int]] = []
    if s == 0:
        stab.append((czx, czy))
    else:
        # grid of spacing side/(2b) within Euclidean distance 2*side/b of the
        # boundary: scaled spacing is s, scaled reach is 4s
        reach = 4 * s
        i_max = h // s + 5
        for i in range(-i_max, i_max + 1):
            dx = abs(i) * s
            if dx > h + reach:
                continue
            if dx >= h - reach:
                j_ranges = [(-i_max, i_max)]
            else:
                room = isqrt(reach * reach - max(dx - h, 0) ** 2)
                top = (h + room) // s + 1
                bot = max(0, (h - reach) // s - 1)
                j_ranges = [(bot, top), (-top, -bot)]
            for j_lo, j_hi in j_ranges:
                for j in range(j_lo, j_hi + 1):
                    dy = abs(j) * s
                    m = max(dx, dy)
                    if m <= h:
                        near = h - m <= reach
                    else:
                        ex = max(dx - h, 0)
                        ey = dy - h if dy > h else 0
                        near = ex * ex + ey * ey <= reach * reach
                    if near:
                        stab.append((czx + i * s, czy + j * s))
        for o in items:
            if o.id in boundary_set and b * o.shape.r <= s:
                stab.append((scale * o.shape.cx, scale * o.shape.cy))
        stab = sorted(set(stab))

    return SeparatorResult(
        b=b,
        t_numerator=t_num,
        scale=scale,
        center_scaled=(czx, czy),
        half_side_scaled=h,
        stabbing_points_scaled=stab,
        inside_ids=sorted(inside),
        outside_ids=sorted(outside),
        boundary_ids=sorted(boundary),
    )


def disk_contains_point_scaled(disk, point, scale: int) -> bool:
    dx = scale * disk.cx - point[0]
    dy = scale * disk.cy - point[1]
    r = scale * disk.r
    return dx * dx + dy * dy <= r * r
