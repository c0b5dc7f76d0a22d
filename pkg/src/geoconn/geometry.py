"""Exact geometric primitives for the three 2D object families.

All coordinates are bounded signed integers and every predicate is decided
with integer arithmetic only: disks compare squared distances against
squared radius sums, segments use orientation signs plus collinear overlap
tests. Closed-set semantics throughout: touching counts as intersecting.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FamilyMismatchError, GeneralPositionError

COORD_BOUND = 1 << 20

HORIZONTAL = "h"
VERTICAL = "v"

FAMILY_AXIS = "axis"
FAMILY_SEGMENT = "segment"
FAMILY_DISK = "disk"

FAMILIES = (FAMILY_AXIS, FAMILY_SEGMENT, FAMILY_DISK)


@dataclass(frozen=True)
class AxisSegment:
    """Axis-parallel segment: y = fixed, x in [lo, hi] when horizontal,
    x = fixed, y in [lo, hi] when vertical."""

    orientation: str
    fixed: int
    lo: int
    hi: int


@dataclass(frozen=True)
class LineSegment:
    x1: int
    y1: int
    x2: int
    y2: int


@dataclass(frozen=True)
class Disk:
    cx: int
    cy: int
    r: int


Shape = AxisSegment | LineSegment | Disk


@dataclass(frozen=True)
class GeomObject:
    id: int
    shape: Shape


def family_of(shape: Shape) -> str:
    if isinstance(shape, AxisSegment):
        return FAMILY_AXIS
    if isinstance(shape, LineSegment):
        return FAMILY_SEGMENT
    if isinstance(shape, Disk):
        return FAMILY_DISK
    raise TypeError(f"not a shape: {shape!r}")


def validate_shape(shape: Shape, bound: int = COORD_BOUND) -> None:
    """Raise ValueError unless the shape satisfies the model invariants."""
    if isinstance(shape, AxisSegment):
        if shape.orientation not in (HORIZONTAL, VERTICAL):
            raise ValueError(f"bad orientation {shape.orientation!r}")
        if not shape.lo < shape.hi:
            raise ValueError(f"axis segment needs lo < hi, got {shape}")
        coords = (shape.fixed, shape.lo, shape.hi)
    elif isinstance(shape, LineSegment):
        if (shape.x1, shape.y1) == (shape.x2, shape.y2):
            raise ValueError("degenerate line segment")
        coords = (shape.x1, shape.y1, shape.x2, shape.y2)
    elif isinstance(shape, Disk):
        if shape.r < 1:
            raise ValueError(f"disk radius must be >= 1, got {shape.r}")
        coords = (shape.cx, shape.cy, shape.r)
    else:
        raise TypeError(f"not a shape: {shape!r}")
    for v in coords:
        if not isinstance(v, int) or abs(v) > bound:
            raise ValueError(f"coordinate {v} outside +/-{bound}")


# ---------------------------------------------------------------------------
# scalar predicates


def _orient(ax, ay, bx, by, cx, cy):
    """Sign of the cross product (b-a) x (c-a)."""
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


def _on_segment(px, py, ax, ay, bx, by):
    """Point on the closed segment a-b, assuming p is collinear with it."""
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def segments_intersect(ax, ay, bx, by, cx, cy, dx, dy) -> bool:
    """Closed intersection test for segments a-b and c-d."""
    o1 = _orient(ax, ay, bx, by, cx, cy)
    o2 = _orient(ax, ay, bx, by, dx, dy)
    o3 = _orient(cx, cy, dx, dy, ax, ay)
    o4 = _orient(cx, cy, dx, dy, bx, by)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(cx, cy, ax, ay, bx, by):
        return True
    if o2 == 0 and _on_segment(dx, dy, ax, ay, bx, by):
        return True
    if o3 == 0 and _on_segment(ax, ay, cx, cy, dx, dy):
        return True
    if o4 == 0 and _on_segment(bx, by, cx, cy, dx, dy):
        return True
    return False


def _axis_endpoints(s: AxisSegment):
    if s.orientation == HORIZONTAL:
        return s.lo, s.fixed, s.hi, s.fixed
    return s.fixed, s.lo, s.fixed, s.hi


def _axis_axis(a: AxisSegment, b: AxisSegment) -> bool:
    if a.orientation == b.orientation:
        return a.fixed == b.fixed and a.lo <= b.hi and b.lo <= a.hi
    h, v = (a, b) if a.orientation == HORIZONTAL else (b, a)
    return h.lo <= v.fixed <= h.hi and v.lo <= h.fixed <= v.hi


def _seg_seg(a: LineSegment, b: LineSegment) -> bool:
    return segments_intersect(a.x1, a.y1, a.x2, a.y2, b.x1, b.y1, b.x2, b.y2)


def _disk_disk(a: Disk, b: Disk) -> bool:
    dx = a.cx - b.cx
    dy = a.cy - b.cy
    rs = a.r + b.r
    return dx * dx + dy * dy <= rs * rs


def shapes_intersect(a: Shape, b: Shape) -> bool:
    fa, fb = family_of(a), family_of(b)
    if fa != fb:
        raise FamilyMismatchError(f"cannot intersect {fa} with {fb}")
    if fa == FAMILY_AXIS:
        return _axis_axis(a, b)
    if fa == FAMILY_SEGMENT:
        return _seg_seg(a, b)
    return _disk_disk(a, b)


def intersects(a: GeomObject, b: GeomObject) -> bool:
    """Closed intersection predicate; mixed families raise."""
    return shapes_intersect(a.shape, b.shape)


def point_in_box(px, py, x1, y1, x2, y2) -> bool:
    return x1 <= px <= x2 and y1 <= py <= y2


def segment_intersects_box(ax, ay, bx, by, x1, y1, x2, y2) -> bool:
    """Closed segment vs closed axis-aligned box, exact."""
    if point_in_box(ax, ay, x1, y1, x2, y2) or point_in_box(bx, by, x1, y1, x2, y2):
        return True
    # Segment must cross the boundary to intersect without an endpoint inside.
    if x1 == x2 and y1 == y2:
        return _orient(ax, ay, bx, by, x1, y1) == 0 and _on_segment(x1, y1, ax, ay, bx, by)
    for ex1, ey1, ex2, ey2 in (
        (x1, y1, x2, y1),
        (x1, y2, x2, y2),
        (x1, y1, x1, y2),
        (x2, y1, x2, y2),
    ):
        if (ex1, ey1) == (ex2, ey2):
            continue
        if segments_intersect(ax, ay, bx, by, ex1, ey1, ex2, ey2):
            return True
    return False


# ---------------------------------------------------------------------------
# general position (axis family only)


def check_axis_general_position(objs) -> None:
    """Reject axis-aligned sets where two parallel segments are collinear
    with overlapping (closed) ranges. Other families have no constraint."""
    lines: dict[tuple[str, int], list[tuple[int, int]]] = {}
    for o in objs:
        s = o.shape
        if not isinstance(s, AxisSegment):
            return
        lines.setdefault((s.orientation, s.fixed), []).append((s.lo, s.hi))
    for key, ranges in lines.items():
        if len(ranges) < 2:
            continue
        ranges.sort()
        for (lo1, hi1), (lo2, hi2) in zip(ranges, ranges[1:]):
            if lo2 <= hi1:
                raise GeneralPositionError(
                    f"collinear overlap on {key}: [{lo1},{hi1}] and [{lo2},{hi2}]"
                )


def axis_conflicts(existing_ranges: list[tuple[int, int]], lo: int, hi: int) -> bool:
    """True when [lo, hi] overlaps any of the (unsorted) ranges."""
    return any(lo <= h and l <= hi for l, h in existing_ranges)


# ---------------------------------------------------------------------------
# pairwise intersections

_BRUTE_CUTOFF = 140


def brute_force_pairs(objs) -> list[tuple[int, int]]:
    """Reference double loop; kept separate so it can serve as the oracle."""
    out = []
    items = list(objs)
    for i in range(len(items)):
        a = items[i]
        for j in range(i + 1, len(items)):
            b = items[j]
            if intersects(a, b):
                out.append((min(a.id, b.id), max(a.id, b.id)))
    out.sort()
    return out


def pairwise_intersections(objs, method: str = "auto") -> list[tuple[int, int]]:
    """All unordered intersecting id pairs, sorted. `method` picks the
    strategy ('brute', 'accel', 'auto'); the output is identical either way."""
    items = list(objs)
    seen = set()
    for o in items:
        if o.id in seen:
            raise ValueError(f"duplicate object id {o.id}")
        seen.add(o.id)
    fams = {family_of(o.shape) for o in items}
    if len(fams) > 1:
        raise FamilyMismatchError(f"mixed families {sorted(fams)}")
    if method == "brute" or (method == "auto" and len(items) < _BRUTE_CUTOFF):
        return brute_force_pairs(items)
    if method not in ("accel", "auto"):
        raise ValueError(f"unknown method {method!r}")
    if not items:
        return []
    fam = fams.pop()
    if fam == FAMILY_AXIS:
        return _axis_pairs_sweep(items)
    if fam == FAMILY_DISK:
        return _disk_pairs_grid(items)
    return _segment_pairs_grid(items)


def _axis_pairs_sweep(items) -> list[tuple[int, int]]:
    import bisect

    horiz = [o for o in items if o.shape.orientation == HORIZONTAL]
    vert = [o for o in items if o.shape.orientation == VERTICAL]
    pairs: set[tuple[int, int]] = set()

    # Same-orientation: collinear closed overlaps (only possible on one line).
    for group in (horiz, vert):
        by_line: dict[int, list] = {}
        for o in group:
            by_line.setdefault(o.shape.fixed, []).append(o)
        for objs_on_line in by_line.values():
            if len(objs_on_line) < 2:
                continue
            objs_on_line.sort(key=lambda o: o.shape.lo)
            active: list = []  # (hi, id), kept pruned
            for o in objs_on_line:
                active = [(h, i) for h, i in active if h >= o.shape.lo]
                for _, i in active:
                    pairs.add((min(i, o.id), max(i, o.id)))
                active.append((o.shape.hi, o.id))

    # Horizontal vs vertical crossings: sweep over x with the active
    # horizontals in a bisect-maintained sorted list (fast at the densities
    # the harness uses; output still exact at any density).
    if horiz and vert:
        shape_of = {o.id: o.shape for o in items}
        events = []
        for o in horiz:
            events.append((o.shape.lo, 0, o.shape.fixed, o.id))
            events.append((o.shape.hi, 2, o.shape.fixed, o.id))
        for o in vert:
            events.append((o.shape.fixed, 1, 0, o.id))
        events.sort()
        active_ys: list[tuple[int, int]] = []  # (y, object id), sorted
        for _, kind, y, oid in events:
            if kind == 0:
                bisect.insort(active_ys, (y, oid))
            elif kind == 2:
                active_ys.pop(bisect.bisect_left(active_ys, (y, oid)))
            else:
                s = shape_of[oid]
                i = bisect.bisect_left(active_ys, (s.lo, -1))
                hi = s.hi
                while i < len(active_ys) and active_ys[i][0] <= hi:
                    hid = active_ys[i][1]
                    pairs.add((min(hid, oid), max(hid, oid)))
                    i += 1
    return sorted(pairs)


def _disk_pairs_grid(items) -> list[tuple[int, int]]:
    cell = max(1, 2 * max(o.shape.r for o in items))
    grid: dict[tuple[int, int], list] = {}
    for o in items:
        key = (o.shape.cx // cell, o.shape.cy // cell)
        grid.setdefault(key, []).append(o)
    pairs = set()
    for (gx, gy), bucket in grid.items():
        for i, a in enumerate(bucket):
            for b in bucket[i + 1 :]:
                if _disk_disk(a.shape, b.shape):
                    pairs.add((min(a.id, b.id), max(a.id, b.id)))
        for ngx, ngy in (
            (gx + 1, gy - 1),
            (gx + 1, gy),
            (gx + 1, gy + 1),
            (gx, gy + 1),
        ):
            other = grid.get((ngx, ngy))
            if not other:
                continue
            for a in bucket:
                for b in other:
                    if _disk_disk(a.shape, b.shape):
                        pairs.add((min(a.id, b.id), max(a.id, b.id)))
    return sorted(pairs)


def _segment_cells(s: LineSegment, cell: int):
    """Every grid cell the segment touches (exact, slab by slab)."""
    (x1, y1), (x2, y2) = sorted([(s.x1, s.y1), (s.x2, s.y2)])
    gx1, gx2 = x1 // cell, x2 // cell
    if x1 == x2:
        ylo, yhi = min(y1, y2), max(y1, y2)
        for gy in range(ylo // cell, yhi // cell + 1):
            yield (gx1, gy)
        return
    dx = x2 - x1
    dy = y2 - y1
    for gx in range(gx1, gx2 + 1):
        # x-extent of this slab clipped to the segment
        xa = max(x1, gx * cell)
        xb = min(x2, (gx + 1) * cell)
        # y at xa and xb as rationals num/dx; floor(y/cell) == (num//dx)//cell
        ya_num = y1 * dx + dy * (xa - x1)
        yb_num = y1 * dx + dy * (xb - x1)
        lo_num, hi_num = min(ya_num, yb_num), max(ya_num, yb_num)
        gy_lo = (lo_num // dx) // cell
        gy_hi = (hi_num // dx) // cell
        for gy in range(gy_lo, gy_hi + 1):
            yield (gx, gy)


def _segment_pairs_grid(items) -> list[tuple[int, int]]:
    lens = sorted(
        max(abs(o.shape.x2 - o.shape.x1), abs(o.shape.y2 - o.shape.y1)) for o in items
    )
    cell = max(1, lens[len(lens) // 2])
    grid: dict[tuple[int, int], list] = {}
    for o in items:
        for key in set(_segment_cells(o.shape, cell)):
            grid.setdefault(key, []).append(o)
    pairs = set()
    for bucket in grid.values():
        for i, a in enumerate(bucket):
            for b in bucket[i + 1 :]:
                key = (min(a.id, b.id), max(a.id, b.id))
                if key in pairs:
                    continue
                if _seg_seg(a.shape, b.shape):
                    pairs.add(key)
    return sorted(pairs)
