"""Disk and line-segment reporters.

Both follow the same pattern: one exact membership index per component,
and streams that walk the class's components in ascending id order,
classifying each with a single index query. Worst-case stream cost is
therefore proportional to the number of components in the class times the
per-test cost; the engine-level algorithms on top are unchanged by this
trade-off.
"""

from __future__ import annotations

import bisect
from math import isqrt

from ..errors import MissingComponentError
from ..geometry import segment_intersects_box, segments_intersect

_LEAF = 4


def _ceil_sqrt(n: int) -> int:
    if n <= 0:
        return 0
    return isqrt(n - 1) + 1


class _Work:
    __slots__ = ("n",)

    def __init__(self):
        self.n = 0


class _MembershipReporter:
    """Shared bookkeeping: live component registry + ordered iteration."""

    def __init__(self, components):
        self._work = _Work()
        self.live: dict[int, int] = {}
        self._index: dict[int, object] = {}
        self._order: list[int] = []
        for comp in components:
            self.insert_component(comp)

    @property
    def work_counter(self) -> int:
        return self._work.n

    def _build_index(self, comp):
        raise NotImplementedError

    def _test(self, index, shape) -> bool:
        raise NotImplementedError

    def insert_component(self, comp) -> None:
        if comp.cid in self.live:
            raise MissingComponentError(f"component {comp.cid} already present")
        self.live[comp.cid] = comp.size
        self._index[comp.cid] = self._build_index(comp)
        bisect.insort(self._order, comp.cid)

    def delete_component(self, cid: int) -> None:
        if cid not in self.live:
            raise MissingComponentError(f"component {cid} not present")
        del self.live[cid]
        del self._index[cid]
        self._order.pop(bisect.bisect_left(self._order, cid))

    def _stream(self, shape, want: bool):
        for cid in list(self._order):
            self._work.n += 1
            if self._test(self._index[cid], shape) == want:
                yield cid, self.live[cid]

    def stream_intersecting(self, query):
        return self._stream(query.shape, True)

    def stream_nonintersecting(self, query):
        return self._stream(query.shape, False)


# ---------------------------------------------------------------------------
# disks: hierarchy of bounding circles, exact additively weighted nearest
# decision (min over disks of dist(p, center) - radius <= query radius)


class _CircleNode:
    __slots__ = ("cx", "cy", "R", "left", "right", "disks")

    def __init__(self, disks):
        self.disks = None
        self.left = None
        self.right = None
        xs = [d.cx for d in disks]
        ys = [d.cy for d in disks]
        self.cx = (min(xs) + max(xs)) // 2
        self.cy = (min(ys) + max(ys)) // 2
        self.R = max(
            _ceil_sqrt((d.cx - self.cx) ** 2 + (d.cy - self.cy) ** 2) + d.r for d in disks
        )
        if len(disks) <= _LEAF:
            self.disks = tuple(disks)
            return
        spread_x = max(xs) - min(xs)
        spread_y = max(ys) - min(ys)
        key = (lambda d: d.cx) if spread_x >= spread_y else (lambda d: d.cy)
        ordered = sorted(disks, key=key)
        mid = len(ordered) // 2
        self.left = _CircleNode(ordered[:mid])
        self.right = _CircleNode(ordered[mid:])


class DiskReporter(_MembershipReporter):
    def _build_index(self, comp):
        return _CircleNode([o.shape for o in comp.objects])

    def _test(self, index, shape) -> bool:
        px, py, rs = shape.cx, shape.cy, shape.r
        work = self._work
        stack = [index]
        while stack:
            node = stack.pop()
            work.n += 1
            dx = px - node.cx
            dy = py - node.cy
            reach = rs + node.R
            if dx * dx + dy * dy > reach * reach:
                continue
            if node.disks is not None:
                for d in node.disks:
                    ddx = px - d.cx
                    ddy = py - d.cy
                    rr = rs + d.r
                    if ddx * ddx + ddy * ddy <= rr * rr:
                        return True
                continue
            stack.append(node.left)
            stack.append(node.right)
        return False


# ---------------------------------------------------------------------------
# line segments: axis-aligned bounding-box hierarchy with exact pruning


class _BoxNode:
    __slots__ = ("x1", "y1", "x2", "y2", "left", "right", "segs")

    def __init__(self, segs):
        self.segs = None
        self.left = None
        self.right = None
        self.x1 = min(min(s.x1, s.x2) for s in segs)
        self.y1 = min(min(s.y1, s.y2) for s in segs)
        self.x2 = max(max(s.x1, s.x2) for s in segs)
        self.y2 = max(max(s.y1, s.y2) for s in segs)
        if len(segs) <= _LEAF:
            self.segs = tuple(segs)
            return
        if self.x2 - self.x1 >= self.y2 - self.y1:
            key = lambda s: s.x1 + s.x2
        else:
            key = lambda s: s.y1 + s.y2
        ordered = sorted(segs, key=key)
        mid = len(ordered) // 2
        self.left = _BoxNode(ordered[:mid])
        self.right = _BoxNode(ordered[mid:])


class SegmentReporter(_MembershipReporter):
    def _build_index(self, comp):
        return _BoxNode([o.shape for o in comp.objects])

    def _test(self, index, shape) -> bool:
        ax, ay, bx, by = shape.x1, shape.y1, shape.x2, shape.y2
        work = self._work
        stack = [index]
        while stack:
            node = stack.pop()
            work.n += 1
            if not segment_intersects_box(ax, ay, bx, by, node.x1, node.y1, node.x2, node.y2):
                continue
            if node.segs is not None:
                for s in node.segs:
                    if segments_intersect(ax, ay, bx, by, s.x1, s.y1, s.x2, s.y2):
                        return True
                continue
            stack.append(node.left)
            stack.append(node.right)
        return False
