"""Axis-aligned segment reporter.

Two symmetric sub-structures, one per query orientation. The vertical-query
side decomposes each component's horizontal segments into rectangular cells
(the region between vertically adjacent segments, split at endpoints); the
cell containing the query's lower endpoint is bounded above by exactly the
first segment an upward ray would hit, so classifying a component reduces
to locating one cell and comparing one y value. The horizontal-query side
is the same machinery on the vertical segments with coordinates swapped.

Cells are stored in doubled coordinates with half-open extents chosen so
that every integer query point lies in exactly one cell per component:
walls created where a segment begins belong to the cells on the segment's
side, cells own their top edge but not their bottom. That removes every
boundary tie without arbitration at query time.

Cells of all components live in one structure per side: a segment tree
over the x-slots (each cell split into canonical nodes), entries per node
sorted by cell top, with a global min-tree over cell bottoms for pruned
enumeration. Queries walk one root-to-leaf path and report lazily; both
streams are range reports over the same arrays. Component insertion adds
a new bucket (merged logarithmically); deletion tombstones entries.
"""

from __future__ import annotations

import bisect
from itertools import chain

import numpy as np

from ..errors import GeneralPositionError, MissingComponentError
from ..geometry import COORD_BOUND, HORIZONTAL, VERTICAL, check_axis_general_position
from .membership import _Work

_CLIP = COORD_BOUND + 1
XD_MIN = -2 * _CLIP
XD_MAX = 2 * _CLIP
BOT_MIN_D = -(1 << 30)
TOP_INF_D = 1 << 30
_DEAD = np.int64(1 << 62)

_TOP_KEY = -1  # gap sentinel: no segment above


def vertical_cells(segments):
    """Cells of the vertical decomposition of horizontal segments.

    `segments` is a list of (y, lo, hi). Returns rows
    (xd_lo, xd_hi, bot_d, top_d) in doubled coordinates; top_d is the
    doubled y of the segment bounding the cell from above, TOP_INF_D when
    unbounded (clipped to the global box).
    """
    if not segments:
        return [(XD_MIN, XD_MAX, BOT_MIN_D, TOP_INF_D)]
    if len(segments) == 1:
        y, lo, hi = segments[0]
        return [
            (XD_MIN, 2 * lo - 1, BOT_MIN_D, TOP_INF_D),
            (2 * lo, 2 * hi, BOT_MIN_D, 2 * y),
            (2 * lo, 2 * hi, 2 * y + 1, TOP_INF_D),
            (2 * hi + 1, XD_MAX, BOT_MIN_D, TOP_INF_D),
        ]

    def top_of(key):
        return TOP_INF_D if key == _TOP_KEY else 2 * segments[key][0]

    events = []
    for idx, (y, lo, hi) in enumerate(segments):
        events.append((lo, 0, idx))
        events.append((hi, 1, idx))
    events.sort()

    rows = []
    gaps = {_TOP_KEY: (XD_MIN, BOT_MIN_D)}  # upper key -> (start_xd, bot_d)
    active: list[tuple[int, int]] = []  # (y, segment index), sorted by y

    def close(start, end, bot, key):
        if start <= end:
            rows.append((start, end, bot, top_of(key)))

    for x, kind, idx in events:
        y = segments[idx][0]
        if kind == 0:  # segment begins: split the gap containing y
            i = bisect.bisect_left(active, (y, -1))
            if i < len(active) and active[i][0] == y:
                raise GeneralPositionError(f"collinear horizontal overlap at y={y}")
            ukey = _TOP_KEY if i == len(active) else active[i][1]
            start, bot = gaps.pop(ukey)
            close(start, 2 * x - 1, bot, ukey)
            gaps[idx] = (2 * x, bot)
            gaps[ukey] = (2 * x, 2 * y + 1)
            active.insert(i, (y, idx))
        else:  # segment ends: merge the gaps around it
            i = bisect.bisect_left(active, (y, idx))
            ukey = _TOP_KEY if i + 1 == len(active) else active[i + 1][1]
            b_start, b_bot = gaps.pop(idx)
            a_start, a_bot = gaps.pop(ukey)
            close(b_start, 2 * x, b_bot, idx)
            close(a_start, 2 * x, a_bot, ukey)
            gaps[ukey] = (2 * x + 1, b_bot)
            active.pop(i)

    start, bot = gaps.pop(_TOP_KEY)
    close(start, XD_MAX, bot, _TOP_KEY)
    assert not gaps
    return rows


def _rows_to_array(flat: list) -> np.ndarray:
    cols = list(zip(*flat))
    out = np.empty((len(flat), 6), dtype=np.int64)
    for j in range(6):
        out[:, j] = cols[j]
    return out


class _Bucket:
    """Immutable-order store of cell entries; deletion by tombstone."""

    __slots__ = (
        "universe",
        "P",
        "top",
        "comp",
        "size",
        "node_start",
        "node_end",
        "tree",
        "G",
        "comp_pos",
        "live_entries",
        "comps",
    )

    def __init__(self, rows: np.ndarray):
        lo = rows[:, 0]
        hi = rows[:, 1]
        uni = np.unique(np.concatenate([lo, hi + 1]))
        self.universe = uni
        m = len(uni)
        self.P = 1 << max(1, (m - 1).bit_length())

        ia = np.searchsorted(uni, lo) + self.P
        ib = np.searchsorted(uni, hi + 1) + self.P
        idx = np.arange(len(rows), dtype=np.int64)
        node_parts = []
        row_parts = []
        l, r = ia.copy(), ib.copy()
        while True:
            act = l < r
            if not act.any():
                break
            la, ra, ids = l[act], r[act], idx[act]
            ml = (la & 1) == 1
            node_parts.append(la[ml])
            row_parts.append(ids[ml])
            la = la + ml
            mr = (ra & 1) == 1
            ra = ra - mr
            node_parts.append(ra[mr])
            row_parts.append(ids[mr])
            l[act] = la >> 1
            r[act] = ra >> 1
        nodes = np.concatenate(node_parts)
        rowids = np.concatenate(row_parts)

        tops = rows[rowids, 3]
        order = np.lexsort((tops, nodes))
        nodes = nodes[order]
        rowids = rowids[order]
        self.top = tops[order]
        self.comp = rows[rowids, 4]
        self.size = rows[rowids, 5]
        bots = rows[rowids, 2]

        e_total = len(rowids)
        uniq, starts = np.unique(nodes, return_index=True)
        ends = np.append(starts[1:], e_total)
        self.node_start = np.zeros(2 * self.P, dtype=np.int64)
        self.node_end = np.zeros(2 * self.P, dtype=np.int64)
        self.node_start[uniq] = starts
        self.node_end[uniq] = ends

        self.G = 1 << max(1, (e_total - 1).bit_length())
        tree = np.empty(2 * self.G, dtype=np.int64)
        tree[self.G : self.G + e_total] = bots
        tree[self.G + e_total :] = _DEAD
        lvl = self.G
        while lvl > 1:
            tree[lvl // 2 : lvl] = np.minimum(tree[lvl : 2 * lvl : 2], tree[lvl + 1 : 2 * lvl : 2])
            lvl //= 2
        self.tree = tree

        order2 = np.argsort(self.comp, kind="stable")
        cu, cs = np.unique(self.comp[order2], return_index=True)
        ce = np.append(cs[1:], e_total)
        self.comp_pos = {int(c): order2[s:e] for c, s, e in zip(cu, cs, ce)}
        self.live_entries = e_total
        self.comps = set(self.comp_pos)

    def stab_nodes(self, xd: int):
        pos = int(np.searchsorted(self.universe, xd, side="right")) - 1
        if pos < 0:
            return
        node = self.P + pos
        ns, ne = self.node_start, self.node_end
        while node >= 1:
            s = ns[node]
            e = ne[node]
            if e > s:
                yield int(s), int(e)
            node >>= 1

    def enum(self, s: int, e: int, tlo: int, thi: int, bmax: int, work: _Work):
        sub = self.top[s:e]
        a = s + int(np.searchsorted(sub, tlo, side="left"))
        b = s + int(np.searchsorted(sub, thi, side="right"))
        if a >= b:
            return
        tree = self.tree
        stack = [(1, 0, self.G)]
        while stack:
            node, nlo, nhi = stack.pop()
            work.n += 1
            if nlo >= b or nhi <= a or tree[node] > bmax:
                continue
            if nhi - nlo == 1:
                yield nlo
                continue
            mid = (nlo + nhi) >> 1
            stack.append((2 * node + 1, mid, nhi))
            stack.append((2 * node, nlo, mid))

    def tombstone(self, positions) -> None:
        tree = self.tree
        for pos in positions:
            i = self.G + int(pos)
            tree[i] = _DEAD
            i >>= 1
            while i >= 1:
                v = min(tree[2 * i], tree[2 * i + 1])
                if tree[i] == v:
                    break
                tree[i] = v
                i >>= 1
        self.live_entries -= len(positions)


class _AxisSide:
    """One query orientation.

    The full-height cells outside a component's x-extent (and the whole
    plane, for components with no segments of the relevant orientation)
    would span the entire segment tree; they always classify the component
    as non-intersecting, so they live in two sorted extent lists instead.
    Only the bounded in-extent cells go into tree buckets, which are merged
    logarithmically on insertion and tombstoned on deletion.
    """

    def __init__(self, work: _Work):
        self.work = work
        self.comp_rows: dict[int, list] = {}  # cid -> [(xlo, xhi, bot, top, cid, size)]
        self.buckets: list[_Bucket] = []
        self.dead = 0
        self.by_start: list[tuple[int, int, int]] = []  # (extent start xd, cid, size)
        self.by_end: list[tuple[int, int, int]] = []  # (extent end xd, cid, size)
        self.outer_key: dict[int, tuple[int, int, int]] = {}  # cid -> (start, end, size)
        self.extentless: dict[int, int] = {}  # cid -> size

    def _split_rows(self, cid: int, size: int, cells, presorted: bool = False):
        inner = []
        start = end = None
        for xlo, xhi, bot, top in cells:
            left_open = xlo == XD_MIN
            right_open = xhi == XD_MAX
            if left_open and right_open:
                self.extentless[cid] = size
                return inner
            if left_open:
                start = xhi + 1
            elif right_open:
                end = xlo - 1
            else:
                inner.append((xlo, xhi, bot, top, cid, size))
        self.outer_key[cid] = (start, end, size)
        if presorted:
            self.by_start.append((start, cid, size))
            self.by_end.append((end, cid, size))
        else:
            bisect.insort(self.by_start, (start, cid, size))
            bisect.insort(self.by_end, (end, cid, size))
        return inner

    def bulk_build(self, comp_cells) -> None:
        """comp_cells: iterable of (cid, size, cells)."""
        flat = []
        for cid, size, cells in comp_cells:
            rows = self._split_rows(cid, size, cells, presorted=True)
            self.comp_rows[cid] = rows
            flat.extend(rows)
        self.by_start.sort()
        self.by_end.sort()
        if flat:
            self.buckets.append(_Bucket(_rows_to_array(flat)))

    def insert_component(self, cid: int, size: int, cells) -> None:
        rows = self._split_rows(cid, size, cells)
        self.comp_rows[cid] = rows
        if rows:
            self.buckets.append(_Bucket(_rows_to_array(rows)))
            while len(self.buckets) >= 2 and (
                self.buckets[-2].live_entries <= 2 * self.buckets[-1].live_entries
            ):
                b2 = self.buckets.pop()
                b1 = self.buckets.pop()
                comps = (b1.comps | b2.comps) & self.comp_rows.keys()
                flat = [row for c in sorted(comps) for row in self.comp_rows[c]]
                self.buckets.append(_Bucket(_rows_to_array(flat)))

    def delete_component(self, cid: int) -> None:
        self.comp_rows.pop(cid)
        if cid in self.extentless:
            del self.extentless[cid]
        else:
            start, end, size = self.outer_key.pop(cid)
            self.by_start.pop(bisect.bisect_left(self.by_start, (start, cid, size)))
            self.by_end.pop(bisect.bisect_left(self.by_end, (end, cid, size)))
        for b in self.buckets:
            pos = b.comp_pos.pop(cid, None)
            if pos is not None:
                b.tombstone(pos)
                b.comps.discard(cid)
                self.dead += len(pos)
        self.buckets = [b for b in self.buckets if b.live_entries > 0]
        live = sum(b.live_entries for b in self.buckets)
        if self.dead > 64 and self.dead > live:
            self._consolidate()

    def _consolidate(self) -> None:
        self.dead = 0
        self.buckets = []
        flat = [row for c in sorted(self.comp_rows) for row in self.comp_rows[c]]
        if flat:
            self.buckets = [_Bucket(_rows_to_array(flat))]

    def stream_tree(self, xd: int, tlo: int, thi: int, bmax: int):
        work = self.work
        for bucket in list(self.buckets):
            for s, e in bucket.stab_nodes(xd):
                work.n += 1
                for pos in bucket.enum(s, e, tlo, thi, bmax, work):
                    yield int(bucket.comp[pos]), int(bucket.size[pos])

    def stream_outside_extent(self, xd: int):
        """Components whose x-extent does not contain xd, plus components
        with no cells in this orientation at all."""
        work = self.work
        for cid, size in self.extentless.items():
            work.n += 1
            yield cid, size
        i = bisect.bisect_right(self.by_start, (xd, 1 << 62, 0))
        work.n += 1
        while i < len(self.by_start):
            _, cid, size = self.by_start[i]
            work.n += 1
            yield cid, size
            i += 1
        i = bisect.bisect_left(self.by_end, (xd, -1, 0)) - 1
        work.n += 1
        while i >= 0:
            _, cid, size = self.by_end[i]
            work.n += 1
            yield cid, size
            i -= 1


class AxisReporter:
    def __init__(self, components):
        self._work = _Work()
        self.live: dict[int, int] = {}
        self.v_side = _AxisSide(self._work)  # serves vertical queries
        self.h_side = _AxisSide(self._work)  # serves horizontal queries
        comps = list(components)
        all_objs = [o for c in comps for o in c.objects]
        check_axis_general_position(all_objs)
        v_batch = []
        h_batch = []
        for comp in comps:
            if comp.cid in self.live:
                raise MissingComponentError(f"component {comp.cid} already present")
            self.live[comp.cid] = comp.size
            cv, ch = self._cells(comp)
            v_batch.append((comp.cid, comp.size, cv))
            h_batch.append((comp.cid, comp.size, ch))
        self.v_side.bulk_build(v_batch)
        self.h_side.bulk_build(h_batch)

    @property
    def work_counter(self) -> int:
        return self._work.n

    @staticmethod
    def _cells(comp):
        horiz = []
        vert = []
        for o in comp.objects:
            s = o.shape
            if s.orientation == HORIZONTAL:
                horiz.append((s.fixed, s.lo, s.hi))
            else:
                # swap axes: a vertical segment is horizontal in the
                # rotated frame used by the horizontal-query side
                vert.append((s.fixed, s.lo, s.hi))
        return vertical_cells(horiz), vertical_cells(vert)

    def insert_component(self, comp) -> None:
        if comp.cid in self.live:
            raise MissingComponentError(f"component {comp.cid} already present")
        self.live[comp.cid] = comp.size
        cv, ch = self._cells(comp)
        self.v_side.insert_component(comp.cid, comp.size, cv)
        self.h_side.insert_component(comp.cid, comp.size, ch)

    def delete_component(self, cid: int) -> None:
        if cid not in self.live:
            raise MissingComponentError(f"component {cid} not present")
        del self.live[cid]
        self.v_side.delete_component(cid)
        self.h_side.delete_component(cid)

    def _side_and_coords(self, query):
        s = query.shape
        side = self.v_side if s.orientation == VERTICAL else self.h_side
        # in the side's frame the query is vertical at x=fixed, y in [lo, hi]
        return side, 2 * s.fixed, 2 * s.lo, 2 * s.hi

    def stream_intersecting(self, query):
        side, xd, pyd, hid = self._side_and_coords(query)
        return side.stream_tree(xd, pyd, hid, pyd)

    def stream_nonintersecting(self, query):
        side, xd, pyd, hid = self._side_and_coords(query)
        return chain(
            side.stream_outside_extent(xd),
            side.stream_tree(xd, hid + 1, TOP_INF_D, pyd),
        )
