"""Fully dynamic connectivity engine.

Work is organised in phases of at most q updates. The objects alive at
phase start form the static set S with its connected components grouped
into equivalence classes; objects inserted during the phase form the
sequence Q. A small proxy graph H over class vertices and insertion
vertices mirrors the live intersection graph's connectivity: pairwise
queries compare component labels of H, and the global count follows from
H's components plus the membership of isolated class vertices. H is
recomputed from scratch after every update; the phase is rebuilt once q
updates have been absorbed.
"""

from __future__ import annotations

import gc
import math
from dataclasses import dataclass
from typing import Callable, Optional

from . import geometry
from .classes import classify_by_replay, init_phase
from .errors import (
    FamilyMismatchError,
    GeneralPositionError,
    InvariantViolationError,
    UnknownObjectError,
)
from .geometry import GeomObject, family_of, intersects, validate_shape
from .graph import components as graph_components
from .graph import group_components
from .reporters import REPORTER_FACTORIES

Q_EXPONENTS = {"axis": 1 / 5, "disk": 1 / 9, "segment": 5 / 21}


@dataclass
class EngineConfig:
    family: str
    q_policy: Optional[Callable[[int], int]] = None
    min_q: int = 4
    verify_hooks: bool = False
    count_query_ops: bool = False
    # reserved knob for a cutting-based segment backend; no backend reads it
    cutting_r: int | None = None

    def __post_init__(self):
        if self.family not in REPORTER_FACTORIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.min_q < 4:
            raise ValueError("min_q must be at least 4")

    def phase_length(self, n: int) -> int:
        if self.q_policy is not None:
            q = self.q_policy(n)
        else:
            q = math.ceil(n ** Q_EXPONENTS[self.family]) if n > 0 else 0
        return max(self.min_q, q)


class _QEntry:
    __slots__ = ("idx", "oid", "obj", "live")

    def __init__(self, idx: int, obj: GeomObject):
        self.idx = idx
        self.oid = obj.id
        self.obj = obj
        self.live = True


class Engine:
    def __init__(self, objects, config: EngineConfig):
        self.config = config
        self._factory = REPORTER_FACTORIES[config.family]
        self._objects: dict[int, GeomObject] = {}
        self._origin: dict[int, str] = {}
        self._ever: set[int] = set()
        self._axis_lines: dict[tuple[str, int], dict[int, tuple[int, int]]] = {}
        self._next_cid = 0
        self.phase_index = 0
        self.update_count = 0
        self.q_cap = config.min_q
        self.ledger_history: list[dict] = []
        self.query_ops = 0
        self._h_edges: list = []
        for obj in objects:
            self._register(obj)
        self._start_phase()

    @classmethod
    def new(cls, objects, config: EngineConfig) -> "Engine":
        return cls(objects, config)

    # -- object bookkeeping ------------------------------------------------

    def _register(self, obj: GeomObject) -> None:
        if not isinstance(obj, GeomObject):
            raise TypeError(f"expected GeomObject, got {obj!r}")
        if obj.id in self._ever:
            raise ValueError(f"object id {obj.id} reused")
        validate_shape(obj.shape)
        if family_of(obj.shape) != self.config.family:
            raise FamilyMismatchError(
                f"engine family {self.config.family}, object is {family_of(obj.shape)}"
            )
        if self.config.family == "axis":
            s = obj.shape
            key = (s.orientation, s.fixed)
            bucket = self._axis_lines.setdefault(key, {})
            for lo, hi in bucket.values():
                if s.lo <= hi and lo <= s.hi:
                    raise GeneralPositionError(
                        f"object {obj.id} collinear-overlaps a live segment on {key}"
                    )
            bucket[obj.id] = (s.lo, s.hi)
        self._ever.add(obj.id)
        self._objects[obj.id] = obj
        self._origin[obj.id] = "Q"  # phase start rewrites to S

    def _unregister(self, oid: int) -> None:
        obj = self._objects.pop(oid)
        del self._origin[oid]
        if self.config.family == "axis":
            s = obj.shape
            key = (s.orientation, s.fixed)
            bucket = self._axis_lines[key]
            del bucket[oid]
            if not bucket:
                del self._axis_lines[key]

    # -- phase lifecycle ----------------------------------------------------

    def _start_phase(self) -> None:
        # bulk allocation burst: pausing the cyclic collector here roughly
        # halves rebuild time at large n (no cycles are created)
        gc_was_on = gc.isenabled()
        gc.disable()
        try:
            live = [self._objects[oid] for oid in sorted(self._objects)]
            pairs = geometry.pairwise_intersections(live)
            comps = group_components(live, pairs, first_cid=self._next_cid)
            self._next_cid += len(comps)
            self._s_comp: dict[int, int] = {}
            for c in comps:
                for o in c.objects:
                    self._s_comp[o.id] = c.cid
                    self._origin[o.id] = "S"
            self.registry = init_phase(comps, self._factory)
            self._q_entries: list[_QEntry] = []
            self._q_adj: dict[tuple[int, int], bool] = {}
            self.q_cap = self.config.phase_length(len(live))
            self.update_count = 0
            self._rebuild_h()
        finally:
            if gc_was_on:
                gc.enable()

    def rebuild_phase(self) -> None:
        """Close the current phase: everything live becomes the new S."""
        self.registry.ledger.check_aggregate()
        snap = self.registry.ledger.snapshot()
        snap["phase"] = self.phase_index
        snap["n"] = self.registry.ledger.n_initial
        snap["violation_msgs"] = list(self.registry.ledger.violations)
        self.ledger_history.append(snap)
        self.phase_index += 1
        self._start_phase()

    def _finish_update(self) -> None:
        self._rebuild_h()
        self.update_count += 1
        if self.config.verify_hooks:
            self.check_signatures()
            self.check_proxy_graph()
        if self.update_count >= self.q_cap:
            self.rebuild_phase()

    # -- updates -------------------------------------------------------------

    def insert(self, obj: GeomObject) -> int:
        if self.update_count >= self.q_cap:
            self.rebuild_phase()
        self._register(obj)
        entry = _QEntry(len(self._q_entries), obj)
        self._q_entries.append(entry)
        for other in self._q_entries[:-1]:
            if other.live:
                key = (min(other.oid, obj.id), max(other.oid, obj.id))
                self._q_adj[key] = intersects(other.obj, obj)
        self.registry.insert_q(obj)
        self._finish_update()
        return obj.id

    def delete(self, oid: int) -> None:
        if oid not in self._objects:
            raise UnknownObjectError(f"object {oid} is not live")
        if self.update_count >= self.q_cap:
            self.rebuild_phase()
        if self._origin[oid] == "Q":
            for e in self._q_entries:
                if e.oid == oid:
                    e.live = False
                    break
            self._unregister(oid)
        else:
            self._delete_from_s(oid)
        self._finish_update()

    def _delete_from_s(self, oid: int) -> None:
        cid = self._s_comp.pop(oid)
        comp = self.registry.comp_records[cid]
        remaining = [o for o in comp.objects if o.id != oid]
        self._unregister(oid)
        self.registry.delete_component(cid)
        if not remaining:
            return
        pairs = geometry.pairwise_intersections(remaining)
        pieces = group_components(remaining, pairs, first_cid=self._next_cid)
        self._next_cid += len(pieces)
        pieces.sort(key=lambda c: (-c.size, c.cid))
        q_seq = [e.obj for e in self._q_entries]
        first = pieces[0]
        sig = 0
        for e in self._q_entries:
            if any(intersects(e.obj, o) for o in first.objects):
                sig |= 1 << e.idx
        self.registry.make_singleton_class(first, sig)
        for o in first.objects:
            self._s_comp[o.id] = first.cid
        rest = pieces[1:]
        if rest:
            for piece, psig in classify_by_replay(rest, q_seq, self._factory):
                self.registry.insert_component(piece, psig)
                for o in piece.objects:
                    self._s_comp[o.id] = piece.cid

    # -- proxy graph -----------------------------------------------------------

    def _rebuild_h(self) -> None:
        classes = self.registry.classes
        live_q = [e for e in self._q_entries if e.live]
        verts = [("c", cls_id) for cls_id in classes]
        verts.extend(("q", e.oid) for e in live_q)
        edges = []
        degree = {cls_id: 0 for cls_id in classes}
        for e in live_q:
            bit = 1 << e.idx
            qv = ("q", e.oid)
            for cls_id, cls in classes.items():
                if cls.signature & bit:
                    edges.append((("c", cls_id), qv))
                    degree[cls_id] += 1
        for i, a in enumerate(live_q):
            for b in live_q[i + 1 :]:
                key = (min(a.oid, b.oid), max(a.oid, b.oid))
                if self._q_adj[key]:
                    edges.append((("q", a.oid), ("q", b.oid)))
        labels, count = graph_components(verts, edges)
        self._h_labels = labels
        self._h_count = count
        self._class_degree = degree
        self._h_edges = edges
        iso = [cls_id for cls_id, d in degree.items() if d == 0]
        self._iso_count = len(iso)
        self._iso_members = sum(len(classes[c].members) for c in iso)

    # -- queries ---------------------------------------------------------------

    def query(self, u: int, v: int) -> bool:
        ops = 0
        objs = self._objects
        if u not in objs or v not in objs:
            raise UnknownObjectError(f"query on dead/unknown id {u if u not in objs else v}")
        origin = self._origin
        ops += 2
        if origin[u] == "S" and origin[v] == "S":
            ops += 2
            cu = self._s_comp[u]
            cv = self._s_comp[v]
            ops += 2
            if cu == cv:
                self.query_ops = ops
                return True
            lu = self.registry.comp_class[cu]
            lv = self.registry.comp_class[cv]
            ops += 2
            if self._class_degree[lu] == 0 or self._class_degree[lv] == 0:
                self.query_ops = ops + 2
                return False
            self.query_ops = ops + 4
            return self._h_labels[("c", lu)] == self._h_labels[("c", lv)]
        vu = ("c", self.registry.comp_class[self._s_comp[u]]) if origin[u] == "S" else ("q", u)
        vv = ("c", self.registry.comp_class[self._s_comp[v]]) if origin[v] == "S" else ("q", v)
        self.query_ops = ops + 6
        return self._h_labels[vu] == self._h_labels[vv]

    def num_components(self) -> int:
        return self._h_count - self._iso_count + self._iso_members

    # -- introspection -----------------------------------------------------------

    @property
    def live_ids(self):
        return set(self._objects)

    def q_sequence(self):
        return [(e.oid, e.live) for e in self._q_entries]

    def proxy_graph(self):
        verts = [("c", cls_id) for cls_id in self.registry.classes]
        verts.extend(("q", e.oid) for e in self._q_entries if e.live)
        return verts, list(self._h_edges)

    def ledger_rows(self):
        rows = list(self.ledger_history)
        self.registry.ledger.check_aggregate()
        snap = self.registry.ledger.snapshot()
        snap["phase"] = self.phase_index
        snap["n"] = self.registry.ledger.n_initial
        snap["violation_msgs"] = list(self.registry.ledger.violations)
        rows.append(snap)
        return rows

    # -- verification hooks --------------------------------------------------------

    def check_signatures(self) -> None:
        """Every class signature bit must match the direct geometric
        predicate for every member component and every insertion slot."""
        for cls in self.registry.classes.values():
            for cid in cls.members:
                comp = self.registry.comp_records[cid]
                for e in self._q_entries:
                    truth = any(intersects(e.obj, o) for o in comp.objects)
                    if truth != bool((cls.signature >> e.idx) & 1):
                        raise InvariantViolationError(
                            f"class {cls.cls_id} bit {e.idx} wrong for component {cid}"
                        )
            if cls.signature >> len(self._q_entries):
                raise InvariantViolationError(
                    f"class {cls.cls_id} has signature bits beyond |Q|"
                )

    @staticmethod
    def _norm_edge(x, y):
        if x[0] == "q" and y[0] == "c":
            x, y = y, x
        if x[0] == "q" and y[0] == "q" and x[1] > y[1]:
            x, y = y, x
        return (x, y)

    def check_proxy_graph(self) -> None:
        """The stored H must match its definition exactly."""
        expected = set()
        live_q = [e for e in self._q_entries if e.live]
        for e in live_q:
            bit = 1 << e.idx
            for cls_id, cls in self.registry.classes.items():
                if cls.signature & bit:
                    expected.add(self._norm_edge(("c", cls_id), ("q", e.oid)))
        for i, a in enumerate(live_q):
            for b in live_q[i + 1 :]:
                if intersects(a.obj, b.obj):
                    expected.add(self._norm_edge(("q", a.oid), ("q", b.oid)))
        got = set()
        for x, y in self._h_edges:
            if x[0] == "c" and y[0] == "c":
                raise InvariantViolationError("class-class edge in H")
            got.add(self._norm_edge(x, y))
        if got != expected:
            raise InvariantViolationError("proxy graph edges diverge from definition")
