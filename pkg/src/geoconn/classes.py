"""Equivalence classes of components under query-object insertions.

A class groups components that intersect exactly the same inserted objects,
encoded as a signature bitmask over the phase's insertion sequence. Each
insertion splits every class whose components disagree on the new object;
the split races the reporter's two streams in strict alternation and
displaces the side with smaller total object weight into a fresh class, so
every object is displaced only O(log) times per phase. The ledger records
the accounting and checks the displacement budgets as they are spent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MissingComponentError
from .graph import Component


@dataclass
class EqClass:
    cls_id: int
    signature: int
    members: dict[int, int]  # component id -> size
    total_size: int
    reporter: object


class DisplacementLedger:
    """Per-phase displacement accounting.

    Each object carries a budget of bit_length(n0) displacements, where n0
    is the total size of the class it entered (the whole static set for
    phase-initial objects). A displacement over budget, or aggregate
    displaced weight above (n + sigma) * (log2(n + sigma) + 1), is recorded
    as a violation rather than raised, so harnesses can assert on it.
    """

    def __init__(self):
        self.n_initial = 0
        self.sigma = 0
        self.displaced_weight = 0
        self.splits = 0
        self.q_inserts = 0
        self._n0: dict[int, int] = {}
        self._counts: dict[int, int] = {}
        self.violations: list[str] = []

    def note_phase_start(self, components, total: int) -> None:
        self.n_initial = total
        for comp in components:
            for oid in comp.object_ids:
                self._n0[oid] = total
                self._counts[oid] = 0

    def note_entry(self, comp: Component, class_total: int) -> None:
        self.sigma += comp.size
        for oid in comp.object_ids:
            self._n0[oid] = class_total
            self._counts[oid] = 0

    def note_displacement(self, comp: Component) -> None:
        self.displaced_weight += comp.size
        for oid in comp.object_ids:
            c = self._counts.get(oid, 0) + 1
            self._counts[oid] = c
            budget = self._n0.get(oid, 1).bit_length()
            if c > budget:
                self.violations.append(
                    f"object {oid} displaced {c} times, budget {budget}"
                )

    def displacement_count(self, oid: int) -> int:
        return self._counts.get(oid, 0)

    def aggregate_bound(self) -> float:
        w = self.n_initial + self.sigma
        if w <= 0:
            return 0.0
        return w * (math.log2(w) + 1.0)

    def check_aggregate(self) -> None:
        if self.displaced_weight > self.aggregate_bound():
            self.violations.append(
                f"displaced weight {self.displaced_weight} exceeds "
                f"{self.aggregate_bound():.1f}"
            )

    def snapshot(self) -> dict:
        return {
            "inserts": self.q_inserts,
            "splits": self.splits,
            "displaced_weight": self.displaced_weight,
            "sigma": self.sigma,
            "violations": len(self.violations),
        }


class ClassRegistry:
    """The live class partition of one phase."""

    def __init__(self, reporter_factory):
        self.reporter_factory = reporter_factory
        self.classes: dict[int, EqClass] = {}
        self.sig_index: dict[int, int] = {}
        self._indexed: set[int] = set()
        self.comp_class: dict[int, int] = {}
        self.comp_records: dict[int, Component] = {}
        self.q_len = 0
        self.ledger = DisplacementLedger()
        self._next_cls = 0

    def _fresh_id(self) -> int:
        self._next_cls += 1
        return self._next_cls - 1

    # -- queries ------------------------------------------------------

    def signature_of(self, cid: int) -> int:
        return self.classes[self.comp_class[cid]].signature

    def partition(self):
        """Current classes as [(signature, frozenset of component ids)]."""
        out = [
            (L.signature, frozenset(L.members)) for L in self.classes.values()
        ]
        out.sort(key=lambda item: min(item[1]))
        return out

    # -- phase lifecycle ----------------------------------------------

    def _seed(self, components) -> None:
        comps = list(components)
        total = sum(c.size for c in comps)
        self.ledger.note_phase_start(comps, total)
        if not comps:
            return
        cls_id = self._fresh_id()
        rep = self.reporter_factory(comps)
        cls = EqClass(cls_id, 0, {c.cid: c.size for c in comps}, total, rep)
        self.classes[cls_id] = cls
        self.sig_index[0] = cls_id
        self._indexed.add(cls_id)
        for c in comps:
            self.comp_class[c.cid] = cls_id
            self.comp_records[c.cid] = c

    # -- updates --------------------------------------------------------

    def insert_q(self, s):
        """Split every class on the new object; returns (class id, outcome)
        pairs where outcome is ('unsplit', bit) or ('split', new class id)."""
        bit_i = self.q_len
        self.q_len += 1
        outcomes = []
        for cls_id in sorted(self.classes):
            outcomes.append((cls_id, self._split(self.classes[cls_id], s, bit_i)))
        self._rebuild_index()
        self.ledger.q_inserts += 1
        return outcomes

    def _race(self, L: EqClass, s):
        """Alternate the two streams one item at a time, accumulating object
        weight, until the smaller-weight side is known and fully enumerated.

        Returns ('unsplit', intersecting_bit) or ('split', side, items) with
        side 0 = intersecting stream, 1 = non-intersecting stream.
        """
        streams = (L.reporter.stream_intersecting(s), L.reporter.stream_nonintersecting(s))
        got: tuple[list, list] = ([], [])
        weight = [0, 0]
        done = [False, False]
        total = L.total_size
        cur = 0
        decided = None
        while decided is None:
            if done[cur]:
                cur ^= 1
                continue
            try:
                item = next(streams[cur])
            except StopIteration:
                done[cur] = True
                side_w = weight[cur]
                other_w = total - side_w
                if side_w == 0:
                    return ("unsplit", 1 if cur == 1 else 0)
                if other_w == 0:
                    return ("unsplit", 1 if cur == 0 else 0)
                if side_w < other_w:
                    decided = cur
                elif side_w > other_w:
                    decided = 1 - cur
                else:
                    decided = 0  # equal halves: displace the intersecting side
                break
            got[cur].append(item)
            weight[cur] += item[1]
            if 2 * weight[cur] > total:
                decided = 1 - cur
                break
            cur ^= 1
        if not done[decided]:
            for item in streams[decided]:
                got[decided].append(item)
        if not got[decided]:
            return ("unsplit", 1 if decided == 1 else 0)
        return ("split", decided, got[decided])

    def _split(self, L: EqClass, s, bit_i: int):
        res = self._race(L, s)
        if res[0] == "unsplit":
            bit = res[1]
            if bit:
                L.signature |= 1 << bit_i
            return ("unsplit", bit)
        _, side, items = res
        displaced_sig = L.signature | (1 << bit_i) if side == 0 else L.signature
        if side == 1:
            L.signature |= 1 << bit_i
        cids = [cid for cid, _ in items]
        comps = [self.comp_records[cid] for cid in cids]
        for cid, size in items:
            del L.members[cid]
            L.total_size -= size
            L.reporter.delete_component(cid)
        new_id = self._fresh_id()
        new_cls = EqClass(
            new_id,
            displaced_sig,
            {cid: size for cid, size in items},
            sum(size for _, size in items),
            self.reporter_factory(comps),
        )
        self.classes[new_id] = new_cls
        self._indexed.add(new_id)
        for comp in comps:
            self.comp_class[comp.cid] = new_id
            self.ledger.note_displacement(comp)
        self.ledger.splits += 1
        return ("split", new_id)

    def _rebuild_index(self) -> None:
        self.sig_index = {
            self.classes[cls_id].signature: cls_id
            for cls_id in sorted(self._indexed)
            if cls_id in self.classes
        }
        self._indexed = set(self.sig_index.values())

    # -- component insert/delete ----------------------------------------

    def delete_component(self, cid: int) -> None:
        cls_id = self.comp_class.pop(cid, None)
        if cls_id is None:
            raise MissingComponentError(f"component {cid} not in registry")
        L = self.classes[cls_id]
        size = L.members.pop(cid)
        L.total_size -= size
        L.reporter.delete_component(cid)
        del self.comp_records[cid]
        if not L.members:
            del self.classes[cls_id]
            self._indexed.discard(cls_id)
            if self.sig_index.get(L.signature) == cls_id:
                del self.sig_index[L.signature]

    def insert_component(self, comp: Component, signature: int) -> int:
        """Join the indexed class with this signature, or open a new one."""
        self.comp_records[comp.cid] = comp
        cls_id = self.sig_index.get(signature)
        if cls_id is not None:
            L = self.classes[cls_id]
            L.reporter.insert_component(comp)
            L.members[comp.cid] = comp.size
            L.total_size += comp.size
        else:
            cls_id = self._fresh_id()
            L = EqClass(
                cls_id,
                signature,
                {comp.cid: comp.size},
                comp.size,
                self.reporter_factory([comp]),
            )
            self.classes[cls_id] = L
            self.sig_index[signature] = cls_id
            self._indexed.add(cls_id)
        self.comp_class[comp.cid] = cls_id
        self.ledger.note_entry(comp, L.total_size)
        return cls_id

    def make_singleton_class(self, comp: Component, signature: int) -> int:
        """Force a fresh class for one component (used after local
        recomputation, where the largest piece keeps its own class). The
        class joins the signature index only when the slot is vacant."""
        self.comp_records[comp.cid] = comp
        cls_id = self._fresh_id()
        L = EqClass(
            cls_id,
            signature,
            {comp.cid: comp.size},
            comp.size,
            self.reporter_factory([comp]),
        )
        self.classes[cls_id] = L
        if signature not in self.sig_index:
            self.sig_index[signature] = cls_id
            self._indexed.add(cls_id)
        self.comp_class[comp.cid] = cls_id
        self.ledger.note_entry(comp, comp.size)
        return cls_id


def init_phase(components, reporter_factory) -> ClassRegistry:
    """One class holding every component, empty signatures, zeroed ledger."""
    reg = ClassRegistry(reporter_factory)
    reg._seed(components)
    return reg


def classify_by_replay(components, q_objects, reporter_factory):
    """Signatures of fresh components against a full insertion sequence,
    obtained by replaying the insertions on a throwaway registry."""
    comps = list(components)
    reg = init_phase(comps, reporter_factory)
    for s in q_objects:
        reg.insert_q(s)
    return [(comp, reg.signature_of(comp.cid)) for comp in comps]
