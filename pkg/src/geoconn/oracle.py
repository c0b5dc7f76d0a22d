"""Brute-force ground truth for differential testing.

Everything here favours obviousness over speed: components come from the
double-loop pair list plus union-find, signatures from direct predicate
loops. Signatures are bit vectors over the phase's insertion sequence,
bit i set iff the component touches the i-th inserted query object;
entries deleted later keep their bit positions.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import geometry
from .graph import Component, group_components


@dataclass
class ComponentPartition:
    components: dict[int, Component]
    comp_of: dict[int, int]  # object id -> component id

    @property
    def count(self) -> int:
        return len(self.components)

    def sizes(self) -> dict[int, int]:
        return {cid: c.size for cid, c in self.components.items()}


def oracle_components(objs) -> ComponentPartition:
    items = list(objs)
    pairs = geometry.brute_force_pairs(items)
    comps = group_components(items, pairs)
    comp_of = {}
    for c in comps:
        for o in c.objects:
            comp_of[o.id] = c.cid
    return ComponentPartition({c.cid: c for c in comps}, comp_of)


def oracle_signature(component, q_objs) -> int:
    """Bitmask with bit i set iff some member intersects q_objs[i]."""
    objects = component.objects if isinstance(component, Component) else tuple(component)
    sig = 0
    for i, q in enumerate(q_objs):
        if any(geometry.intersects(q, u) for u in objects):
            sig |= 1 << i
    return sig


def oracle_classes(partition: ComponentPartition, q_objs):
    """Group component ids by equal signature.

    Returns a list of (signature, frozenset of component ids), ordered by
    the smallest component id in each class.
    """
    by_sig: dict[int, list[int]] = {}
    for cid, comp in partition.components.items():
        by_sig.setdefault(oracle_signature(comp, q_objs), []).append(cid)
    classes = [(sig, frozenset(cids)) for sig, cids in by_sig.items()]
    classes.sort(key=lambda item: min(item[1]))
    return classes


def oracle_class_count_experiment(instance_factory, q_values, seeds):
    """Count distinct signatures across a (q, seed) sweep.

    `instance_factory(seed, q)` must return (objects, query_objects) with
    len(query_objects) == q. Each row also re-checks the counting identity
    #classes <= min(#components, 2^q).
    """
    rows = []
    for seed in seeds:
        for q in q_values:
            objs, q_objs = instance_factory(seed, q)
            if len(q_objs) != q:
                raise ValueError(f"factory returned {len(q_objs)} query objects, wanted {q}")
            part = oracle_components(objs)
            classes = oracle_classes(part, q_objs)
            n_classes = len(classes)
            if part.count and n_classes > min(part.count, 2**q):
                raise AssertionError(
                    f"class count {n_classes} exceeds min(components={part.count}, 2^q)"
                )
            rows.append(
                {
                    "q": q,
                    "n": len(objs),
                    "components": part.count,
                    "classes": n_classes,
                    "seed": seed,
                }
            )
    return rows
