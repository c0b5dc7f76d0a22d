"""Generic graph utilities: union-find and static component labeling.

Connectivity of the proxy graph is recomputed from scratch after every
update rather than maintained dynamically; at the phase lengths used here
that recomputation is cheap and removes a whole subsystem.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MalformedGraphError


class UnionFind:
    """Disjoint sets over ids 0..n-1 with union by size and path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of a and b; True when two sets actually merged."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


def components(vertices, edges):
    """Connected-component labeling by traversal.

    Returns (labels, count) where labels maps each vertex to the smallest
    vertex of its component. Edges referencing undeclared vertices raise.
    """
    verts = list(vertices)
    vset = set(verts)
    adj = {v: [] for v in verts}
    for a, b in edges:
        if a not in vset or b not in vset:
            raise MalformedGraphError(f"edge ({a!r}, {b!r}) references unknown vertex")
        adj[a].append(b)
        adj[b].append(a)
    labels = {}
    count = 0
    for start in sorted(verts, key=repr):
        if start in labels:
            continue
        count += 1
        stack = [start]
        labels[start] = start
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in labels:
                    labels[w] = start
                    stack.append(w)
    return labels, count


@dataclass(frozen=True)
class Component:
    """A connected component of the static object set."""

    cid: int
    objects: tuple

    @property
    def size(self) -> int:
        return len(self.objects)

    @property
    def object_ids(self):
        return tuple(o.id for o in self.objects)


def group_components(objs, pairs, first_cid: int = 0) -> list[Component]:
    """Group objects into Components from an intersecting-pair list.

    Components are ordered (and given consecutive ids from `first_cid`) by
    their smallest member object id, so labeling is deterministic.
    """
    items = list(objs)
    index = {o.id: i for i, o in enumerate(items)}
    uf = UnionFind(len(items))
    for a, b in pairs:
        uf.union(index[a], index[b])
    groups: dict[int, list] = {}
    for o in sorted(items, key=lambda o: o.id):
        groups.setdefault(uf.find(index[o.id]), []).append(o)
    # members are appended in ascending id order, so each group is sorted
    # and the first member carries the group's minimal id
    ordered = sorted(groups.values(), key=lambda g: g[0].id)
    return [Component(first_cid + i, tuple(g)) for i, g in enumerate(ordered)]
