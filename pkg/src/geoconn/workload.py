"""Workload model: deterministic generation, text format, parsing.

Format (one operation per line, whitespace separated):

    H <family> <seed> <bound>                header
    IA <id> <orient:H|V> <fixed> <lo> <hi>   insert axis segment
    IS <id> <x1> <y1> <x2> <y2>              insert line segment
    ID <id> <cx> <cy> <r>                    insert disk
    D <id>                                   delete
    Q <id1> <id2>                            pairwise connectivity query
    C                                        component count query

The generator is seeded and pure: the same parameters produce a byte
identical file. `density` steers the expected intersection degree by
scaling object extents relative to the coordinate box.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import WorkloadError
from .geometry import (
    HORIZONTAL,
    VERTICAL,
    AxisSegment,
    Disk,
    GeomObject,
    LineSegment,
    validate_shape,
)

DEFAULT_BOUND = 600_000
DEFAULT_RATIOS = (0.25, 0.20, 0.40, 0.15)  # insert, delete, query, count


@dataclass
class Workload:
    family: str
    seed: int
    bound: int
    ops: list = field(default_factory=list)

    def initial_prefix(self):
        """Leading insert run (the static bootstrap set) and the rest."""
        objs = []
        i = 0
        while i < len(self.ops) and self.ops[i][0] == "I":
            objs.append(self.ops[i][1])
            i += 1
        return objs, self.ops[i:]


class _ShapeSampler:
    """Draws valid shapes for one family, keeping axis-aligned output in
    general position against every live segment."""

    def __init__(self, family: str, rng: random.Random, bound: int, density: float, n_hint: int):
        self.family = family
        self.rng = rng
        self.bound = bound
        self.width = 2 * bound
        n = max(n_hint, 4)
        width = self.width
        if family == "axis":
            self.length = max(2, min(width - 2, round(width * math.sqrt(2.0 * density / n))))
        elif family == "segment":
            self.length = max(2, min(width - 2, round(width * math.sqrt(2.5 * density / n))))
        else:
            self.radius = max(1, min(bound // 4, round(width * math.sqrt(0.27 * density / n))))
        self.live_lines: dict[tuple[str, int], list[tuple[int, int, int]]] = {}

    def _rand_len(self, base: int) -> int:
        lo = max(2, base // 2)
        hi = min(self.width - 2, max(lo, base + base // 2))
        return self.rng.randint(lo, max(lo, hi))

    def sample(self, oid: int) -> GeomObject:
        rng = self.rng
        b = self.bound
        if self.family == "axis":
            for _ in range(10_000):
                orient = HORIZONTAL if rng.random() < 0.5 else VERTICAL
                length = self._rand_len(self.length)
                fixed = rng.randint(-b, b)
                lo = rng.randint(-b, b - length)
                hi = lo + length
                ranges = self.live_lines.get((orient, fixed))
                if ranges and any(lo <= h and l <= hi for l, h, _ in ranges):
                    continue
                self.live_lines.setdefault((orient, fixed), []).append((lo, hi, oid))
                return GeomObject(oid, AxisSegment(orient, fixed, lo, hi))
            raise WorkloadError("could not place axis segment in general position")
        if self.family == "segment":
            for _ in range(10_000):
                length = self._rand_len(self.length)
                x1 = rng.randint(-b, b)
                y1 = rng.randint(-b, b)
                ang = rng.random() * 2 * math.pi
                x2 = min(b, max(-b, x1 + round(length * math.cos(ang))))
                y2 = min(b, max(-b, y1 + round(length * math.sin(ang))))
                if (x1, y1) != (x2, y2):
                    return GeomObject(oid, LineSegment(x1, y1, x2, y2))
            raise WorkloadError("could not place line segment")
        r = self.rng.randint(1, self.radius)
        cx = rng.randint(-b + r, b - r)
        cy = rng.randint(-b + r, b - r)
        return GeomObject(oid, Disk(cx, cy, r))

    def forget(self, obj: GeomObject) -> None:
        if self.family != "axis":
            return
        s = obj.shape
        key = (s.orientation, s.fixed)
        ranges = self.live_lines.get(key)
        if ranges:
            self.live_lines[key] = [t for t in ranges if t[2] != obj.id]
            if not self.live_lines[key]:
                del self.live_lines[key]


def sample_objects(family, count, density, seed, bound=DEFAULT_BOUND, start_id=0):
    """Standalone valid object set (used by experiments)."""
    rng = random.Random(seed)
    sampler = _ShapeSampler(family, rng, bound, density, count)
    return [sampler.sample(start_id + i) for i in range(count)]


def generate(
    family: str,
    n: int,
    ops: int,
    density: float,
    seed: int,
    bound: int = DEFAULT_BOUND,
    ratios: tuple = DEFAULT_RATIOS,
) -> Workload:
    if family not in ("axis", "segment", "disk"):
        raise WorkloadError(f"unknown family {family!r}")
    if n < 0 or ops < 0:
        raise WorkloadError("n and ops must be nonnegative")
    if len(ratios) != 4 or any(r < 0 for r in ratios) or sum(ratios) <= 0:
        raise WorkloadError(f"invalid ratios {ratios!r}")
    total = float(sum(ratios))
    p_ins = ratios[0] / total
    p_del = p_ins + ratios[1] / total
    p_qry = p_del + ratios[2] / total

    rng = random.Random(seed)
    sampler = _ShapeSampler(family, rng, bound, density, n)
    w = Workload(family, seed, bound)
    live: list[GeomObject] = []
    next_id = 0
    for _ in range(n):
        obj = sampler.sample(next_id)
        next_id += 1
        live.append(obj)
        w.ops.append(("I", obj))
    for _ in range(ops):
        roll = rng.random()
        if roll >= p_ins and not live:
            roll = 0.0  # nothing live: fall back to insert
        if roll < p_ins:
            obj = sampler.sample(next_id)
            next_id += 1
            live.append(obj)
            w.ops.append(("I", obj))
        elif roll < p_del:
            victim = live.pop(rng.randrange(len(live)))
            sampler.forget(victim)
            w.ops.append(("D", victim.id))
        elif roll < p_qry:
            a = rng.choice(live).id
            bq = rng.choice(live).id
            w.ops.append(("Q", a, bq))
        else:
            w.ops.append(("C",))
    return w


# ---------------------------------------------------------------------------
# text round trip


def format_workload(w: Workload) -> str:
    lines = [f"H {w.family} {w.seed} {w.bound}"]
    for op in w.ops:
        if op[0] == "I":
            obj = op[1]
            s = obj.shape
            if isinstance(s, AxisSegment):
                o = "H" if s.orientation == HORIZONTAL else "V"
                lines.append(f"IA {obj.id} {o} {s.fixed} {s.lo} {s.hi}")
            elif isinstance(s, LineSegment):
                lines.append(f"IS {obj.id} {s.x1} {s.y1} {s.x2} {s.y2}")
            else:
                lines.append(f"ID {obj.id} {s.cx} {s.cy} {s.r}")
        elif op[0] == "D":
            lines.append(f"D {op[1]}")
        elif op[0] == "Q":
            lines.append(f"Q {op[1]} {op[2]}")
        else:
            lines.append("C")
    return "\n".join(lines) + "\n"


def _ints(parts, want, ln):
    if len(parts) != want:
        raise WorkloadError(f"line {ln}: expected {want} fields, got {len(parts)}")
    try:
        return [int(p) for p in parts]
    except ValueError as e:
        raise WorkloadError(f"line {ln}: {e}") from None


def parse_workload(text: str) -> Workload:
    lines = text.splitlines()
    if not lines:
        raise WorkloadError("empty workload")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "H":
        raise WorkloadError("line 1: malformed header")
    family = head[1]
    if family not in ("axis", "segment", "disk"):
        raise WorkloadError(f"line 1: unknown family {family!r}")
    try:
        seed, bound = int(head[2]), int(head[3])
    except ValueError as e:
        raise WorkloadError(f"line 1: {e}") from None
    w = Workload(family, seed, bound)
    seen: set[int] = set()
    live: set[int] = set()
    kinds = {"IA": "axis", "IS": "segment", "ID": "disk"}
    for ln, raw in enumerate(lines[1:], start=2):
        parts = raw.split()
        if not parts:
            continue
        tag = parts[0]
        if tag in kinds:
            if kinds[tag] != family:
                raise WorkloadError(f"line {ln}: {tag} object in a {family} workload")
            if tag == "IA":
                if len(parts) != 6 or parts[2] not in ("H", "V"):
                    raise WorkloadError(f"line {ln}: malformed IA")
                oid, fixed, lo, hi = _ints([parts[1]] + parts[3:], 4, ln)
                orient = HORIZONTAL if parts[2] == "H" else VERTICAL
                shape = AxisSegment(orient, fixed, lo, hi)
            elif tag == "IS":
                oid, x1, y1, x2, y2 = _ints(parts[1:], 5, ln)
                shape = LineSegment(x1, y1, x2, y2)
            else:
                oid, cx, cy, r = _ints(parts[1:], 4, ln)
                shape = Disk(cx, cy, r)
            if oid in seen:
                raise WorkloadError(f"line {ln}: id {oid} reused")
            try:
                validate_shape(shape)
            except ValueError as e:
                raise WorkloadError(f"line {ln}: {e}") from None
            seen.add(oid)
            live.add(oid)
            w.ops.append(("I", GeomObject(oid, shape)))
        elif tag == "D":
            (oid,) = _ints(parts[1:], 1, ln)
            if oid not in live:
                raise WorkloadError(f"line {ln}: delete of non-live id {oid}")
            live.discard(oid)
            w.ops.append(("D", oid))
        elif tag == "Q":
            a, bq = _ints(parts[1:], 2, ln)
            if a not in live or bq not in live:
                raise WorkloadError(f"line {ln}: query references non-live id")
            w.ops.append(("Q", a, bq))
        elif tag == "C":
            if len(parts) != 1:
                raise WorkloadError(f"line {ln}: malformed C")
            w.ops.append(("C",))
        else:
            raise WorkloadError(f"line {ln}: unknown op {tag!r}")
    return w


def average_degree(objs) -> float:
    """Mean intersection degree of an object set (measured, for calibration
    and for the density monotonicity check)."""
    from .geometry import pairwise_intersections

    items = list(objs)
    if not items:
        return 0.0
    return 2.0 * len(pairwise_intersections(items)) / len(items)
