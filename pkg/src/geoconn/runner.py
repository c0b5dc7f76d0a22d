"""Workload execution, differential verification, benchmarking."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .engine import Engine, EngineConfig
from .geometry import intersects
from .graph import UnionFind
from .workload import Workload, generate


class OracleHarness:
    """Incrementally maintained brute-force mirror of the live object set.

    Edges are refreshed per insertion with direct predicates; connectivity
    labels are recomputed from the live graph whenever queried after a
    change, so every answer is derived from first principles."""

    def __init__(self):
        self.objs: dict[int, object] = {}
        self.adj: dict[int, set[int]] = {}
        self._labels = None

    def insert(self, obj) -> None:
        self.adj[obj.id] = set()
        for other in self.objs.values():
            if intersects(other, obj):
                self.adj[other.id].add(obj.id)
                self.adj[obj.id].add(other.id)
        self.objs[obj.id] = obj
        self._labels = None

    def delete(self, oid: int) -> None:
        for other in self.adj.pop(oid):
            self.adj[other].discard(oid)
        del self.objs[oid]
        self._labels = None

    def _ensure(self):
        if self._labels is not None:
            return
        ids = sorted(self.objs)
        index = {oid: i for i, oid in enumerate(ids)}
        uf = UnionFind(len(ids))
        for oid, nbrs in self.adj.items():
            for other in nbrs:
                uf.union(index[oid], index[other])
        self._labels = ({oid: uf.find(index[oid]) for oid in ids}, uf.count)

    def connected(self, u: int, v: int) -> bool:
        self._ensure()
        labels, _ = self._labels
        return labels[u] == labels[v]

    def count(self) -> int:
        self._ensure()
        return self._labels[1]


@dataclass
class RunResult:
    outputs: list[str]
    stats: list[dict] = field(default_factory=list)
    engine: Engine | None = None


def _engine_for(workload: Workload, initial, q_override=None, verify_hooks=False) -> Engine:
    policy = (lambda n: q_override) if q_override else None
    cfg = EngineConfig(workload.family, q_policy=policy, verify_hooks=verify_hooks)
    return Engine(initial, cfg)


def run_workload(
    workload: Workload,
    q_override: int | None = None,
    collect_stats: bool = False,
    verify_hooks: bool = False,
) -> RunResult:
    initial, rest = workload.initial_prefix()
    engine = _engine_for(workload, initial, q_override, verify_hooks)
    outputs: list[str] = []
    stats: list[dict] = []
    for idx, op in enumerate(rest):
        t0 = time.perf_counter() if collect_stats else 0.0
        if op[0] == "I":
            engine.insert(op[1])
        elif op[0] == "D":
            engine.delete(op[1])
        elif op[0] == "Q":
            outputs.append("1" if engine.query(op[1], op[2]) else "0")
        else:
            outputs.append(str(engine.num_components()))
        if collect_stats:
            led = engine.registry.ledger
            stats.append(
                {
                    "idx": idx,
                    "op": op[0],
                    "micros": (time.perf_counter() - t0) * 1e6,
                    "phase": engine.phase_index,
                    "classes": len(engine.registry.classes),
                    "displaced_weight": led.displaced_weight,
                    "sigma": led.sigma,
                }
            )
    return RunResult(outputs, stats, engine)


@dataclass
class VerifyReport:
    match: bool
    checked: int
    divergence: dict | None = None

    def describe(self) -> str:
        if self.match:
            return f"MATCH ({self.checked} answers)"
        d = self.divergence
        return (
            f"DIVERGENCE at op {d['idx']} ({d['op']}): "
            f"engine={d['engine']} oracle={d['oracle']}"
        )


def verify_workload(
    workload: Workload, q_override: int | None = None, verify_hooks: bool = False
) -> VerifyReport:
    """Run engine and brute-force oracle side by side; first divergence wins."""
    initial, rest = workload.initial_prefix()
    engine = _engine_for(workload, initial, q_override, verify_hooks)
    oracle = OracleHarness()
    for obj in initial:
        oracle.insert(obj)
    checked = 0
    if engine.num_components() != oracle.count():
        return VerifyReport(
            False,
            0,
            {"idx": -1, "op": "C0", "engine": engine.num_components(), "oracle": oracle.count()},
        )
    for idx, op in enumerate(rest):
        if op[0] == "I":
            engine.insert(op[1])
            oracle.insert(op[1])
        elif op[0] == "D":
            engine.delete(op[1])
            oracle.delete(op[1])
        elif op[0] == "Q":
            got = engine.query(op[1], op[2])
            want = oracle.connected(op[1], op[2])
            checked += 1
            if got != want:
                return VerifyReport(
                    False, checked, {"idx": idx, "op": "Q", "engine": got, "oracle": want}
                )
        else:
            got = engine.num_components()
            want = oracle.count()
            checked += 1
            if got != want:
                return VerifyReport(
                    False, checked, {"idx": idx, "op": "C", "engine": got, "oracle": want}
                )
    return VerifyReport(True, checked)


BENCH_RATIOS = (0.40, 0.40, 0.15, 0.05)


def bench_one(family: str, n: int, seed: int, density: float = 1.5) -> dict:
    """One timed workload: n-object bootstrap, then enough mixed updates to
    cross at least two phase boundaries."""
    cfg = EngineConfig(family)
    q = cfg.phase_length(n)
    ops = max(24, 3 * q)
    w = generate(family, n, ops, density, seed, ratios=BENCH_RATIOS)
    initial, rest = w.initial_prefix()
    engine = Engine(initial, EngineConfig(family))
    update_s = 0.0
    query_s = 0.0
    updates = 0
    queries = 0
    for op in rest:
        if op[0] == "I":
            t0 = time.perf_counter()
            engine.insert(op[1])
            update_s += time.perf_counter() - t0
            updates += 1
        elif op[0] == "D":
            t0 = time.perf_counter()
            engine.delete(op[1])
            update_s += time.perf_counter() - t0
            updates += 1
        elif op[0] == "Q":
            t0 = time.perf_counter()
            engine.query(op[1], op[2])
            query_s += time.perf_counter() - t0
            queries += 1
        else:
            engine.num_components()
    led_rows = engine.ledger_rows()
    return {
        "family": family,
        "n": n,
        "seed": seed,
        "updates": updates,
        "queries": queries,
        "amortized_update_us": (update_s / updates * 1e6) if updates else 0.0,
        "mean_query_us": (query_s / queries * 1e6) if queries else 0.0,
        "displaced_weight": sum(r["displaced_weight"] for r in led_rows),
        "classes": len(engine.registry.classes),
        "phases": engine.phase_index + 1,
    }
