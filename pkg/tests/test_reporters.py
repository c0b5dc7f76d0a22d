"""Reporter backends: stream partition, oracle agreement, updates, laziness."""

from __future__ import annotations

import math
import random

import pytest

from conftest import comp_intersects, make_instance
from geoconn.errors import GeneralPositionError, MissingComponentError
from geoconn.geometry import AxisSegment, Disk, GeomObject, LineSegment
from geoconn.graph import Component
from geoconn.reporters import (
    REPORTER_FACTORIES,
    build_axis_reporter,
    build_disk_reporter,
    build_segment_reporter,
)

FAMILIES = ["axis", "disk", "segment"]

# Work-budget constant for the axis backend, frozen after a calibration run
# over the same instance distribution (worst observed ratio 1.81 across
# 300 fresh and 60 churned reporter states; margin ~2.2x).
AXIS_WORK_K = 4


def drain_both(rep, query):
    inter = list(rep.stream_intersecting(query))
    non = list(rep.stream_nonintersecting(query))
    return inter, non


def check_against_oracle(rep, comps_by_id, query):
    inter, non = drain_both(rep, query)
    ids_i = {cid for cid, _ in inter}
    ids_n = {cid for cid, _ in non}
    assert not (ids_i & ids_n), "streams overlap"
    assert ids_i | ids_n == set(rep.live), "streams not exhaustive"
    assert len(inter) == len(ids_i) and len(non) == len(ids_n), "duplicate yields"
    want_i = {cid for cid in rep.live if comp_intersects(comps_by_id[cid], query)}
    assert ids_i == want_i
    for cid, size in inter + non:
        assert size == comps_by_id[cid].size
    return len(inter), len(non)


# ---------------------------------------------------------------------------
# pinned examples


def test_axis_single_horizontal_crossing():
    comp = Component(0, (GeomObject(0, AxisSegment("h", 0, 0, 10)),))
    rep = build_axis_reporter([comp])
    hit = GeomObject(9, AxisSegment("v", 5, -1, 1))
    assert list(rep.stream_intersecting(hit)) == [(0, 1)]
    assert list(rep.stream_nonintersecting(hit)) == []
    above = GeomObject(8, AxisSegment("v", 5, 1, 2))
    assert list(rep.stream_intersecting(above)) == []
    assert list(rep.stream_nonintersecting(above)) == [(0, 1)]


def test_disk_reporter_examples():
    comp = Component(0, (GeomObject(0, Disk(0, 0, 2)),))
    rep = build_disk_reporter([comp])
    far = GeomObject(9, Disk(5, 0, 2))  # gap 1
    assert list(rep.stream_nonintersecting(far)) == [(0, 1)]
    assert list(rep.stream_intersecting(far)) == []
    near = GeomObject(8, Disk(3, 0, 2))  # distance 3 <= 4
    assert list(rep.stream_intersecting(near)) == [(0, 1)]


def test_segment_reporter_examples():
    comp = Component(0, (GeomObject(0, LineSegment(0, 0, 10, 0)),))
    rep = build_segment_reporter([comp])
    hit = GeomObject(9, LineSegment(5, -1, 5, 1))
    assert list(rep.stream_intersecting(hit)) == [(0, 1)]
    miss = GeomObject(8, LineSegment(20, 0, 21, 0))
    assert list(rep.stream_nonintersecting(miss)) == [(0, 1)]
    assert list(rep.stream_intersecting(miss)) == []


def test_axis_rejects_collinear_overlap_at_build():
    comp = Component(
        0,
        (
            GeomObject(0, AxisSegment("h", 0, 0, 10)),
            GeomObject(1, AxisSegment("h", 0, 5, 15)),
        ),
    )
    with pytest.raises(GeneralPositionError):
        build_axis_reporter([comp])


def test_delete_insert_component_errors():
    comp = Component(0, (GeomObject(0, Disk(0, 0, 2)),))
    rep = build_disk_reporter([comp])
    with pytest.raises(MissingComponentError):
        rep.delete_component(7)
    rep.delete_component(0)
    with pytest.raises(MissingComponentError):
        rep.delete_component(0)
    rep.insert_component(comp)
    with pytest.raises(MissingComponentError):
        rep.insert_component(comp)


# ---------------------------------------------------------------------------
# randomized differential sweeps


@pytest.mark.parametrize("family", FAMILIES)
def test_streams_match_oracle_randomized(family):
    for seed in range(40):
        comps, queries = make_instance(family, 8 + seed % 40, 6, 0.5 + (seed % 4), seed)
        rep = REPORTER_FACTORIES[family](comps)
        by_id = {c.cid: c for c in comps}
        for q in queries:
            check_against_oracle(rep, by_id, q)


@pytest.mark.parametrize("family", FAMILIES)
def test_insert_delete_interleaving(family):
    rng = random.Random(hash(family) & 0xFFFF)
    for seed in range(12):
        comps, queries = make_instance(family, 30, 4, 1.5, 1000 + seed)
        rep = REPORTER_FACTORIES[family](comps)
        by_id = {c.cid: c for c in comps}
        live = set(by_id)
        removed = []
        for step in range(30):
            roll = rng.random()
            if roll < 0.4 and len(live) > 1:
                cid = rng.choice(sorted(live))
                rep.delete_component(cid)
                live.discard(cid)
                removed.append(cid)
            elif roll < 0.6 and removed:
                cid = removed.pop(rng.randrange(len(removed)))
                rep.insert_component(by_id[cid])
                live.add(cid)
            else:
                q = rng.choice(queries)
                inter, non = drain_both(rep, q)
                ids = {cid for cid, _ in inter} | {cid for cid, _ in non}
                assert ids == live, "stream union must equal live set"
                want = {c for c in live if comp_intersects(by_id[c], q)}
                assert {cid for cid, _ in inter} == want


def test_membership_stream_order_is_ascending_id():
    comps, queries = make_instance("disk", 25, 1, 2.0, 5)
    rep = build_disk_reporter(comps)
    inter, non = drain_both(rep, queries[0])
    got = [cid for cid, _ in inter] + [cid for cid, _ in non]
    assert [cid for cid, _ in inter] == sorted(cid for cid, _ in inter)
    assert [cid for cid, _ in non] == sorted(cid for cid, _ in non)
    assert sorted(got) == sorted(rep.live)


# ---------------------------------------------------------------------------
# work accounting: output sensitivity and laziness


def axis_budget(n_objects: int, k: int) -> float:
    log = math.log2(max(2, n_objects)) + 1
    return AXIS_WORK_K * log * log * (1 + k)


def test_axis_work_bound():
    worst = 0.0
    for seed in range(60):
        n = 6 + (seed * 7) % 60
        comps, queries = make_instance("axis", n, 8, 0.5 + (seed % 4), 2000 + seed)
        rep = build_axis_reporter(comps)
        n_objs = sum(c.size for c in comps)
        for q in queries:
            for stream_of in (rep.stream_intersecting, rep.stream_nonintersecting):
                before = rep.work_counter
                k = sum(1 for _ in stream_of(q))
                delta = rep.work_counter - before
                budget = axis_budget(n_objs, k)
                worst = max(worst, delta / budget)
                assert delta <= budget, (seed, n, k, delta, budget)
    # headroom so distribution drift shows up before an outright failure
    assert worst < 0.9, f"calibration headroom shrank: worst ratio {worst:.2f}"


def test_axis_first_item_lazy():
    comps, queries = make_instance("axis", 60, 10, 2.0, 77)
    rep = build_axis_reporter(comps)
    n_objs = sum(c.size for c in comps)
    for q in queries:
        before = rep.work_counter
        next(rep.stream_intersecting(q), None)
        delta = rep.work_counter - before
        assert delta <= axis_budget(n_objs, 1)


@pytest.mark.parametrize("family", ["disk", "segment"])
def test_membership_first_item_lazy(family):
    # first component (smallest id) always qualifies: pulling one item must
    # cost exactly one classification, independent of class size
    for seed in range(10):
        comps, queries = make_instance(family, 40, 8, 1.5, 3000 + seed)
        by_id = {c.cid: c for c in comps}
        first = comps[0]
        hits = [q for q in queries if comp_intersects(first, q)]
        if not hits:
            continue
        q = hits[0]
        rep = REPORTER_FACTORIES[family](comps)
        before = rep.work_counter
        cid, _ = next(rep.stream_intersecting(q))
        assert cid == first.cid
        cost_multi = rep.work_counter - before
        solo = REPORTER_FACTORIES[family]([first])
        before = solo.work_counter
        assert list(solo.stream_intersecting(q)) == [(first.cid, first.size)]
        cost_solo = solo.work_counter - before
        assert cost_multi == cost_solo


def test_stream_determinism():
    comps, queries = make_instance("axis", 40, 4, 2.0, 123)
    rep1 = build_axis_reporter(comps)
    rep2 = build_axis_reporter(comps)
    for q in queries:
        assert list(rep1.stream_intersecting(q)) == list(rep2.stream_intersecting(q))
        assert list(rep1.stream_nonintersecting(q)) == list(rep2.stream_nonintersecting(q))
