"""Disk separator: balance bounds, stabbing coverage, exact arithmetic."""

from __future__ import annotations

import random
from math import isqrt

import pytest

from geoconn.errors import InstanceTooSmallError
from geoconn.geometry import Disk, GeomObject
from geoconn.separator import (
    C_SEP,
    disk_contains_point_scaled,
    find_disk_separator,
    smallest_square_with_k,
)
from geoconn.workload import sample_objects


def brute_smallest_square(points, k):
    # candidate sides are coordinate differences; placement anchored at
    # point coordinates
    xs = sorted({p[0] for p in points})
    ys = sorted({p[1] for p in points})
    sides = sorted(
        {0}
        | {abs(a - b) for a in xs for b in xs}
        | {abs(a - b) for a in ys for b in ys}
    )
    for s in sides:
        for x in xs:
            for y in ys:
                cnt = sum(1 for px, py in points if x <= px <= x + s and y <= py <= y + s)
                if cnt >= k:
                    return s
    raise AssertionError("unreachable")


def test_smallest_square_matches_brute():
    rng = random.Random(12)
    for trial in range(40):
        n = rng.randint(3, 11)
        pts = [(rng.randint(-30, 30), rng.randint(-30, 30)) for _ in range(n)]
        k = rng.randint(1, n)
        side, x, y = smallest_square_with_k(pts, k)
        assert side == brute_smallest_square(pts, k)
        cnt = sum(1 for px, py in pts if x <= px <= x + side and y <= py <= y + side)
        assert cnt >= k


def test_smallest_square_identical_points():
    assert smallest_square_with_k([(5, 5)] * 9, 7) == (0, 5, 5)


def test_too_small_instance():
    with pytest.raises(InstanceTooSmallError):
        find_disk_separator([GeomObject(i, Disk(i, 0, 1)) for i in range(24)])


def check_result(disks, res):
    n = len(disks)
    by_id = {o.id: o for o in disks}
    ids = set(by_id)
    assert set(res.inside_ids) | set(res.outside_ids) | set(res.boundary_ids) == ids
    assert not set(res.inside_ids) & set(res.outside_ids)
    assert not set(res.inside_ids) & set(res.boundary_ids)
    assert not set(res.outside_ids) & set(res.boundary_ids)
    assert len(res.inside_ids) <= 4 * n / 5
    assert len(res.outside_ids) <= 4 * n / 5
    # geometry of the partition, re-checked in scaled integer arithmetic
    czx, czy = res.center_scaled
    h = res.half_side_scaled
    for oid in res.inside_ids:
        s = by_id[oid].shape
        dx = abs(res.scale * s.cx - czx)
        dy = abs(res.scale * s.cy - czy)
        assert max(dx, dy) + res.scale * s.r < h
    for oid in res.outside_ids:
        s = by_id[oid].shape
        ex = max(abs(res.scale * s.cx - czx) - h, 0)
        ey = max(abs(res.scale * s.cy - czy) - h, 0)
        assert ex * ex + ey * ey > (res.scale * s.r) ** 2
    # every boundary disk is stabbed
    pts = res.stabbing_points_scaled
    for oid in res.boundary_ids:
        s = by_id[oid].shape
        assert any(disk_contains_point_scaled(s, p, res.scale) for p in pts), oid
    assert len(pts) <= C_SEP * isqrt(n) + C_SEP


def test_identical_centers_degenerate():
    disks = [GeomObject(i, Disk(7, -3, 1 + i % 4)) for i in range(30)]
    res = find_disk_separator(disks)
    check_result(disks, res)
    assert res.inside_ids == []
    assert res.boundary_ids == [o.id for o in disks]


def test_grid_of_unit_disks():
    disks = [
        GeomObject(5 * gy + gx, Disk(10 * gx, 10 * gy, 1))
        for gy in range(5)
        for gx in range(5)
    ]
    res = find_disk_separator(disks)
    check_result(disks, res)
    assert len(res.inside_ids) <= 20
    assert len(res.outside_ids) <= 20


def test_random_instances():
    rng = random.Random(5)
    for trial in range(25):
        n = rng.randint(25, 400)
        disks = sample_objects("disk", n, 1.0 + 2.0 * rng.random(), trial)
        res = find_disk_separator(disks)
        check_result(disks, res)


def test_fraction_views_consistent():
    disks = sample_objects("disk", 60, 1.5, 8)
    res = find_disk_separator(disks)
    assert res.side == 2 * res.t.denominator * res.half_side_scaled / (
        res.scale * res.t.denominator
    )
    assert 0 < res.t < 1
    assert len(res.stabbing_points) == len(res.stabbing_points_scaled)
