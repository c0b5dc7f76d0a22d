"""Shared instance generators for the test suite."""

from __future__ import annotations

import random

import pytest

from geoconn.oracle import oracle_components
from geoconn.workload import _ShapeSampler


def make_instance(family, n, n_queries, density, seed, bound=60_000):
    """A valid single-family object set split into (components, queries).

    Everything is drawn from one sampler pass so axis-aligned instances are
    in general position jointly (base objects and queries)."""
    rng = random.Random(seed)
    sampler = _ShapeSampler(family, rng, bound, density, max(n, 4))
    objs = [sampler.sample(i) for i in range(n)]
    queries = [sampler.sample(n + j) for j in range(n_queries)]
    part = oracle_components(objs)
    comps = [part.components[cid] for cid in sorted(part.components)]
    return comps, queries


def comp_intersects(comp, query):
    from geoconn.geometry import intersects

    return any(intersects(query, o) for o in comp.objects)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
