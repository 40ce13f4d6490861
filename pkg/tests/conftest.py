"""Shared helpers: seeded random hosts and random vertex subsets."""

import numpy as np
import pytest

from spectre.graph import Graph


def random_connected_graph(rng, n, chords=None):
    """Connected graph on n labelled vertices: random spanning tree plus chords."""
    if n == 1:
        return Graph([[]], check=False)
    order = rng.permutation(n)
    edges = set()
    for i in range(1, n):
        a, b = order[i], order[int(rng.integers(0, i))]
        edges.add((min(a, b), max(a, b)))
    if chords is None:
        chords = int(rng.integers(0, n))
    for _ in range(chords):
        a, b = (int(x) for x in rng.integers(0, n, size=2))
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(n, sorted((int(a), int(b)) for a, b in edges))


def random_connected_subset(rng, g, excluded=(), size=None):
    """Random connected subset of the complement of ``excluded``, grown by BFS."""
    banned = set(excluded)
    allowed = [v for v in range(g.vertex_count) if v not in banned]
    start = allowed[int(rng.integers(0, len(allowed)))]
    if size is None:
        size = 1 + int(rng.integers(0, min(len(allowed), 8)))
    members = {start}
    frontier = [start]
    while frontier and len(members) < size:
        v = frontier.pop(int(rng.integers(0, len(frontier))))
        for w in g.neighbors(v):
            if w not in members and w not in banned:
                members.add(w)
                frontier.append(w)
                if len(members) >= size:
                    break
    return sorted(members)


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)
