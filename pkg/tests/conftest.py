"""Shared fixtures: toy graphs, random-graph helpers, dataset access.

Dataset-backed tests look for edge files under $COMWALK_DATA (default
./data) and try one download per session before skipping, so the
quantitative suite runs whenever the public sources are reachable or the
files were fetched beforehand with `comwalk download`.
"""

import os

import numpy as np
import pytest

from comwalk import datasets
from comwalk.graph import TemporalGraph

DATA_ENV = "COMWALK_DATA"

_fetch_failures: dict[str, str] = {}
_graph_cache: dict[str, TemporalGraph] = {}


def data_dir() -> str:
    return os.environ.get(DATA_ENV, "data")


def dataset_or_skip(name: str) -> TemporalGraph:
    """Load a registered dataset, downloading on first use; skip the test
    with the recorded error when the source is unreachable."""
    if name in _graph_cache:
        return _graph_cache[name]
    if name in _fetch_failures:
        pytest.skip(f"dataset {name!r} unavailable: {_fetch_failures[name]}")
    try:
        datasets.fetch(name, data_dir(), timeout=60)
        graph = datasets.load(name, data_dir())
    except Exception as exc:  # noqa: BLE001 - any fetch failure means skip
        _fetch_failures[name] = str(exc)
        pytest.skip(f"dataset {name!r} unavailable: {exc}")
    _graph_cache[name] = graph
    return graph


def random_temporal_graph(
    rng: np.random.Generator, num_nodes: int = 30, num_edges: int = 150
) -> TemporalGraph:
    """Random sparse multigraph with distinct endpoints and random times."""
    src = rng.integers(0, num_nodes, num_edges)
    dst = rng.integers(0, num_nodes, num_edges)
    keep = src != dst
    t = rng.random(int(keep.sum())) * 100.0
    t -= t.min()  # loaded graphs are normalized; keep fixtures consistent
    return TemporalGraph(num_nodes, src[keep], dst[keep], t)


def random_connected_graph(
    rng: np.random.Generator, num_nodes: int, extra_edges: int = 0
) -> TemporalGraph:
    """Connected undirected-projection graph: random spanning tree plus
    optional extra random edges, timestamps in insertion order."""
    edges = set()
    order = rng.permutation(num_nodes)
    for i in range(1, num_nodes):
        a = int(order[i])
        b = int(order[rng.integers(0, i)])
        edges.add((min(a, b), max(a, b)))
    target = min(num_nodes - 1 + extra_edges, num_nodes * (num_nodes - 1) // 2)
    while len(edges) < target:
        a, b = rng.integers(0, num_nodes, 2)
        if a != b:
            edges.add((min(int(a), int(b)), max(int(a), int(b))))
    pairs = sorted(edges)
    pairs = [pairs[i] for i in rng.permutation(len(pairs))]
    src = np.array([p[0] for p in pairs])
    dst = np.array([p[1] for p in pairs])
    t = np.arange(len(pairs), dtype=np.float64)
    return TemporalGraph(num_nodes, src, dst, t)


def is_bipartite(g: TemporalGraph) -> bool:
    color = {}
    for start in range(g.num_nodes):
        if start in color or g.static_degree(start) == 0:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v in g.static_neighbors(u).tolist():
                if v not in color:
                    color[v] = color[u] ^ 1
                    queue.append(v)
                elif color[v] == color[u]:
                    return False
    return True


@pytest.fixture
def line_graph() -> TemporalGraph:
    """5-node chain s->a->b->c->d with strictly increasing timestamps, so
    the only time-respecting walk from edge (s, a) is a,b,c,d."""
    src = np.array([0, 1, 2, 3])
    dst = np.array([1, 2, 3, 4])
    t = np.array([0.0, 1.0, 2.0, 3.0])
    return TemporalGraph(5, src, dst, t, labels=list("sabcd"))


@pytest.fixture
def community_graph() -> TemporalGraph:
    """Two 15-node communities with repeated within-community interactions
    over time; link prediction inside communities is easy, which gives the
    heuristics and the pipeline signal to find, while enough non-edges
    remain for every negative-sampling stage."""
    rng = np.random.default_rng(1234)
    src, dst = [], []
    for block in (range(0, 18), range(18, 36)):
        nodes = list(block)
        for _ in range(220):
            a, b = rng.choice(nodes, 2, replace=False)
            src.append(a)
            dst.append(b)
    for _ in range(12):  # sparse cross links
        a = rng.integers(0, 18)
        b = rng.integers(18, 36)
        src.append(a)
        dst.append(b)
    t = np.sort(rng.random(len(src)) * 1000.0)
    return TemporalGraph(36, np.array(src), np.array(dst), t)
