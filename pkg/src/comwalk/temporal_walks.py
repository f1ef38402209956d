"""Temporal walks biased toward minimal information-transport cost.

At each hop the walker looks at the time-valid neighbors of the current
node, compares neighbor-degree distributions through the 1-D transport
distance, and moves to the candidate with the smallest distance (ties
broken uniformly at random). The clock then advances to the chosen edge's
timestamp, so walks always respect time.

The distance evaluations dominate the corpus-generation runtime, so the
walker ranks candidates through TransportIndex, which caches per-node
degree CDFs on the global degree grid. The index computes exactly the
same integral as distributions.wasserstein_1d; the equivalence is pinned
by tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, SamplingError
from .graph import NodeId, TemporalEdge, TemporalGraph

WASSERSTEIN_BIAS = "wasserstein"
UNIFORM_BIAS = "uniform"


@dataclass(frozen=True)
class WalkConfig:
    """Shared sampling parameters for corpus generation.

    max_walk_length caps the node count of one temporal walk; the walker
    may stop earlier at a temporal dead end. context_window is the
    skip-gram window the budget formula counts against. spatial_length is
    the number of accepted Metropolis-Hastings moves per spatial walk.
    """

    max_walk_length: int = 80
    context_window: int = 10
    walks_per_node: int = 10
    spatial_length: int = 8
    seed: int = 0
    bias: str = WASSERSTEIN_BIAS

    def __post_init__(self):
        if self.context_window < 1:
            raise ConfigError(f"context_window: must be >= 1, got {self.context_window}")
        if self.max_walk_length < self.context_window:
            raise ConfigError(
                f"max_walk_length: must be >= context_window, got "
                f"{self.max_walk_length} < {self.context_window}"
            )
        if self.walks_per_node < 1:
            raise ConfigError(f"walks_per_node: must be >= 1, got {self.walks_per_node}")
        if self.spatial_length < 1:
            raise ConfigError(f"spatial_length: must be >= 1, got {self.spatial_length}")
        if self.bias not in (WASSERSTEIN_BIAS, UNIFORM_BIAS):
            raise ConfigError(f"bias: must be wasserstein or uniform, got {self.bias!r}")


@dataclass
class TemporalWalk:
    """Time-respecting node sequence; times[i] is the timestamp of the edge
    that brought the walk to nodes[i] (times[0] is the start edge's)."""

    nodes: list[NodeId]
    times: list[float]
    start_edge: TemporalEdge


class TransportIndex:
    """Cached transport distances between temporal neighbor-degree
    distributions, all evaluated on the global static-degree grid.

    A node's distribution at time t is fully determined by the suffix of
    its time-sorted out-adjacency starting after t, so CDFs are cached per
    (node, suffix offset) and distances per suffix-offset pair. Caches are
    cleared when they grow past ``max_cache_entries``.
    """

    def __init__(self, g: TemporalGraph, max_cache_entries: int = 2_000_000):
        self.g = g
        deg = g.static_degree()
        self.grid = np.unique(deg)
        self.gaps = np.diff(self.grid).astype(np.float64)
        # per-node grid index of each out-neighbor's degree, time-ordered
        self._nbr_didx = [
            np.searchsorted(self.grid, deg[g.out_adjacency(v)[0]]) for v in range(g.num_nodes)
        ]
        self._self_didx = np.searchsorted(self.grid, deg)
        self._cdf_cache: dict[tuple[int, int], np.ndarray] = {}
        self._dist_cache: dict[tuple[tuple[int, int], tuple[int, int]], float] = {}
        self._max_cache = max_cache_entries

    def suffix_offset(self, v: NodeId, t: float) -> int:
        return self.g.suffix_start(v, t)

    def _suffix_cdf(self, v: NodeId, k: int) -> np.ndarray:
        key = (v, k)
        cdf = self._cdf_cache.get(key)
        if cdf is None:
            didx = self._nbr_didx[v][k:]
            if didx.size == 0:
                # empty neighborhood falls back to a point mass at deg(v)
                counts = np.zeros(self.grid.size)
                counts[self._self_didx[v]] = 1.0
            else:
                counts = np.bincount(didx, minlength=self.grid.size) / didx.size
            cdf = np.cumsum(counts)[:-1]
            if len(self._cdf_cache) >= self._max_cache:
                self._cdf_cache.clear()
            self._cdf_cache[key] = cdf
        return cdf

    def distance(self, u: NodeId, ku: int, w: NodeId, kw: int) -> float:
        """Transport distance between the (u, suffix ku) and (w, suffix kw)
        degree distributions."""
        a, b = (u, ku), (w, kw)
        key = (a, b) if a <= b else (b, a)
        d = self._dist_cache.get(key)
        if d is None:
            d = float(np.abs(self._suffix_cdf(u, ku) - self._suffix_cdf(w, kw)) @ self.gaps)
            if len(self._dist_cache) >= self._max_cache:
                self._dist_cache.clear()
            self._dist_cache[key] = d
        return d


def temporal_walk(
    g: TemporalGraph,
    start: TemporalEdge,
    cfg: WalkConfig,
    rng: np.random.Generator,
    index: TransportIndex | None = None,
) -> TemporalWalk:
    """Walk from start.dst with clock start.t until a dead end or until the
    walk holds max_walk_length nodes.

    With wasserstein bias the next node is the time-valid candidate whose
    degree distribution (at the current clock) is transport-closest to the
    current node's; uniform bias picks any time-valid candidate and is the
    ablation hook. Tie-breaks are uniform over all minimizing entries, and
    repeated interactions give a candidate one entry per qualifying edge.
    """
    if not g.has_edge_at(start.src, start.dst, start.t):
        raise ValueError(f"start edge {start} is not an edge of the graph")
    if cfg.bias == WASSERSTEIN_BIAS and index is None:
        index = TransportIndex(g)
    nodes = [start.dst]
    times = [start.t]
    current, t = start.dst, start.t
    for _ in range(cfg.max_walk_length - 1):
        nbr, nbr_t = g.temporal_suffix(current, t)
        if nbr.size == 0:
            break
        if cfg.bias == UNIFORM_BIAS:
            j = int(rng.integers(0, nbr.size))
        else:
            k_cur = index.suffix_offset(current, t)
            uniq = np.unique(nbr)
            by_node = {
                int(w): index.distance(current, k_cur, int(w), index.suffix_offset(w, t))
                for w in uniq
            }
            dist = np.array([by_node[int(w)] for w in nbr.tolist()])
            ties = np.flatnonzero(dist == dist.min())
            j = int(ties[rng.integers(0, ties.size)]) if ties.size > 1 else int(ties[0])
        current = int(nbr[j])
        t = float(nbr_t[j])
        nodes.append(current)
        times.append(t)
    return TemporalWalk(nodes, times, start)


def context_window_budget(cfg: WalkConfig, num_nodes: int) -> int:
    """Target number of context windows for one corpus pass:
    walks_per_node * num_nodes * (max_walk_length - context_window + 1)."""
    return cfg.walks_per_node * num_nodes * (cfg.max_walk_length - cfg.context_window + 1)


def walk_rng(seed: int, walk_index: int) -> np.random.Generator:
    """Independent stream for one walk, derived from (seed, walk index) so
    corpus content does not depend on execution order or worker count."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(walk_index,))))


def generate_temporal_corpus(
    g: TemporalGraph,
    cfg: WalkConfig,
    index: TransportIndex | None = None,
    attempt_factor: int = 10,
) -> list[TemporalWalk]:
    """Sample start edges uniformly and walk until the context-window budget
    is met.

    Each walk of n >= context_window nodes contributes n - window + 1
    windows; shorter walks stay in the corpus but count nothing, and the
    loop gives up after attempt_factor * budget walks (pathologically
    sparse temporal structure).
    """
    if g.num_edges == 0:
        raise SamplingError("cannot generate walks on an empty graph")
    if cfg.bias == WASSERSTEIN_BIAS and index is None:
        index = TransportIndex(g)
    budget = context_window_budget(cfg, g.num_nodes)
    walks: list[TemporalWalk] = []
    covered = 0
    attempts = 0
    max_attempts = attempt_factor * budget
    while covered < budget:
        if attempts >= max_attempts:
            raise SamplingError(
                f"context-window budget unreachable: {covered}/{budget} windows "
                f"after {attempts} walks"
            )
        rng = walk_rng(cfg.seed, attempts)
        start = g.edge(int(rng.integers(0, g.num_edges)))
        walk = temporal_walk(g, start, cfg, rng, index)
        walks.append(walk)
        if len(walk.nodes) >= cfg.context_window:
            covered += len(walk.nodes) - cfg.context_window + 1
        attempts += 1
    return walks


def write_walks(walks: list[TemporalWalk], path) -> None:
    """Dump a corpus for offline inspection, one walk of node ids per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for walk in walks:
            fh.write(" ".join(str(n) for n in walk.nodes))
            fh.write("\n")
