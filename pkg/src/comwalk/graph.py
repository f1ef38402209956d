"""Continuous-time interaction graphs: loading, queries, chronological splits.

A graph is a list of timestamped directed edges over a dense node index.
Timestamps are normalized so the earliest interaction happens at time 0.
Multi-edges are kept: repeated interactions between the same pair are real
events and the temporal walkers rely on them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigError, DataError, EdgeListError, SamplingError

NodeId = int

COMMENT_PREFIXES = ("#", "%")


@dataclass(frozen=True)
class TemporalEdge:
    src: NodeId
    dst: NodeId
    t: float


@dataclass(frozen=True)
class LoadOptions:
    """Column layout of a plain-text edge list.

    delimiter None means "any run of whitespace"; pass "," for CSV-style files.
    Column indices are 0-based and may appear in any order on the line.
    """

    delimiter: str | None = None
    comment: tuple[str, ...] = COMMENT_PREFIXES
    src_col: int = 0
    dst_col: int = 1
    time_col: int = 2


class TemporalGraph:
    """Immutable directed graph with timestamped edges.

    Edges are stored time-ascending (stable with respect to input order).
    Besides the edge list the graph keeps:

    * per-node out-adjacency sorted by time (temporal neighbor queries),
    * per-node sorted sets of undirected static neighbors (degree, CN/JC,
      spatial walks),
    * the raw-label bijection assigned at load time.

    Instances are never mutated after construction, so they are safe to
    share across worker threads.
    """

    __slots__ = (
        "num_nodes",
        "src",
        "dst",
        "t",
        "labels",
        "_out_nbr",
        "_out_t",
        "_static_nbr",
        "_static_deg",
        "_pair_set",
    )

    def __init__(
        self,
        num_nodes: int,
        src: np.ndarray,
        dst: np.ndarray,
        t: np.ndarray,
        labels: Sequence[str] | None = None,
    ):
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        t = np.asarray(t, dtype=np.float64)
        if not (src.shape == dst.shape == t.shape):
            raise ValueError("src, dst and t must have identical length")
        if src.size and (src.min() < 0 or max(src.max(), dst.max()) >= num_nodes):
            raise ValueError("node ids must lie in [0, num_nodes)")
        order = np.argsort(t, kind="stable")
        self.num_nodes = int(num_nodes)
        self.src = src[order]
        self.dst = dst[order]
        self.t = t[order]
        self.labels = list(labels) if labels is not None else [str(i) for i in range(num_nodes)]
        self._build_adjacency()
        self._pair_set: frozenset | None = None

    def _build_adjacency(self) -> None:
        n = self.num_nodes
        out_nbr: list[np.ndarray] = [None] * n  # type: ignore[list-item]
        out_t: list[np.ndarray] = [None] * n  # type: ignore[list-item]
        # edges are already time-sorted, so a stable grouping by src keeps
        # each node's out-list time-ascending
        order = np.argsort(self.src, kind="stable")
        s_sorted = self.src[order]
        bounds = np.searchsorted(s_sorted, np.arange(n + 1))
        for v in range(n):
            idx = order[bounds[v]:bounds[v + 1]]
            out_nbr[v] = self.dst[idx]
            out_t[v] = self.t[idx]
        self._out_nbr = out_nbr
        self._out_t = out_t

        undirected: list[set] = [set() for _ in range(n)]
        for u, v in zip(self.src.tolist(), self.dst.tolist()):
            undirected[u].add(v)
            undirected[v].add(u)
        self._static_nbr = [np.fromiter(sorted(s), dtype=np.int64, count=len(s)) for s in undirected]
        self._static_deg = np.array([len(s) for s in undirected], dtype=np.int64)

    # -- basic queries ----------------------------------------------------

    @property
    def num_edges(self) -> int:
        return int(self.src.size)

    def edge(self, i: int) -> TemporalEdge:
        return TemporalEdge(int(self.src[i]), int(self.dst[i]), float(self.t[i]))

    def edges(self) -> Iterator[TemporalEdge]:
        for s, d, ts in zip(self.src.tolist(), self.dst.tolist(), self.t.tolist()):
            yield TemporalEdge(s, d, ts)

    def has_edge_at(self, src: NodeId, dst: NodeId, t: float) -> bool:
        times = self._out_t[src]
        lo = np.searchsorted(times, t, side="left")
        hi = np.searchsorted(times, t, side="right")
        return bool(np.any(self._out_nbr[src][lo:hi] == dst))

    def static_neighbors(self, v: NodeId) -> np.ndarray:
        """Sorted undirected neighbor set of v, ignoring time and multiplicity."""
        return self._static_nbr[v]

    def static_degree(self, v: NodeId | None = None):
        """Size of the undirected neighbor set; full array when v is None."""
        if v is None:
            return self._static_deg
        return int(self._static_deg[v])

    def active_nodes(self) -> np.ndarray:
        """Nodes that participate in at least one edge."""
        return np.flatnonzero(self._static_deg > 0)

    def temporal_neighbors(self, v: NodeId, t: float) -> list[tuple[NodeId, float]]:
        """Out-neighbors of v reachable strictly after time t, time-ascending.

        Repeated interactions yield repeated entries; an empty list is a
        normal answer for a node with no future out-edges.
        """
        nbr, times = self.temporal_suffix(v, t)
        return list(zip(nbr.tolist(), times.tolist()))

    def temporal_suffix(self, v: NodeId, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Array view behind temporal_neighbors; shared by the walkers."""
        i = self.suffix_start(v, t)
        return self._out_nbr[v][i:], self._out_t[v][i:]

    def suffix_start(self, v: NodeId, t: float) -> int:
        """Index of the first out-edge of v strictly later than t."""
        return int(np.searchsorted(self._out_t[v], t, side="right"))

    def out_adjacency(self, v: NodeId) -> tuple[np.ndarray, np.ndarray]:
        """Full time-ascending out-adjacency of v as (neighbors, times)."""
        return self._out_nbr[v], self._out_t[v]

    def pair_set(self) -> frozenset:
        """Unordered endpoint pairs of every edge; built once, then cached."""
        if self._pair_set is None:
            pairs = set()
            for u, v in zip(self.src.tolist(), self.dst.tolist()):
                pairs.add((u, v) if u <= v else (v, u))
            self._pair_set = frozenset(pairs)
        return self._pair_set

    def edge_window(self, lo: int, hi: int) -> "TemporalGraph":
        """Graph over the same node universe holding edges [lo, hi)."""
        return TemporalGraph(
            self.num_nodes, self.src[lo:hi], self.dst[lo:hi], self.t[lo:hi], self.labels
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, TemporalGraph):
            return NotImplemented
        return (
            self.num_nodes == other.num_nodes
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.t, other.t)
        )

    def __repr__(self) -> str:
        return f"TemporalGraph(nodes={self.num_nodes}, edges={self.num_edges})"


def load_edge_list(path, options: LoadOptions = LoadOptions()) -> TemporalGraph:
    """Parse a plain-text edge list into a TemporalGraph.

    Each data line must provide source, destination and timestamp columns
    per ``options``. Lines starting with a comment prefix and blank lines
    are ignored. Raw node labels get dense ids in first-appearance order,
    and timestamps are shifted so the earliest one is 0.
    """
    needed = max(options.src_col, options.dst_col, options.time_col) + 1
    label_to_id: dict[str, int] = {}
    labels: list[str] = []
    src: list[int] = []
    dst: list[int] = []
    ts: list[float] = []

    def node_id(label: str) -> int:
        nid = label_to_id.get(label)
        if nid is None:
            nid = len(labels)
            label_to_id[label] = nid
            labels.append(label)
        return nid

    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith(options.comment):
                continue
            fields = stripped.split(options.delimiter)
            if len(fields) < needed:
                raise EdgeListError(
                    path, line_no, f"expected at least {needed} columns, found {len(fields)}"
                )
            try:
                t = float(fields[options.time_col])
            except ValueError:
                raise EdgeListError(
                    path, line_no, f"timestamp {fields[options.time_col]!r} is not a number"
                ) from None
            if not np.isfinite(t):
                raise EdgeListError(path, line_no, "timestamp is not finite")
            src.append(node_id(fields[options.src_col]))
            dst.append(node_id(fields[options.dst_col]))
            ts.append(t)

    if not src:
        raise DataError(f"{path}: no edges found")
    t_arr = np.array(ts, dtype=np.float64)
    t_arr -= t_arr.min()
    return TemporalGraph(len(labels), np.array(src), np.array(dst), t_arr, labels)


def write_edge_list(g: TemporalGraph, path) -> None:
    """Write the graph back out as "src dst time" lines in stored order."""
    with open(path, "w", encoding="utf-8") as fh:
        for s, d, t in zip(g.src.tolist(), g.dst.tolist(), g.t.tolist()):
            fh.write(f"{g.labels[s]} {g.labels[d]} {t!r}\n")


# -- chronological splitting ----------------------------------------------


@dataclass
class ChronoSplit:
    """Training graph plus labeled test pairs from a time-ordered split."""

    train: TemporalGraph
    test_positives: list[tuple[NodeId, NodeId]]
    test_negatives: list[tuple[NodeId, NodeId]]
    fraction: float
    seed: int = 0

    def save_manifest(self, path) -> None:
        """Persist everything needed to replay the evaluation exactly."""
        payload = {
            "fraction": self.fraction,
            "seed": self.seed,
            "train_edges": self.train.num_edges,
            "test_positives": [list(p) for p in self.test_positives],
            "test_negatives": [list(p) for p in self.test_negatives],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def dedup_pairs(src: np.ndarray, dst: np.ndarray) -> list[tuple[int, int]]:
    """Unordered pair deduplication preserving first-seen order; drops self-pairs."""
    seen = set()
    pairs = []
    for u, v in zip(src.tolist(), dst.tolist()):
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key not in seen:
            seen.add(key)
            pairs.append(key)
    return pairs


def sample_negative_pairs(
    candidates: np.ndarray,
    count: int,
    forbidden,
    rng: np.random.Generator,
    max_attempts_factor: int = 100,
) -> list[tuple[int, int]]:
    """Uniformly sample distinct unordered non-edges among ``candidates``.

    A pair is rejected when it appears in ``forbidden`` (typically every
    edge of the full graph, either direction) or was already drawn. Raises
    SamplingError after ``max_attempts_factor * count`` rejections, which
    bounds the runtime on dense graphs.
    """
    if count == 0:
        return []
    if candidates.size < 2:
        raise SamplingError("need at least two candidate nodes for negative sampling")
    negatives: list[tuple[int, int]] = []
    chosen = set()
    max_attempts = max_attempts_factor * count
    attempts = 0
    while len(negatives) < count:
        if attempts >= max_attempts:
            raise SamplingError(
                f"negative sampling exhausted after {attempts} attempts "
                f"({len(negatives)}/{count} pairs found)"
            )
        attempts += 1
        u, v = candidates[rng.integers(0, candidates.size, size=2)]
        if u == v:
            continue
        key = (int(u), int(v)) if u < v else (int(v), int(u))
        if key in forbidden or key in chosen:
            continue
        chosen.add(key)
        negatives.append(key)
    return negatives


def chronological_split(g: TemporalGraph, fraction: float, seed: int) -> ChronoSplit:
    """Split edges by time: the earliest ``fraction`` trains, the rest tests.

    Test positives are the remaining edges' endpoint pairs, deduplicated
    as unordered pairs and restricted to nodes present in the training
    graph. Negatives are uniform non-edges of the full graph, matched in
    number to the positives.
    """
    if not 0.0 < fraction < 1.0:
        raise ConfigError(f"fraction: must be in (0, 1), got {fraction}")
    if g.num_edges < 2:
        raise DataError("need at least 2 edges to split")
    n_train = int(np.floor(fraction * g.num_edges))
    if n_train == 0:
        raise DataError(f"fraction {fraction} leaves the training graph empty")
    return _finish_split(g, 0, n_train, n_train, fraction, seed)


def windowed_split(
    g: TemporalGraph, train_fraction: float, seed: int, test_fraction: float = 0.25
) -> ChronoSplit:
    """Split with a fixed late test window and a training window that grows
    backward in time from the test boundary.

    Used by the training-rate sweep: the test set is always the final
    ``test_fraction`` of edges, while ``train_fraction`` of all edges,
    taken in reverse chronological order from the boundary, train.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ConfigError(f"test_fraction: must be in (0, 1), got {test_fraction}")
    if train_fraction <= 0.0:
        raise ConfigError(f"train_fraction: must be positive, got {train_fraction}")
    if train_fraction > 1.0 - test_fraction + 1e-12:
        raise ConfigError(
            f"train_fraction: {train_fraction} overlaps the fixed "
            f"{test_fraction:.0%} test window (max {1.0 - test_fraction})"
        )
    boundary = int(np.floor((1.0 - test_fraction) * g.num_edges))
    n_train = int(np.floor(train_fraction * g.num_edges))
    lo = max(0, boundary - n_train)
    if lo == boundary:
        raise DataError(f"train_fraction {train_fraction} leaves the training graph empty")
    return _finish_split(g, lo, boundary, boundary, train_fraction, seed)


def _finish_split(
    g: TemporalGraph, train_lo: int, train_hi: int, test_lo: int, fraction: float, seed: int
) -> ChronoSplit:
    train = g.edge_window(train_lo, train_hi)
    positives = dedup_pairs(g.src[test_lo:], g.dst[test_lo:])
    active = train.static_degree()
    positives = [(u, v) for u, v in positives if active[u] > 0 and active[v] > 0]
    if not positives:
        raise DataError("no test positives survive the training-node restriction")
    rng = np.random.default_rng(seed)
    negatives = sample_negative_pairs(
        train.active_nodes(), len(positives), g.pair_set(), rng
    )
    return ChronoSplit(train, positives, negatives, fraction, seed)
