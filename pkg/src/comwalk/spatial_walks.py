"""Spatial walks driven by a Metropolis-Hastings chain targeting the
uniform node distribution.

Proposals are uniform over the undirected static neighbors of the current
node, so the acceptance ratio reduces to min{1, deg(current)/deg(candidate)}.
The walk records accepted moves only; rejected proposals leave the chain
in place and append nothing, so a walk never repeats a node consecutively.
Timestamps are deliberately ignored: the sampling space is every neighbor,
not just the time-valid ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import NodeId, TemporalGraph


@dataclass
class SpatialWalk:
    nodes: list[NodeId] = field(default_factory=list)
    start: NodeId = 0


def acceptance_ratio(deg_current: int, deg_candidate: int) -> float:
    """min{1, deg(current)/deg(candidate)}; degrees must be >= 1."""
    if deg_current < 1 or deg_candidate < 1:
        raise ValueError("acceptance ratio is undefined for isolated nodes")
    return min(1.0, deg_current / deg_candidate)


def mh_step(g: TemporalGraph, current: NodeId, rng: np.random.Generator) -> NodeId:
    """One chain transition: uniform neighbor proposal, then accept test.

    Returns the new state, which equals ``current`` on rejection. Exposed
    separately from mh_walk so the raw chain (stays included) can be
    simulated when checking stationarity.
    """
    neighbors = g.static_neighbors(current)
    w = int(neighbors[rng.integers(0, neighbors.size)])
    if rng.random() < acceptance_ratio(g.static_degree(current), g.static_degree(w)):
        return w
    return current


def mh_walk(
    g: TemporalGraph,
    start: NodeId,
    length: int,
    rng: np.random.Generator,
    max_rejections_factor: int = 50,
) -> SpatialWalk:
    """Run the chain from ``start`` until ``length`` moves are accepted.

    A cap of ``max_rejections_factor * length`` total proposals bounds the
    runtime on degree-skewed graphs; hitting it yields a shorter walk,
    which is still a valid corpus entry.
    """
    if g.static_degree(start) == 0:
        raise ValueError(f"node {start} has no static neighbors")
    walk = SpatialWalk(start=start)
    current = start
    proposals = 0
    budget = max_rejections_factor * length
    while len(walk.nodes) < length and proposals < budget:
        proposals += 1
        neighbors = g.static_neighbors(current)
        w = int(neighbors[rng.integers(0, neighbors.size)])
        if rng.random() < acceptance_ratio(g.static_degree(current), g.static_degree(w)):
            current = w
            walk.nodes.append(current)
    return walk


def transition_matrix(g: TemporalGraph) -> np.ndarray:
    """Exact one-step transition matrix of the chain over all nodes.

    T[x, y] = (1/deg(x)) * min{1, deg(x)/deg(y)} for neighbors y, with the
    rejection mass folded into T[x, x]. Isolated nodes are absorbing.
    Intended for small graphs where detailed balance and the stationary
    distribution can be verified entrywise.
    """
    n = g.num_nodes
    T = np.zeros((n, n))
    for x in range(n):
        neighbors = g.static_neighbors(x)
        if neighbors.size == 0:
            T[x, x] = 1.0
            continue
        dx = g.static_degree(x)
        for y in neighbors.tolist():
            T[x, y] = acceptance_ratio(dx, g.static_degree(y)) / dx
        T[x, x] = 1.0 - T[x].sum()
    return T
