"""Node information distributions and the 1-D transport distance between them.

A node's distribution at time t is the empirical distribution of its
neighbors' static degrees, restricted to time-valid neighbors (temporal
mode) or taken over all static neighbors (static mode). Distances between
two such distributions are order-1 transport costs with |x - y| ground
cost, computed exactly from the CDF difference.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .graph import NodeId, TemporalGraph

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Discrete distribution: strictly ascending values, positive weights
    summing to 1. Equal samples are merged at construction."""

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        w = np.asarray(self.weights, dtype=np.float64)
        if v.ndim != 1 or v.shape != w.shape or v.size == 0:
            raise ValueError("values and weights must be equal-length 1-D and non-empty")
        if np.any(np.diff(v) <= 0):
            raise ValueError("values must be strictly ascending (merge duplicates first)")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_samples(cls, samples, weights=None) -> "EmpiricalDistribution":
        """Build from raw samples, merging duplicates and normalizing weights."""
        samples = np.asarray(samples, dtype=np.float64)
        if weights is None:
            weights = np.full(samples.shape, 1.0 / samples.size)
        else:
            weights = np.asarray(weights, dtype=np.float64)
            weights = weights / weights.sum()
        values, inverse = np.unique(samples, return_inverse=True)
        merged = np.zeros(values.size)
        np.add.at(merged, inverse, weights)
        return cls(values, merged)

    @classmethod
    def point_mass(cls, value: float) -> "EmpiricalDistribution":
        return cls(np.array([float(value)]), np.array([1.0]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmpiricalDistribution):
            return NotImplemented
        return np.array_equal(self.values, other.values) and np.array_equal(
            self.weights, other.weights
        )


def neighbor_degree_distribution(
    g: TemporalGraph,
    u: NodeId,
    t: float = 0.0,
    mode: Literal["temporal", "static"] = "temporal",
) -> EmpiricalDistribution:
    """Distribution of static degrees over u's neighborhood.

    Temporal mode weights each time-valid neighbor occurrence equally
    (repeat interactions count with multiplicity); static mode uses the
    undirected neighbor set. A node whose neighborhood is empty falls
    back to a point mass at its own degree, so every node comparison is
    defined.
    """
    if mode == "temporal":
        nbr, _ = g.temporal_suffix(u, t)
        if nbr.size == 0:
            return EmpiricalDistribution.point_mass(g.static_degree(u))
        return EmpiricalDistribution.from_samples(g.static_degree()[nbr])
    if mode == "static":
        nbr = g.static_neighbors(u)
        if nbr.size == 0:
            return EmpiricalDistribution.point_mass(g.static_degree(u))
        return EmpiricalDistribution.from_samples(g.static_degree()[nbr])
    raise ValueError(f"unknown mode {mode!r}")


def wasserstein_1d(p: EmpiricalDistribution, q: EmpiricalDistribution) -> float:
    """Order-1 transport distance between two discrete 1-D distributions.

    Exact closed form: the integral of |F_p - F_q| over the merged support
    grid, equivalent to the minimum expected |x - y| over all couplings.
    Symmetric, non-negative, zero iff p equals q.
    """
    grid = np.union1d(p.values, q.values)
    if grid.size == 1:
        return 0.0
    cdf_p = _cdf_at(p, grid[:-1])
    cdf_q = _cdf_at(q, grid[:-1])
    return float(np.sum(np.abs(cdf_p - cdf_q) * np.diff(grid)))


def _cdf_at(d: EmpiricalDistribution, points: np.ndarray) -> np.ndarray:
    cdf = np.concatenate(([0.0], np.cumsum(d.weights)))
    return cdf[np.searchsorted(d.values, points, side="right")]
