"""Heuristic link scores and ranking metrics.

Common-neighbor counts and Jaccard ratios operate on the undirected
static projection of a training graph. AUC is the rank-based
Mann-Whitney estimator (ties count one half); average precision is the
step sum over a score-descending ranking with stable tie order.
"""

from __future__ import annotations

import numpy as np

from .graph import NodeId, TemporalGraph


def cn_score(g_train: TemporalGraph, u: NodeId, v: NodeId) -> int:
    """Number of common static neighbors of u and v."""
    return int(
        np.intersect1d(g_train.static_neighbors(u), g_train.static_neighbors(v), assume_unique=True).size
    )


def jc_score(g_train: TemporalGraph, u: NodeId, v: NodeId) -> float:
    """Common neighbors normalized by the neighborhood union; 0 when the
    union is empty (both endpoints isolated in the training projection)."""
    inter = cn_score(g_train, u, v)
    union = g_train.static_degree(u) + g_train.static_degree(v) - inter
    if union == 0:
        return 0.0
    return inter / union


def _validate(labels, scores) -> tuple[np.ndarray, np.ndarray]:
    labels = np.asarray(labels, dtype=np.int64).ravel()
    scores = np.asarray(scores, dtype=np.float64).ravel()
    if labels.size != scores.size or labels.size == 0:
        raise ValueError("labels and scores must be equal-length and non-empty")
    if not np.isin(labels, (0, 1)).all():
        raise ValueError("labels must be 0 or 1")
    return labels, scores


def auc(labels, scores) -> float:
    """Probability that a random positive outscores a random negative,
    ties counting one half; computed from average ranks."""
    labels, scores = _validate(labels, scores)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("auc needs at least one example of each class")
    ranks = _average_ranks(scores)
    return float((ranks[labels == 1].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def _average_ranks(scores: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(scores.size)
    sorted_scores = scores[order]
    i = 0
    while i < scores.size:
        j = i
        while j + 1 < scores.size and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def average_precision(labels, scores) -> float:
    """Area under the precision-recall curve as the step sum
    sum_k (R_k - R_{k-1}) P_k over the score-descending ranking.

    Equal scores keep their input order in the ranking, which makes the
    value order-sensitive for tie-heavy scores; pair with score_ties()
    when reporting.
    """
    labels, scores = _validate(labels, scores)
    n_pos = int(labels.sum())
    if n_pos == 0:
        raise ValueError("average precision needs at least one positive")
    order = np.argsort(-scores, kind="stable")
    hits = labels[order] == 1
    cum_tp = np.cumsum(hits)
    ranks = np.arange(1, labels.size + 1)
    return float((cum_tp[hits] / ranks[hits]).sum() / n_pos)


def score_ties(scores) -> bool:
    """True when any score value occurs more than once."""
    scores = np.asarray(scores, dtype=np.float64).ravel()
    return bool(np.unique(scores).size < scores.size)
