"""Matplotlib renderings of the report files, written next to the CSVs.

Everything is rendered headless to PNG. Each function takes the same
report objects the CSV writers consume, so a figure can always be
regenerated from a finished run.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiment import ExperimentReport

DPI = 150


def render_benchmark_figure(reports: list[ExperimentReport], path) -> None:
    """Grouped AUC/AP bars with std whiskers, one group per method."""
    labels = [r.method if not r.edge_op else f"{r.method}\n[{r.edge_op}]" for r in reports]
    x = np.arange(len(reports))
    width = 0.38
    fig, ax = plt.subplots(figsize=(max(4.0, 1.2 * len(reports) + 1.5), 3.2))
    ax.bar(x - width / 2, [r.auc_mean for r in reports], width,
           yerr=[r.auc_std for r in reports], capsize=3, label="AUC")
    ax.bar(x + width / 2, [r.ap_mean for r in reports], width,
           yerr=[r.ap_std for r in reports], capsize=3, label="AP")
    ax.set_xticks(x, labels, fontsize=8)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("score")
    ax.set_title(reports[0].dataset if reports else "benchmark")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def render_sweep_figure(reports: list[ExperimentReport], path) -> None:
    """AUC against training fraction, one line per method."""
    methods = sorted({(r.method, r.edge_op) for r in reports})
    fig, ax = plt.subplots(figsize=(4.8, 3.2))
    for method, edge_op in methods:
        rows = sorted(
            (r for r in reports if (r.method, r.edge_op) == (method, edge_op)),
            key=lambda r: r.fraction,
        )
        label = method if not edge_op else f"{method} [{edge_op}]"
        ax.errorbar(
            [r.fraction for r in rows],
            [r.auc_mean for r in rows],
            yerr=[r.auc_std for r in rows],
            marker="o", markersize=4, capsize=3, label=label,
        )
    ax.set_xlabel("training fraction")
    ax.set_ylabel("AUC")
    ax.set_title(reports[0].dataset if reports else "sweep")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)


def render_histogram_figure(edges: np.ndarray, counts: np.ndarray, path, title: str = "") -> None:
    """Edge counts per time bin over the normalized timespan."""
    fig, ax = plt.subplots(figsize=(4.8, 3.0))
    widths = np.diff(edges)
    ax.bar(edges[:-1], counts, width=widths, align="edge", edgecolor="white", linewidth=0.4)
    ax.set_xlabel("time")
    ax.set_ylabel("edges per bin")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
