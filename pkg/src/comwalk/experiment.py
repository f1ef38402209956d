"""The experiment battery: benchmarks, sweeps, ablations, reports.

A benchmark run splits a dataset chronologically, scores the test pairs
with one method, and repeats with fresh per-repetition seeds. Walk-based
methods come in three flavors: the full pipeline, uniform time-valid hops
instead of transport-minimizing ones (no-ot), and no spatial segment in
the corpus (no-mh). cn and jc are the heuristic baselines.

Reports are written as one CSV row per repetition plus a JSON summary of
means and standard deviations.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .edge_model import (
    ClassifierConfig,
    DEFAULT_EDGE_OP,
    EDGE_OPS,
    edge_features,
    train_classifier,
)
from .embedding import EmbeddingMatrix, SGConfig, build_corpus, train_skipgram
from .errors import ConfigError, DataError
from .graph import (
    ChronoSplit,
    TemporalGraph,
    dedup_pairs,
    chronological_split,
    sample_negative_pairs,
    windowed_split,
)
from .metrics import auc, average_precision, cn_score, jc_score, score_ties
from .temporal_walks import UNIFORM_BIAS, WASSERSTEIN_BIAS, WalkConfig

METHOD_FULL = "com"
METHOD_NO_OT = "com-wo-ot"
METHOD_NO_MH = "com-wo-mh"
METHODS = (METHOD_FULL, METHOD_NO_OT, METHOD_NO_MH, "cn", "jc")
WALK_METHODS = (METHOD_FULL, METHOD_NO_OT, METHOD_NO_MH)

SWEEP_FRACTIONS = (0.35, 0.45, 0.55, 0.65, 0.75)


@dataclass
class RunResult:
    repetition: int
    auc: float
    ap: float
    seconds: float
    ap_ties: bool


@dataclass
class ExperimentReport:
    dataset: str
    method: str
    edge_op: str
    fraction: float
    runs: list[RunResult]
    config: dict = field(default_factory=dict)

    @property
    def repetitions(self) -> int:
        return len(self.runs)

    @property
    def auc_mean(self) -> float:
        return float(np.mean([r.auc for r in self.runs]))

    @property
    def ap_mean(self) -> float:
        return float(np.mean([r.ap for r in self.runs]))

    @property
    def auc_std(self) -> float:
        vals = [r.auc for r in self.runs]
        return float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0

    @property
    def ap_std(self) -> float:
        vals = [r.ap for r in self.runs]
        return float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0


def repetition_seeds(master_seed: int, repetitions: int) -> list[np.ndarray]:
    """Five independent 32-bit seeds per repetition: split negatives,
    walks, skip-gram, classifier init, classifier negatives."""
    children = np.random.SeedSequence(master_seed).spawn(repetitions)
    return [child.generate_state(5) for child in children]


def _heuristic_scores(train: TemporalGraph, pairs, method: str) -> np.ndarray:
    score = cn_score if method == "cn" else jc_score
    return np.array([score(train, u, v) for u, v in pairs], dtype=np.float64)


def _walk_pipeline_scores(
    full: TemporalGraph,
    split: ChronoSplit,
    method: str,
    seeds: np.ndarray,
    walk_cfg: WalkConfig,
    sg_cfg: SGConfig,
    clf_cfg: ClassifierConfig,
    edge_op: str,
) -> tuple[np.ndarray, np.ndarray, EmbeddingMatrix]:
    """Embed the training graph, fit the classifier, score the test pairs.

    Returns (labels, scores, embedding); test pairs whose endpoints never
    appeared in the corpus are dropped, since their vectors are untrained
    initializations.
    """
    bias = UNIFORM_BIAS if method == METHOD_NO_OT else WASSERSTEIN_BIAS
    wcfg = replace(walk_cfg, seed=int(seeds[1]), bias=bias)
    corpus = build_corpus(split.train, wcfg, include_spatial=method != METHOD_NO_MH)
    matrix = train_skipgram(corpus, replace(sg_cfg, seed=int(seeds[2])), full.num_nodes)
    labels, scores = _classifier_scores(
        full, split, matrix, seeds, replace(clf_cfg, seed=int(seeds[3])), edge_op
    )
    return labels, scores, matrix


def _classifier_scores(
    full: TemporalGraph,
    split: ChronoSplit,
    matrix: EmbeddingMatrix,
    seeds: np.ndarray,
    clf_cfg: ClassifierConfig,
    edge_op: str,
) -> tuple[np.ndarray, np.ndarray]:
    trained = matrix.token_counts > 0
    vectors = matrix.input_vectors.astype(np.float64)

    train_pos = [
        p for p in dedup_pairs(split.train.src, split.train.dst) if trained[p[0]] and trained[p[1]]
    ]
    if not train_pos:
        raise DataError("no training pairs with trained embeddings")
    forbidden = set(full.pair_set())
    forbidden.update(split.test_negatives)
    neg_rng = np.random.default_rng(int(seeds[4]))
    candidates = np.flatnonzero(trained & (split.train.static_degree() > 0))
    train_neg = sample_negative_pairs(candidates, len(train_pos), forbidden, neg_rng)

    X = edge_features(vectors, train_pos + train_neg, edge_op)
    y = np.concatenate([np.ones(len(train_pos)), np.zeros(len(train_neg))])
    model = train_classifier(X, y, clf_cfg)

    test_pairs = [p for p in split.test_positives if trained[p[0]] and trained[p[1]]]
    n_pos = len(test_pairs)
    test_pairs += [p for p in split.test_negatives if trained[p[0]] and trained[p[1]]]
    if n_pos == 0 or n_pos == len(test_pairs):
        raise DataError("test pairs collapsed to a single class after embedding filter")
    labels = np.concatenate([np.ones(n_pos), np.zeros(len(test_pairs) - n_pos)])
    scores = model.predict_scores(edge_features(vectors, test_pairs, edge_op))
    return labels, scores


def _split_for(full: TemporalGraph, fraction: float, seed: int, fixed_test: bool) -> ChronoSplit:
    if fixed_test:
        return windowed_split(full, fraction, seed)
    return chronological_split(full, fraction, seed)


def run_benchmark(
    full: TemporalGraph,
    dataset: str,
    method: str,
    fraction: float = 0.75,
    repetitions: int = 10,
    master_seed: int = 0,
    walk_cfg: WalkConfig = WalkConfig(),
    sg_cfg: SGConfig = SGConfig(),
    clf_cfg: ClassifierConfig = ClassifierConfig(),
    edge_op: str = DEFAULT_EDGE_OP,
    fixed_test: bool = False,
) -> ExperimentReport:
    """Evaluate one method on one dataset.

    Each repetition redraws the test negatives and all stochastic seeds
    while the chronological boundary stays fixed; reported AUC/AP are the
    per-repetition values, aggregated by the report accessors.
    """
    if method not in METHODS:
        raise ConfigError(f"method: unknown method {method!r}, expected one of {METHODS}")
    runs = []
    for rep, seeds in enumerate(repetition_seeds(master_seed, repetitions)):
        started = time.perf_counter()
        split = _split_for(full, fraction, int(seeds[0]), fixed_test)
        if method in WALK_METHODS:
            labels, scores, _ = _walk_pipeline_scores(
                full, split, method, seeds, walk_cfg, sg_cfg, clf_cfg, edge_op
            )
        else:
            pairs = list(split.test_positives) + list(split.test_negatives)
            labels = np.concatenate(
                [np.ones(len(split.test_positives)), np.zeros(len(split.test_negatives))]
            )
            scores = _heuristic_scores(split.train, pairs, method)
        runs.append(
            RunResult(
                repetition=rep,
                auc=auc(labels, scores),
                ap=average_precision(labels, scores),
                seconds=time.perf_counter() - started,
                ap_ties=score_ties(scores),
            )
        )
    return ExperimentReport(
        dataset=dataset,
        method=method,
        edge_op=edge_op if method in WALK_METHODS else "",
        fraction=fraction,
        runs=runs,
        config=_config_snapshot(walk_cfg, sg_cfg, clf_cfg, master_seed),
    )


def edge_op_comparison(
    full: TemporalGraph,
    dataset: str,
    fraction: float = 0.75,
    repetitions: int = 10,
    master_seed: int = 0,
    walk_cfg: WalkConfig = WalkConfig(),
    sg_cfg: SGConfig = SGConfig(),
    clf_cfg: ClassifierConfig = ClassifierConfig(),
    ops=EDGE_OPS,
) -> list[ExperimentReport]:
    """Full-pipeline reports for several edge operators.

    The corpus and embedding are shared across operators within each
    repetition (the operators only change the classifier features), which
    pairs the comparison and saves most of the runtime.
    """
    for op in ops:
        if op not in EDGE_OPS:
            raise ConfigError(f"edge_op: unknown operator {op!r}")
    runs_by_op: dict[str, list[RunResult]] = {op: [] for op in ops}
    for rep, seeds in enumerate(repetition_seeds(master_seed, repetitions)):
        split = _split_for(full, fraction, int(seeds[0]), fixed_test=False)
        wcfg = replace(walk_cfg, seed=int(seeds[1]))
        corpus = build_corpus(split.train, wcfg)
        matrix = train_skipgram(corpus, replace(sg_cfg, seed=int(seeds[2])), full.num_nodes)
        for op in ops:
            started = time.perf_counter()
            labels, scores = _classifier_scores(
                full, split, matrix, seeds, replace(clf_cfg, seed=int(seeds[3])), op
            )
            runs_by_op[op].append(
                RunResult(
                    repetition=rep,
                    auc=auc(labels, scores),
                    ap=average_precision(labels, scores),
                    seconds=time.perf_counter() - started,
                    ap_ties=score_ties(scores),
                )
            )
    snapshot = _config_snapshot(walk_cfg, sg_cfg, clf_cfg, master_seed)
    return [
        ExperimentReport(dataset, METHOD_FULL, op, fraction, runs_by_op[op], snapshot)
        for op in ops
    ]


def training_rate_sweep(
    full: TemporalGraph,
    dataset: str,
    fractions=SWEEP_FRACTIONS,
    methods=(METHOD_FULL, "cn", "jc"),
    repetitions: int = 10,
    master_seed: int = 0,
    walk_cfg: WalkConfig = WalkConfig(),
    sg_cfg: SGConfig = SGConfig(),
    clf_cfg: ClassifierConfig = ClassifierConfig(),
    edge_op: str = DEFAULT_EDGE_OP,
) -> list[ExperimentReport]:
    """One report per (fraction, method) with the last quarter of edges as
    a fixed test window and training windows growing backward in time."""
    if not fractions:
        raise ConfigError("fractions: need at least one value")
    if not methods:
        raise ConfigError("methods: need at least one method")
    reports = []
    for fraction in fractions:
        for method in methods:
            reports.append(
                run_benchmark(
                    full, dataset, method, fraction, repetitions, master_seed,
                    walk_cfg, sg_cfg, clf_cfg, edge_op, fixed_test=True,
                )
            )
    return reports


def edge_frequency_histogram(g: TemporalGraph, bins: int) -> tuple[np.ndarray, np.ndarray]:
    """Edge counts over equal-width time bins spanning the normalized
    timespan; returns (bin_edges, counts)."""
    if bins < 1:
        raise ConfigError(f"bins: must be >= 1, got {bins}")
    if g.num_edges == 0:
        raise DataError("empty graph has no histogram")
    t_max = float(g.t.max())
    if t_max <= 0.0:
        counts = np.zeros(bins, dtype=np.int64)
        counts[0] = g.num_edges
        return np.linspace(0.0, 1.0, bins + 1), counts
    counts, edges = np.histogram(g.t, bins=bins, range=(0.0, t_max))
    return edges, counts.astype(np.int64)


def _config_snapshot(
    walk_cfg: WalkConfig, sg_cfg: SGConfig, clf_cfg: ClassifierConfig, master_seed: int
) -> dict:
    return {
        "walk": asdict(walk_cfg),
        "skipgram": asdict(sg_cfg),
        "classifier": asdict(clf_cfg),
        "master_seed": master_seed,
    }


# -- report output -----------------------------------------------------------

CSV_HEADER = "dataset,method,edge_op,fraction,repetition,auc,ap,ap_ties,wall_time_s"


def write_report_csv(reports: list[ExperimentReport], path, include_timing: bool = True) -> None:
    """One row per repetition. Timing is omitted in deterministic mode so
    identical configurations produce byte-identical files."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for rep in reports:
            for run in rep.runs:
                wall = f"{run.seconds:.3f}" if include_timing else ""
                fh.write(
                    f"{rep.dataset},{rep.method},{rep.edge_op},{rep.fraction:g},"
                    f"{run.repetition},{run.auc:.6f},{run.ap:.6f},"
                    f"{str(run.ap_ties).lower()},{wall}\n"
                )


def write_summary_json(reports: list[ExperimentReport], path, include_timing: bool = True) -> None:
    payload = []
    for rep in reports:
        entry = {
            "dataset": rep.dataset,
            "method": rep.method,
            "edge_op": rep.edge_op,
            "fraction": rep.fraction,
            "repetitions": rep.repetitions,
            "auc_mean": round(rep.auc_mean, 6),
            "auc_std": round(rep.auc_std, 6),
            "ap_mean": round(rep.ap_mean, 6),
            "ap_std": round(rep.ap_std, 6),
            "ap_ties_any": any(r.ap_ties for r in rep.runs),
            "config": rep.config,
        }
        if include_timing:
            entry["total_seconds"] = round(sum(r.seconds for r in rep.runs), 3)
        payload.append(entry)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"reports": payload}, fh, indent=2)
        fh.write("\n")


def write_histogram_csv(edges: np.ndarray, counts: np.ndarray, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("bin_start,bin_end,count\n")
        for i, count in enumerate(counts.tolist()):
            fh.write(f"{edges[i]:.6f},{edges[i + 1]:.6f},{count}\n")
