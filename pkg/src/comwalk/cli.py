"""Command-line entry point: run, sweep, inspect, download.

run/sweep execute the full pipeline from a config file and write the
report CSV, a JSON summary, split manifests and figures into the output
directory. inspect prints dataset statistics and writes the
edge-frequency histogram. download fetches registered public datasets.

All failures exit non-zero with a one-line category: config, io, data or
numeric.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import datasets
from .config import RunConfig
from .edge_model import Classifier, edge_features, train_classifier
from .embedding import build_corpus, train_skipgram
from .errors import ConfigError, DataError, NumericError
from .experiment import (
    edge_frequency_histogram,
    repetition_seeds,
    run_benchmark,
    training_rate_sweep,
    write_histogram_csv,
    write_report_csv,
    write_summary_json,
)
from .figures import render_benchmark_figure, render_histogram_figure, render_sweep_figure
from .graph import (
    TemporalGraph,
    chronological_split,
    dedup_pairs,
    load_edge_list,
    sample_negative_pairs,
)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        return _fail("config", exc)
    except NumericError as exc:
        return _fail("numeric", exc)
    except DataError as exc:
        return _fail("data", exc)
    except OSError as exc:
        return _fail("io", exc)


def _fail(category: str, exc: Exception) -> int:
    print(f"error: {category}: {exc}", file=sys.stderr)
    return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="comwalk",
        description="Temporal link prediction from transport-biased and "
        "Metropolis-Hastings walk corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the pipeline per a config file")
    run.add_argument("config", help="path to a key = value config file")
    _add_overrides(run)
    run.set_defaults(handler=_cmd_run)

    sweep = sub.add_parser("sweep", help="run over the training-fraction grid")
    sweep.add_argument("config", help="path to a key = value config file")
    sweep.add_argument("--fractions", help="comma-separated training fractions")
    _add_overrides(sweep)
    sweep.set_defaults(handler=_cmd_sweep)

    inspect = sub.add_parser("inspect", help="dataset summary and edge-frequency histogram")
    inspect.add_argument("dataset", help="edge-list path or registered dataset name")
    inspect.add_argument("--bins", type=int, default=50)
    inspect.add_argument("--delimiter", choices=("whitespace", "comma"))
    inspect.add_argument("--src-col", type=int)
    inspect.add_argument("--dst-col", type=int)
    inspect.add_argument("--time-col", type=int)
    inspect.add_argument("--seconds-per-unit", type=float)
    inspect.add_argument("--output-dir")
    inspect.add_argument("--data-dir", default="data")
    inspect.set_defaults(handler=_cmd_inspect)

    download = sub.add_parser("download", help="fetch registered public datasets")
    download.add_argument("names", nargs="+", metavar="name",
                          help=f"one of: {', '.join(datasets.dataset_names())}")
    download.add_argument("--data-dir", default="data")
    download.add_argument("--force", action="store_true", help="re-download even if present")
    download.set_defaults(handler=_cmd_download)
    return parser


def _add_overrides(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--dataset", help="edge-list path (overrides the config file)")
    cmd.add_argument("--dataset-name", help="registered dataset name")
    cmd.add_argument("--output-dir")
    cmd.add_argument("--data-dir")
    cmd.add_argument("--workers", type=int)
    cmd.add_argument("--seed", type=int)
    cmd.add_argument("--fraction", type=float)
    cmd.add_argument("--repetitions", type=int)
    cmd.add_argument("--methods", help="comma-separated method list")
    cmd.add_argument("--edge-op")


_OVERRIDE_KEYS = (
    "dataset", "dataset_name", "output_dir", "data_dir", "workers", "seed",
    "fraction", "repetitions", "methods", "edge_op", "fractions",
)


def _load_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config)
    cfg.apply_env()
    overrides = {
        key: str(getattr(args, key))
        for key in _OVERRIDE_KEYS
        if getattr(args, key, None) is not None
    }
    cfg.apply(overrides)
    cfg.validate()
    return cfg


def _load_graph(cfg: RunConfig) -> TemporalGraph:
    if cfg.dataset_name:
        return datasets.load(cfg.dataset_name, cfg.data_dir)
    return load_edge_list(cfg.dataset, cfg.load_options())


def _cmd_run(args) -> int:
    cfg = _load_config(args)
    graph = _load_graph(cfg)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    reports = [
        run_benchmark(
            graph,
            _dataset_label(cfg),
            method,
            fraction=cfg.fraction,
            repetitions=cfg.repetitions,
            master_seed=cfg.seed,
            walk_cfg=cfg.walk_config(),
            sg_cfg=cfg.sg_config(),
            clf_cfg=cfg.classifier_config(),
            edge_op=cfg.edge_op,
        )
        for method in cfg.methods
    ]
    _write_reports(reports, out, cfg)
    _write_split_manifests(graph, cfg, out)
    if cfg.figures:
        render_benchmark_figure(reports, out / "benchmark.png")
    _write_artifacts(graph, cfg, out)
    for rep in reports:
        print(
            f"{rep.dataset} {rep.method}"
            + (f"[{rep.edge_op}]" if rep.edge_op else "")
            + f" fraction={rep.fraction:g} auc={rep.auc_mean:.4f} ap={rep.ap_mean:.4f}"
        )
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args)
    graph = _load_graph(cfg)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    reports = training_rate_sweep(
        graph,
        _dataset_label(cfg),
        fractions=cfg.fractions,
        methods=cfg.methods,
        repetitions=cfg.repetitions,
        master_seed=cfg.seed,
        walk_cfg=cfg.walk_config(),
        sg_cfg=cfg.sg_config(),
        clf_cfg=cfg.classifier_config(),
        edge_op=cfg.edge_op,
    )
    _write_reports(reports, out, cfg)
    if cfg.figures:
        render_sweep_figure(reports, out / "sweep.png")
    for rep in reports:
        print(
            f"{rep.dataset} {rep.method} fraction={rep.fraction:g} "
            f"auc={rep.auc_mean:.4f} ap={rep.ap_mean:.4f}"
        )
    return 0


def _cmd_inspect(args) -> int:
    if args.dataset in datasets.REGISTRY and not Path(args.dataset).exists():
        spec = datasets.REGISTRY[args.dataset]
        graph = datasets.load(args.dataset, args.data_dir)
        seconds_per_unit = args.seconds_per_unit or spec.seconds_per_unit
        label = args.dataset
    else:
        cfg = RunConfig()
        patches = {}
        for key in ("delimiter", "src_col", "dst_col", "time_col", "seconds_per_unit"):
            value = getattr(args, key)
            if value is not None:
                patches[key] = str(value)
        cfg.apply(patches)
        graph = load_edge_list(args.dataset, cfg.load_options())
        seconds_per_unit = cfg.seconds_per_unit
        label = Path(args.dataset).stem

    if args.bins < 1:
        raise ConfigError(f"bins: must be >= 1, got {args.bins}")
    mean_degree = 2.0 * graph.num_edges / graph.num_nodes
    timespan_days = float(graph.t.max()) * seconds_per_unit / 86400.0 if graph.num_edges else 0.0
    print(f"dataset: {label}")
    print(f"nodes: {graph.num_nodes}")
    print(f"edges: {graph.num_edges}")
    print(f"mean degree: {mean_degree:.1f}")
    print(f"timespan days: {timespan_days:.2f}")

    out = Path(args.output_dir) if args.output_dir else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    edges, counts = edge_frequency_histogram(graph, args.bins)
    write_histogram_csv(edges, counts, out / f"{label}_histogram.csv")
    render_histogram_figure(edges, counts, out / f"{label}_histogram.png", title=label)
    print(f"histogram: {out / (label + '_histogram.csv')}")
    return 0


def _cmd_download(args) -> int:
    for name in args.names:
        path = datasets.fetch(name, args.data_dir, force=args.force)
        print(f"{name}: {path}")
    return 0


# -- run helpers --------------------------------------------------------------


def _dataset_label(cfg: RunConfig) -> str:
    return cfg.dataset_name if cfg.dataset_name else Path(cfg.dataset).stem


def _write_reports(reports, out: Path, cfg: RunConfig) -> None:
    include_timing = not cfg.deterministic()
    write_report_csv(reports, out / "report.csv", include_timing=include_timing)
    write_summary_json(reports, out / "summary.json", include_timing=include_timing)


def _write_split_manifests(graph: TemporalGraph, cfg: RunConfig, out: Path) -> None:
    splits_dir = out / "splits"
    splits_dir.mkdir(exist_ok=True)
    for rep, seeds in enumerate(repetition_seeds(cfg.seed, cfg.repetitions)):
        split = chronological_split(graph, cfg.fraction, int(seeds[0]))
        split.save_manifest(splits_dir / f"rep{rep}.json")


def _write_artifacts(graph: TemporalGraph, cfg: RunConfig, out: Path) -> None:
    """Optional single-pass artifacts (corpus dump, embeddings, classifier)
    built with repetition-0 seeds; off by default because they add one
    pipeline pass."""
    if not (cfg.dump_walks or cfg.save_embeddings or cfg.save_model):
        return
    seeds = repetition_seeds(cfg.seed, 1)[0]
    split = chronological_split(graph, cfg.fraction, int(seeds[0]))
    corpus = build_corpus(split.train, replace(cfg.walk_config(), seed=int(seeds[1])))
    if cfg.dump_walks:
        with open(out / "walks.txt", "w", encoding="utf-8") as fh:
            for seq in corpus:
                fh.write(" ".join(str(t) for t in seq.tokens) + "\n")
    if not (cfg.save_embeddings or cfg.save_model):
        return
    matrix = train_skipgram(corpus, replace(cfg.sg_config(), seed=int(seeds[2])), graph.num_nodes)
    if cfg.save_embeddings:
        matrix.save_text(out / "embeddings.txt")
        matrix.save_binary(out / "embeddings.bin")
    if cfg.save_model:
        model = _fit_artifact_classifier(graph, split, matrix, seeds, cfg)
        model.save(out / "classifier.txt")


def _fit_artifact_classifier(graph, split, matrix, seeds, cfg: RunConfig) -> Classifier:
    trained = matrix.token_counts > 0
    vectors = matrix.input_vectors.astype(np.float64)
    pos = [p for p in dedup_pairs(split.train.src, split.train.dst)
           if trained[p[0]] and trained[p[1]]]
    forbidden = set(graph.pair_set())
    forbidden.update(split.test_negatives)
    candidates = np.flatnonzero(trained & (split.train.static_degree() > 0))
    neg = sample_negative_pairs(candidates, len(pos), forbidden,
                                np.random.default_rng(int(seeds[4])))
    X = edge_features(vectors, pos + neg, cfg.edge_op)
    y = np.concatenate([np.ones(len(pos)), np.zeros(len(neg))])
    clf_cfg = replace(cfg.classifier_config(), seed=int(seeds[3]))
    return train_classifier(X, y, clf_cfg)


if __name__ == "__main__":
    sys.exit(main())
