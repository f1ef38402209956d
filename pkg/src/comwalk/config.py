"""Run configuration: a flat key = value text file, env and CLI overrides.

Precedence is CLI flag > environment variable > config file > default.
Every key is validated with a field-qualified message; unknown keys are
rejected. Defaults follow the reference experimental setup: walk length
80, window 10, 10 walks per node, dimension 128, spatial length 8,
training fraction 0.75.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .edge_model import ClassifierConfig, EDGE_OPS
from .embedding import SGConfig
from .errors import ConfigError
from .experiment import METHODS, SWEEP_FRACTIONS
from .graph import LoadOptions
from .temporal_walks import WalkConfig

ENV_OUTPUT_DIR = "COMWALK_OUTPUT_DIR"
ENV_WORKERS = "COMWALK_WORKERS"

_DELIMITERS = {"whitespace": None, "comma": ","}


@dataclass
class RunConfig:
    """Everything one experiment needs, with the documented defaults."""

    # data
    dataset: str = ""            # path to an edge list
    dataset_name: str = ""       # or a registry name (mutually exclusive)
    data_dir: str = "data"
    delimiter: str = "whitespace"
    src_col: int = 0
    dst_col: int = 1
    time_col: int = 2
    seconds_per_unit: float = 1.0

    # experiment
    fraction: float = 0.75
    fractions: tuple[float, ...] = SWEEP_FRACTIONS
    methods: tuple[str, ...] = ("com", "cn", "jc")
    edge_op: str = "concatenation"
    repetitions: int = 10
    seed: int = 0

    # walks
    walk_length: int = 80
    context_window: int = 10
    walks_per_node: int = 10
    spatial_length: int = 8

    # embedding
    dim: int = 128
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4

    # classifier
    classifier_hidden: int = 64
    classifier_epochs: int = 100
    classifier_lr: float = 0.01
    classifier_batch: int = 64

    # execution and output
    workers: int = 0             # 0 = machine parallelism, 1 = deterministic
    output_dir: str = "out"
    figures: bool = True
    bins: int = 50
    dump_walks: bool = False
    save_embeddings: bool = False
    save_model: bool = False

    # -- construction --------------------------------------------------------

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        cfg = cls()
        cfg.apply(parse_config_file(path))
        return cfg

    def apply(self, values: dict[str, str]) -> None:
        """Apply raw string values with per-field coercion."""
        coercers = _coercers()
        for key, raw in values.items():
            if key not in coercers:
                raise ConfigError(f"{key}: unknown configuration key")
            try:
                setattr(self, key, coercers[key](raw))
            except ConfigError:
                raise
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"{key}: {exc}") from None

    def apply_env(self, env=os.environ) -> None:
        if ENV_OUTPUT_DIR in env:
            self.output_dir = env[ENV_OUTPUT_DIR]
        if ENV_WORKERS in env:
            self.apply({"workers": env[ENV_WORKERS]})

    # -- validation ----------------------------------------------------------

    def validate(self, require_dataset: bool = True) -> None:
        if require_dataset:
            if bool(self.dataset) == bool(self.dataset_name):
                raise ConfigError("dataset: set exactly one of dataset or dataset_name")
        if not 0.0 < self.fraction < 1.0:
            raise ConfigError(f"fraction: must be in (0, 1), got {self.fraction}")
        for f in self.fractions:
            if not 0.0 < f < 1.0:
                raise ConfigError(f"fractions: every value must be in (0, 1), got {f}")
        if not self.methods:
            raise ConfigError("methods: need at least one method")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"methods: unknown method {m!r}, expected one of {METHODS}")
        if self.edge_op not in EDGE_OPS:
            raise ConfigError(f"edge_op: unknown operator {self.edge_op!r}, expected one of {EDGE_OPS}")
        if self.delimiter not in _DELIMITERS:
            raise ConfigError(f"delimiter: must be whitespace or comma, got {self.delimiter!r}")
        for key in ("src_col", "dst_col", "time_col"):
            if getattr(self, key) < 0:
                raise ConfigError(f"{key}: must be >= 0")
        if self.repetitions < 1:
            raise ConfigError(f"repetitions: must be >= 1, got {self.repetitions}")
        if self.workers < 0:
            raise ConfigError(f"workers: must be >= 0, got {self.workers}")
        if self.bins < 1:
            raise ConfigError(f"bins: must be >= 1, got {self.bins}")
        if self.seconds_per_unit <= 0:
            raise ConfigError(f"seconds_per_unit: must be positive, got {self.seconds_per_unit}")
        # sub-config invariants surface here with their own field names
        self.walk_config()
        self.sg_config()
        self.classifier_config()

    # -- derived views -------------------------------------------------------

    def load_options(self) -> LoadOptions:
        return LoadOptions(
            delimiter=_DELIMITERS[self.delimiter],
            src_col=self.src_col,
            dst_col=self.dst_col,
            time_col=self.time_col,
        )

    def walk_config(self) -> WalkConfig:
        return WalkConfig(
            max_walk_length=self.walk_length,
            context_window=self.context_window,
            walks_per_node=self.walks_per_node,
            spatial_length=self.spatial_length,
            seed=self.seed,
        )

    def sg_config(self) -> SGConfig:
        return SGConfig(
            dim=self.dim,
            window=self.context_window,
            negatives=self.negatives,
            epochs=self.epochs,
            learning_rate=self.learning_rate,
            min_learning_rate=self.min_learning_rate,
            seed=self.seed,
            workers=self.effective_workers(),
        )

    def classifier_config(self) -> ClassifierConfig:
        return ClassifierConfig(
            hidden=self.classifier_hidden,
            epochs=self.classifier_epochs,
            learning_rate=self.classifier_lr,
            batch_size=self.classifier_batch,
            seed=self.seed,
        )

    def effective_workers(self) -> int:
        if self.workers == 0:
            return max(os.cpu_count() or 1, 1)
        return self.workers

    def deterministic(self) -> bool:
        return self.effective_workers() == 1


def parse_config_file(path) -> dict[str, str]:
    """Read "key = value" lines; '#' starts a comment, blanks are skipped."""
    path = Path(path)
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{line_no}: expected key = value, got {stripped!r}")
            key, _, raw = stripped.partition("=")
            values[key.strip()] = raw.strip()
    return values


def _parse_bool(raw: str) -> bool:
    low = raw.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {raw!r}")


def _parse_floats(raw: str) -> tuple[float, ...]:
    return tuple(float(x) for x in raw.split(",") if x.strip())


def _parse_names(raw: str) -> tuple[str, ...]:
    return tuple(x.strip().lower() for x in raw.split(",") if x.strip())


def _coercers() -> dict:
    out = {}
    for f in fields(RunConfig):
        if f.name == "fractions":
            out[f.name] = _parse_floats
        elif f.name == "methods":
            out[f.name] = _parse_names
        elif f.type == "bool":
            out[f.name] = _parse_bool
        elif f.type == "int":
            out[f.name] = int
        elif f.type == "float":
            out[f.name] = float
        else:
            out[f.name] = str
    return out
