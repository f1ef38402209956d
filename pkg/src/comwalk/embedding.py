"""Spatiotemporal walk corpora and skip-gram training with negative sampling.

One corpus entry per sampled start edge (v, u, t): the target link's
endpoints, then the temporal walk from u, then a spatial walk from u.
Node vectors are trained on these sequences exactly like word vectors:
for every (center, context) pair within the window, ascend
ln sigma(x_center . y_context) plus k negative terms, negatives drawn
proportionally to token frequency ** 0.75.

The training kernel is numba-compiled. Single-worker mode streams pairs
in corpus order and is bit-reproducible; multi-worker mode runs the same
kernel from several threads over shared matrices without locks, accepting
benign lost updates.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigError, NumericError, SamplingError
from .graph import NodeId, TemporalEdge, TemporalGraph
from .spatial_walks import mh_walk
from .temporal_walks import (
    TemporalWalk,
    TransportIndex,
    WalkConfig,
    WASSERSTEIN_BIAS,
    context_window_budget,
    temporal_walk,
    walk_rng,
)

NEGATIVE_TABLE_SIZE = 1_000_000


@dataclass
class SpatioTemporalSequence:
    """Token list [v, u, temporal walk after u..., spatial walk...] for one
    start edge (v, u, t). The duplicate u at the temporal-walk junction is
    merged away."""

    tokens: list[NodeId]
    start_edge: TemporalEdge


@dataclass(frozen=True)
class SGConfig:
    """Skip-gram training knobs; defaults are the usual word2vec choices."""

    dim: int = 128
    window: int = 10
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    table_exponent: float = 0.75
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        for name in ("dim", "window", "negatives", "epochs", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name}: must be >= 1, got {getattr(self, name)}")
        if self.learning_rate <= 0 or self.min_learning_rate <= 0:
            raise ConfigError("learning rates must be positive")
        if self.min_learning_rate >= self.learning_rate:
            raise ConfigError(
                f"min_learning_rate: decay end {self.min_learning_rate} must be "
                f"below start {self.learning_rate}"
            )


@dataclass
class EmbeddingMatrix:
    """Learned node map: input_vectors[v] is the embedding of node v;
    output_vectors hold the context weights. token_counts records corpus
    frequencies, so counts == 0 identifies nodes that kept their random
    initialization and should be dropped downstream."""

    input_vectors: np.ndarray
    output_vectors: np.ndarray
    token_counts: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.input_vectors.shape[1])

    def trained_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.token_counts > 0)

    # -- persistence -------------------------------------------------------

    def save_text(self, path) -> None:
        n, d = self.input_vectors.shape
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{n} {d}\n")
            for i in range(n):
                row = " ".join(f"{x:.9g}" for x in self.input_vectors[i])
                fh.write(f"{i} {row}\n")

    def save_binary(self, path) -> None:
        n, d = self.input_vectors.shape
        with open(path, "wb") as fh:
            fh.write(f"{n} {d}\n".encode("ascii"))
            vecs = np.ascontiguousarray(self.input_vectors, dtype="<f4")
            for i in range(n):
                fh.write(f"{i} ".encode("ascii"))
                fh.write(vecs[i].tobytes())
                fh.write(b"\n")


def load_embedding_text(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        n, d = (int(x) for x in fh.readline().split())
        vecs = np.zeros((n, d), dtype=np.float32)
        for line in fh:
            fields = line.split()
            vecs[int(fields[0])] = [float(x) for x in fields[1:]]
    return vecs


def load_embedding_binary(path) -> np.ndarray:
    with open(path, "rb") as fh:
        n, d = (int(x) for x in fh.readline().split())
        vecs = np.zeros((n, d), dtype=np.float32)
        row_bytes = 4 * d
        for _ in range(n):
            prefix = bytearray()
            while not prefix.endswith(b" "):
                prefix += fh.read(1)
            i = int(prefix[:-1])
            vecs[i] = np.frombuffer(fh.read(row_bytes), dtype="<f4")
            fh.read(1)  # trailing newline
    return vecs


# -- corpus assembly --------------------------------------------------------


def assemble_sequence(
    start: TemporalEdge, walk: TemporalWalk, spatial_nodes: list[NodeId]
) -> SpatioTemporalSequence:
    """[v, u] ++ temporal nodes ++ spatial nodes, merging the duplicate u
    where the prefix meets the temporal walk's head."""
    tokens = [start.src, start.dst]
    tokens.extend(walk.nodes[1:])  # walk.nodes[0] is start.dst again
    tokens.extend(spatial_nodes)
    return SpatioTemporalSequence(tokens, start)


def build_corpus(
    g: TemporalGraph, cfg: WalkConfig, include_spatial: bool = True
) -> list[SpatioTemporalSequence]:
    """Generate the training corpus for a (training) graph.

    Start edges are drawn uniformly until the temporal context-window
    budget is met; every start edge yields one sequence. Each walk owns a
    random stream derived from (seed, walk index), so the corpus is
    reproducible and independent of execution order. include_spatial=False
    drops the Metropolis-Hastings segment (the spatial ablation).
    """
    if g.num_edges == 0:
        raise SamplingError("cannot build a corpus on an empty graph")
    index = TransportIndex(g) if cfg.bias == WASSERSTEIN_BIAS else None
    budget = context_window_budget(cfg, g.num_nodes)
    corpus: list[SpatioTemporalSequence] = []
    covered = 0
    attempts = 0
    max_attempts = 10 * budget
    while covered < budget:
        if attempts >= max_attempts:
            raise SamplingError(
                f"context-window budget unreachable: {covered}/{budget} windows "
                f"after {attempts} walks"
            )
        rng = walk_rng(cfg.seed, attempts)
        start = g.edge(int(rng.integers(0, g.num_edges)))
        walk = temporal_walk(g, start, cfg, rng, index)
        spatial: list[NodeId] = []
        if include_spatial:
            spatial = mh_walk(g, start.dst, cfg.spatial_length, rng).nodes
        corpus.append(assemble_sequence(start, walk, spatial))
        if len(walk.nodes) >= cfg.context_window:
            covered += len(walk.nodes) - cfg.context_window + 1
        attempts += 1
    return corpus


# -- objective reference (used by tests and kept in sync with the kernel) ----


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def pair_loss(x: np.ndarray, y_pos: np.ndarray, y_negs: np.ndarray) -> float:
    """Negative-sampling loss of one (center, context) pair:
    -ln sigma(x.y_pos) - sum_n ln sigma(-x.y_n)."""
    loss = -math.log(_sigmoid(float(x @ y_pos)))
    for y in y_negs:
        loss -= math.log(_sigmoid(-float(x @ y)))
    return loss


def pair_gradients(
    x: np.ndarray, y_pos: np.ndarray, y_negs: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic gradients of pair_loss w.r.t. x, y_pos and each negative.

    d/dx = (sigma(x.y_pos) - 1) y_pos + sum_n sigma(x.y_n) y_n, and the
    matching expressions for the output vectors. The training kernel
    applies exactly these formulas with a learning rate.
    """
    g_pos = _sigmoid(float(x @ y_pos)) - 1.0
    grad_x = g_pos * y_pos
    grad_y_pos = g_pos * x
    grad_y_negs = np.zeros_like(y_negs)
    for n in range(y_negs.shape[0]):
        g_neg = _sigmoid(float(x @ y_negs[n]))
        grad_x = grad_x + g_neg * y_negs[n]
        grad_y_negs[n] = g_neg * x
    return grad_x, grad_y_pos, grad_y_negs


def context_pairs(length: int, window: int) -> list[tuple[int, int]]:
    """All (center, context) index pairs of a sequence: j != i, |i-j| <= window."""
    pairs = []
    for i in range(length):
        for j in range(max(0, i - window), min(length, i + window + 1)):
            if j != i:
                pairs.append((i, j))
    return pairs


def corpus_pair_count(corpus, window: int) -> int:
    total = 0
    for seq in corpus:
        n = len(_tokens(seq))
        for i in range(n):
            total += min(n - 1, i + window) - max(0, i - window)
    return total


def corpus_loss(matrix: EmbeddingMatrix, corpus, cfg: SGConfig, eval_seed: int = 0) -> float:
    """Mean pair loss over the corpus with negatives fixed by eval_seed;
    an evaluation utility for convergence checks, not a training path."""
    table = _negative_table(matrix.token_counts, cfg.table_exponent)
    rng = np.random.default_rng(eval_seed)
    x = matrix.input_vectors.astype(np.float64)
    y = matrix.output_vectors.astype(np.float64)
    total = 0.0
    pairs = 0
    for seq in corpus:
        tokens = _tokens(seq)
        for i, j in context_pairs(len(tokens), cfg.window):
            negs = table[rng.integers(0, table.size, size=cfg.negatives)]
            total += pair_loss(x[tokens[i]], y[tokens[j]], y[negs])
            pairs += 1
    return total / max(pairs, 1)


def _tokens(seq) -> list[int]:
    return seq.tokens if isinstance(seq, SpatioTemporalSequence) else list(seq)


def _negative_table(counts: np.ndarray, exponent: float) -> np.ndarray:
    """word2vec-style unigram table: token i occupies a slice proportional
    to counts[i] ** exponent."""
    weights = counts.astype(np.float64) ** exponent
    weights[counts == 0] = 0.0
    total = weights.sum()
    if total <= 0:
        raise ValueError("corpus has no tokens")
    size = min(NEGATIVE_TABLE_SIZE, max(int(counts.sum()) * 10, 1000))
    bounds = np.floor(np.cumsum(weights) / total * size).astype(np.int64)
    table = np.zeros(size, dtype=np.int32)
    lo = 0
    for tok, hi in enumerate(bounds.tolist()):
        if hi > lo:
            table[lo:hi] = tok
        lo = hi
    if lo < size:
        table[lo:] = np.flatnonzero(counts > 0)[-1]
    return table


# -- numba training kernel ---------------------------------------------------


@njit(cache=True, nogil=True)
def _sg_shard(
    tokens,
    offsets,
    seq_lo,
    seq_hi,
    in_vecs,
    out_vecs,
    table,
    window,
    negatives,
    lr_start,
    lr_end,
    pairs_before,
    total_pairs,
    stride,
    seed,
):
    """Train on sequences [seq_lo, seq_hi); returns pairs processed.

    Per-pair SGD with the pair_gradients update; the learning rate decays
    linearly with global pair progress (each local pair advances progress
    by ``stride``, the worker count). Negative draws come from an inline
    xorshift64* stream so results do not depend on the numba version.
    """
    dim = in_vecs.shape[1]
    state = seed * np.uint64(2862933555777941757) + np.uint64(3037000493)
    if state == np.uint64(0):
        state = np.uint64(88172645463325252)
    done = 0
    grad_x = np.zeros(dim, dtype=np.float32)
    for s in range(seq_lo, seq_hi):
        lo = offsets[s]
        hi = offsets[s + 1]
        n = hi - lo
        for i in range(n):
            center = tokens[lo + i]
            j_lo = i - window
            if j_lo < 0:
                j_lo = 0
            j_hi = i + window + 1
            if j_hi > n:
                j_hi = n
            for j in range(j_lo, j_hi):
                if j == i:
                    continue
                progress = (pairs_before + done * stride) / total_pairs
                lr = lr_start * (1.0 - progress)
                if lr < lr_end:
                    lr = lr_end
                done += 1
                context = tokens[lo + j]
                for d in range(dim):
                    grad_x[d] = 0.0
                for k in range(negatives + 1):
                    if k == 0:
                        target = context
                        label = 1.0
                    else:
                        state ^= state >> np.uint64(12)
                        state ^= state << np.uint64(25)
                        state ^= state >> np.uint64(27)
                        draw = state * np.uint64(2685821657736338717)
                        target = table[draw % np.uint64(table.shape[0])]
                        if target == context:
                            continue
                        label = 0.0
                    f = 0.0
                    for d in range(dim):
                        f += in_vecs[center, d] * out_vecs[target, d]
                    if f > 30.0:
                        sig = 1.0
                    elif f < -30.0:
                        sig = 0.0
                    else:
                        sig = 1.0 / (1.0 + math.exp(-f))
                    g = (label - sig) * lr
                    for d in range(dim):
                        grad_x[d] += g * out_vecs[target, d]
                        out_vecs[target, d] += g * in_vecs[center, d]
                for d in range(dim):
                    in_vecs[center, d] += grad_x[d]
    return done


def train_skipgram(corpus, cfg: SGConfig, num_nodes: int) -> EmbeddingMatrix:
    """Fit node embeddings on a walk corpus.

    workers == 1 streams pairs in corpus order (bit-reproducible for a
    fixed seed); workers > 1 shards sequences across lock-free threads
    sharing the matrices. Raises NumericError if any update produces a
    non-finite value.
    """
    sequences = [_tokens(seq) for seq in corpus]
    if not sequences or all(len(s) == 0 for s in sequences):
        raise ValueError("corpus is empty")
    tokens = np.array([t for seq in sequences for t in seq], dtype=np.int32)
    if tokens.min() < 0 or tokens.max() >= num_nodes:
        raise ValueError(
            f"token {tokens.min() if tokens.min() < 0 else tokens.max()} "
            f"out of range for {num_nodes} nodes"
        )
    offsets = np.zeros(len(sequences) + 1, dtype=np.int64)
    np.cumsum([len(s) for s in sequences], out=offsets[1:])
    counts = np.bincount(tokens, minlength=num_nodes).astype(np.int64)
    table = _negative_table(counts, cfg.table_exponent)

    rng = np.random.default_rng(cfg.seed)
    in_vecs = ((rng.random((num_nodes, cfg.dim)) - 0.5) / cfg.dim).astype(np.float32)
    out_vecs = np.zeros((num_nodes, cfg.dim), dtype=np.float32)

    epoch_pairs = corpus_pair_count(sequences, cfg.window)
    total_pairs = max(epoch_pairs * cfg.epochs, 1)
    shards = _shard_bounds(len(sequences), cfg.workers)
    pairs_done = 0
    for epoch in range(cfg.epochs):
        if cfg.workers == 1:
            pairs_done += _sg_shard(
                tokens, offsets, 0, len(sequences), in_vecs, out_vecs, table,
                cfg.window, cfg.negatives, cfg.learning_rate, cfg.min_learning_rate,
                pairs_done, total_pairs, 1, _kernel_seed(cfg.seed, epoch, 0),
            )
        else:
            threads = []
            for w, (lo, hi) in enumerate(shards):
                args = (
                    tokens, offsets, lo, hi, in_vecs, out_vecs, table,
                    cfg.window, cfg.negatives, cfg.learning_rate, cfg.min_learning_rate,
                    pairs_done, total_pairs, len(shards), _kernel_seed(cfg.seed, epoch, w),
                )
                threads.append(threading.Thread(target=_sg_shard, args=args))
            for th in threads:
                th.start()
            for th in threads:
                th.join()
            pairs_done += epoch_pairs
        if not np.isfinite(in_vecs).all() or not np.isfinite(out_vecs).all():
            raise NumericError(
                f"non-finite embedding values after epoch {epoch + 1} "
                f"(lr={cfg.learning_rate}, dim={cfg.dim})"
            )
    return EmbeddingMatrix(in_vecs, out_vecs, counts)


def _shard_bounds(n_sequences: int, workers: int) -> list[tuple[int, int]]:
    workers = min(workers, max(n_sequences, 1))
    bounds = np.linspace(0, n_sequences, workers + 1).astype(int)
    return [(int(bounds[i]), int(bounds[i + 1])) for i in range(workers)]


def _kernel_seed(seed: int, epoch: int, worker: int) -> np.uint64:
    return np.uint64((seed * 1_000_003 + epoch * 8_191 + worker) % (1 << 64))
