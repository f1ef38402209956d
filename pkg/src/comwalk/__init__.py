"""comwalk: temporal link prediction from spatiotemporal walk corpora.

The pipeline: chronological split -> transport-biased temporal walks plus
Metropolis-Hastings spatial walks -> skip-gram node embeddings -> binary
edge operators -> a small classifier, evaluated with AUC/AP against
common-neighbor and Jaccard baselines.
"""

from .distributions import EmpiricalDistribution, neighbor_degree_distribution, wasserstein_1d
from .edge_model import (
    Classifier,
    ClassifierConfig,
    EDGE_OPS,
    edge_embed,
    edge_features,
    predict_scores,
    train_classifier,
)
from .embedding import (
    EmbeddingMatrix,
    SGConfig,
    SpatioTemporalSequence,
    build_corpus,
    train_skipgram,
)
from .errors import ComwalkError, ConfigError, DataError, NumericError, SamplingError
from .experiment import (
    ExperimentReport,
    METHODS,
    edge_frequency_histogram,
    edge_op_comparison,
    run_benchmark,
    training_rate_sweep,
)
from .graph import (
    ChronoSplit,
    LoadOptions,
    TemporalEdge,
    TemporalGraph,
    chronological_split,
    load_edge_list,
    windowed_split,
    write_edge_list,
)
from .metrics import auc, average_precision, cn_score, jc_score
from .spatial_walks import SpatialWalk, acceptance_ratio, mh_step, mh_walk
from .temporal_walks import (
    TemporalWalk,
    WalkConfig,
    generate_temporal_corpus,
    temporal_walk,
)

__version__ = "0.1.0"
