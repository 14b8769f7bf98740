from .metrics import aggregate_ranks, hit_ratio_at_k, ndcg_at_k
from .protocol import (EvalSplit, HoldOut, assert_no_leakage, make_split,
                       sample_negatives)
from .runner import (EvalConfig, MetricsReport, ModelPool, build_slates,
                     run_experiment)
from .scorers import MODEL_NAMES

__all__ = [
    "EvalConfig", "EvalSplit", "HoldOut", "MODEL_NAMES", "MetricsReport",
    "ModelPool", "aggregate_ranks", "assert_no_leakage", "build_slates",
    "hit_ratio_at_k", "make_split", "ndcg_at_k", "run_experiment",
    "sample_negatives",
]
