"""Uniform slate-scorer interface over every model in the comparison."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..baselines import (EalsModel, FrequencyTables, VisConfigKnn, VisKnn,
                         global_centroid_score, vispop_score)
from ..factorization import EmbeddingSet, score_candidates
from ..neural import MlpBaseline, MlpParams, score_neural

MODEL_NAMES = ("pvisrec", "pvisrec-acm", "pvisrec-acd", "neural", "neural-cmf",
               "vispop", "visknn", "visconfigknn", "eals", "mlp", "global",
               "random", "oracle")


@dataclass
class CmfScorer:
    emb: EmbeddingSet

    def score_slate(self, user: int, candidates) -> np.ndarray:
        return score_candidates(self.emb, user, candidates)


@dataclass
class CentroidScorer:
    emb: EmbeddingSet

    def score_slate(self, user: int, candidates) -> np.ndarray:
        return np.array([global_centroid_score(self.emb, b, c) for b, c in candidates])


@dataclass
class VisPopScorer:
    tables: FrequencyTables

    def score_slate(self, user: int, candidates) -> np.ndarray:
        return np.array([vispop_score(self.tables, b, c) for b, c in candidates])


@dataclass
class KnnScorer:
    model: VisKnn

    def score_slate(self, user: int, candidates) -> np.ndarray:
        return np.array([self.model.score(user, b, c) for b, c in candidates])


@dataclass
class ConfigKnnScorer:
    model: VisConfigKnn

    def score_slate(self, user: int, candidates) -> np.ndarray:
        return np.array([self.model.score(user, b, c) for b, c in candidates])


@dataclass
class EalsScorer:
    model: EalsModel

    def score_slate(self, user: int, candidates) -> np.ndarray:
        return np.array([self.model.score(user, b, c) for b, c in candidates])


@dataclass
class NeuralScorer:
    emb: EmbeddingSet
    params: MlpParams
    s_max: int = 3

    def score_slate(self, user: int, candidates) -> np.ndarray:
        return np.array([score_neural(self.emb, self.params, user, b, c, self.s_max)
                         for b, c in candidates])


@dataclass
class NeuralCmfScorer:
    """alpha-blend of the raw factorization score and the MLP probability.

    ``slate_minmax`` optionally rescales the factorization term to [0, 1]
    within each slate before blending (off by default: the literal blend).
    """

    emb: EmbeddingSet
    params: MlpParams
    alpha: float = 0.5
    s_max: int = 3
    slate_minmax: bool = False

    def score_slate(self, user: int, candidates) -> np.ndarray:
        cmf = score_candidates(self.emb, user, candidates)
        dnn = np.array([score_neural(self.emb, self.params, user, b, c, self.s_max)
                        for b, c in candidates])
        if self.slate_minmax:
            span = cmf.max() - cmf.min()
            cmf = (cmf - cmf.min()) / span if span > 0 else np.zeros_like(cmf)
        return (1.0 - self.alpha) * cmf + self.alpha * dnn


@dataclass
class MlpBaselineScorer:
    model: MlpBaseline

    def score_slate(self, user: int, candidates) -> np.ndarray:
        return np.array([self.model.score(user, b, c) for b, c in candidates])


@dataclass
class RandomScorer:
    seed: int

    def score_slate(self, user: int, candidates) -> np.ndarray:
        rng = np.random.default_rng([self.seed, 0x5eed, user])
        return rng.random(len(candidates))


@dataclass
class OracleScorer:
    """Knows the held-out positive; upper bound for harness sanity checks."""

    positives: dict  # user -> (binding, config_id)

    def score_slate(self, user: int, candidates) -> np.ndarray:
        target = self.positives[user]
        return np.array([1.0 if cand == target else 0.0 for cand in candidates])
