"""Experiment runner: split, train on the training side, rank identical
slates with every requested scorer, aggregate HR@K / NDCG@K."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import accel, __version__
from ..baselines import EalsConfig, FrequencyTables, VisConfigKnn, VisKnn, eals_fit
from ..corpus import Corpus
from ..errors import ValidationError
from ..factorization import TrainConfig, als_fit, order_candidates
from ..graphs import build_graphs
from ..metafeatures import build_meta_feature_matrix, fit_meta_embedding
from ..neural import NeuralConfig, train_mlp_baseline, train_neural
from . import scorers as sc
from .metrics import aggregate_ranks
from .protocol import EvalSplit, assert_no_leakage, make_split, sample_negatives


@dataclass
class EvalConfig:
    k_max: int = 10
    n_negatives: int = 19
    max_attrs: int = 3
    mfe_rank: int | None = None      # None = full meta-feature matrix
    knn_k: int = 10
    binarize: bool = False
    slate_minmax: bool = False
    train: TrainConfig = field(default_factory=TrainConfig)
    neural: NeuralConfig = field(default_factory=NeuralConfig)
    eals: EalsConfig = field(default_factory=EalsConfig)


@dataclass
class MetricsReport:
    models: dict       # name -> {"hr": [...], "ndcg": [...], "ranks": [[user, rank], ...]}
    metadata: dict

    def as_dict(self) -> dict:
        return {"metadata": self.metadata, "models": self.models}


def build_slates(corpus: Corpus, split: EvalSplit, seed: int,
                 n_negatives: int = 19, max_attrs: int = 3) -> dict:
    """user -> candidate list with the held-out positive at index 0."""
    slates = {}
    for entry in split.entries:
        rng = np.random.default_rng([seed, entry.user])
        negatives = sample_negatives(split, entry.user, corpus, rng,
                                     n_negatives, max_attrs)
        slates[entry.user] = [entry.positive] + negatives
    return slates


def _variant_config(base: TrainConfig, variant: str) -> TrainConfig:
    return TrainConfig(rank=base.rank, ridge=base.ridge, max_iters=base.max_iters,
                       tol=base.tol, seed=base.seed, variant=variant)


class ModelPool:
    """Trains each requested model once against the training split.

    Pre-trained pieces (from pipeline artifacts) can be injected through
    ``meta`` / ``embeddings`` / ``neural``; anything missing is trained on
    demand.
    """

    def __init__(self, corpus: Corpus, train_corpus: Corpus, cfg: EvalConfig,
                 split: EvalSplit, seed: int, *, meta=None, embeddings=None,
                 neural=None):
        self.corpus = corpus
        self.train_corpus = train_corpus
        self.cfg = cfg
        self.split = split
        self.seed = seed
        self.graphs = build_graphs(train_corpus, binarize=cfg.binarize)
        self._meta = meta
        self._emb: dict = dict(embeddings or {})
        self._neural = None if neural is None else (neural, [])
        self._cache: dict = {}

    def meta_matrix(self) -> np.ndarray:
        if self._meta is None:
            mfm = build_meta_feature_matrix(self.corpus)
            if self.cfg.mfe_rank is not None:
                emb = fit_meta_embedding(mfm, self.cfg.mfe_rank)
                self._meta = emb.reduced_matrix()
            else:
                self._meta = mfm.matrix
        return self._meta

    def embeddings(self, variant: str):
        if variant not in self._emb:
            meta = None if variant == "acd" else self.meta_matrix()
            self._emb[variant] = als_fit(self.graphs, meta,
                                         _variant_config(self.cfg.train, variant))
        return self._emb[variant]

    def neural_params(self):
        if self._neural is None:
            emb = self.embeddings("full")
            params, losses = train_neural(emb, self.train_corpus, self.cfg.neural)
            self._neural = (params, losses)
        return self._neural[0]

    def scorer(self, name: str):
        if name in self._cache:
            return self._cache[name]
        cfg = self.cfg
        if name == "pvisrec":
            scorer = sc.CmfScorer(self.embeddings("full"))
        elif name == "pvisrec-acm":
            scorer = sc.CmfScorer(self.embeddings("acm"))
        elif name == "pvisrec-acd":
            scorer = sc.CmfScorer(self.embeddings("acd"))
        elif name == "neural":
            scorer = sc.NeuralScorer(self.embeddings("full"), self.neural_params(),
                                     cfg.neural.s_max)
        elif name == "neural-cmf":
            scorer = sc.NeuralCmfScorer(self.embeddings("full"), self.neural_params(),
                                        cfg.neural.alpha, cfg.neural.s_max,
                                        cfg.slate_minmax)
        elif name == "vispop":
            scorer = sc.VisPopScorer(FrequencyTables.from_graphs(self.graphs))
        elif name == "visknn":
            scorer = sc.KnnScorer(VisKnn.fit(self.graphs, cfg.knn_k))
        elif name == "visconfigknn":
            scorer = sc.ConfigKnnScorer(VisConfigKnn.fit(self.graphs, cfg.knn_k))
        elif name == "eals":
            scorer = sc.EalsScorer(eals_fit(self.graphs, cfg.eals))
        elif name == "mlp":
            scorer = sc.MlpBaselineScorer(
                train_mlp_baseline(self.train_corpus, cfg.train.rank, cfg.neural))
        elif name == "global":
            scorer = sc.CentroidScorer(self.embeddings("full"))
        elif name == "random":
            scorer = sc.RandomScorer(self.seed)
        elif name == "oracle":
            scorer = sc.OracleScorer({e.user: e.positive for e in self.split.entries})
        else:
            raise ValidationError(f"unknown model {name!r}; choose from {sc.MODEL_NAMES}")
        self._cache[name] = scorer
        return scorer


def score_models(pool: ModelPool, slates: dict, names, cfg: EvalConfig) -> dict:
    """Rank every slate with every named scorer; identical slates per model."""
    models = {}
    for name in names:
        scorer = pool.scorer(name)
        ranks = []
        per_user = []
        for entry in pool.split.entries:
            candidates = slates[entry.user]
            scores = scorer.score_slate(entry.user, candidates)
            order = order_candidates(scores, candidates)
            rank = order.index(0) + 1
            ranks.append(rank)
            per_user.append([entry.user, rank])
        agg = aggregate_ranks(ranks, cfg.k_max)
        models[name] = {"hr": agg["hr"], "ndcg": agg["ndcg"], "ranks": per_user}
    return models


def report_metadata(cfg: EvalConfig, seed: int, names, n_slates: int,
                    extra: dict | None = None) -> dict:
    metadata = {
        "engine_version": __version__,
        "kernel_path": accel.active_path(),
        "seed": seed,
        "models": list(names),
        "k_max": cfg.k_max,
        "n_slates": n_slates,
        "n_negatives": cfg.n_negatives,
        "rank": cfg.train.rank,
    }
    if extra:
        metadata.update(extra)
    return metadata


def run_experiment(corpus: Corpus, model_names, cfg: EvalConfig, seed: int,
                   pool: ModelPool | None = None) -> MetricsReport:
    """Evaluate every named model on identical per-user slates."""
    names = list(model_names)
    if pool is None:
        split = make_split(corpus, seed)
        train_corpus = corpus.with_visualizations(split.training_visualizations)
        assert_no_leakage(split, train_corpus)
        pool = ModelPool(corpus, train_corpus, cfg, split, seed)
    else:
        split = pool.split
        assert_no_leakage(split, pool.train_corpus)
    slates = build_slates(corpus, split, seed, cfg.n_negatives, cfg.max_attrs)
    models = score_models(pool, slates, names, cfg)
    return MetricsReport(models=models,
                         metadata=report_metadata(cfg, seed, names, len(split.entries)))
