"""Training loops for the neural scorers.

Two variants share the tower MLP:

* frozen-embedding scorer: inputs come from the trained factorization and
  only the MLP parameters move (mini-batch Adam, lr 0.001 by default);
* embedding-table baseline: the user/attribute/config tables are learned
  end-to-end together with the MLP.

Negatives are re-sampled every epoch from each (user, dataset) candidate
space minus the user's relevant set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..corpus import Corpus, enumerate_candidate_visualizations
from ..errors import NumericsError, ValidationError
from ..factorization import EmbeddingSet, score_visualization
from .mlp import MlpParams, backward, bce_sum, build_input, forward, init_mlp


@dataclass
class NeuralConfig:
    lr: float = 0.001
    n_layers: int = 3
    widths: list | None = None
    activation: str = "relu"
    epochs: int = 20
    batch_size: int = 256
    neg_per_pos: int = 5
    s_max: int = 3
    seed: int = 0
    alpha: float = 0.5
    max_attrs: int = 3
    strict_tower: bool = True


class Adam:
    """Standard Adam (beta1 0.9, beta2 0.999, eps 1e-8) over a list of arrays."""

    def __init__(self, shapes, lr: float):
        self.lr = lr
        self.beta1 = 0.9
        self.beta2 = 0.999
        self.eps = 1e-8
        self.t = 0
        self.m = [np.zeros(s) for s in shapes]
        self.v = [np.zeros(s) for s in shapes]

    def step(self, params: list, grads: list) -> None:
        self.t += 1
        b1c = 1.0 - self.beta1 ** self.t
        b2c = 1.0 - self.beta2 ** self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.lr * (m / b1c) / (np.sqrt(v / b2c) + self.eps)


@dataclass
class TrainingPool:
    """Per-(user, dataset) positives and the candidate space for negatives."""

    positives: list            # (user, dataset_id, binding, config_id)
    negatives_by_pair: dict    # (user, dataset_id) -> list[(binding, config_id)]

    @classmethod
    def from_corpus(cls, corpus: Corpus, max_attrs: int) -> "TrainingPool":
        positives = [(v.user_id, v.dataset_id, v.binding, v.config_id)
                     for v in corpus.visualizations]
        relevant: dict = {}
        for u, ds, binding, cfg in positives:
            relevant.setdefault((u, ds), set()).add((binding, cfg))
        pools: dict = {}
        per_dataset: dict = {}
        for (u, ds), rel in relevant.items():
            if ds not in per_dataset:
                per_dataset[ds] = list(enumerate_candidate_visualizations(
                    corpus.dataset_by_id(ds), corpus.config_registry, max_attrs))
            pools[(u, ds)] = [cand for cand in per_dataset[ds] if cand not in rel]
        return cls(positives=positives, negatives_by_pair=pools)

    def sample_epoch(self, rng: np.random.Generator, neg_per_pos: int):
        """(user, binding, config_id, label) examples with fresh negatives."""
        examples = []
        for u, ds, binding, cfg in self.positives:
            examples.append((u, binding, cfg, 1.0))
            pool = self.negatives_by_pair[(u, ds)]
            if not pool:
                continue
            picks = rng.integers(0, len(pool), size=neg_per_pos)
            for p in picks:
                nb, nc = pool[int(p)]
                examples.append((u, nb, nc, 0.0))
        return examples


def _epoch_matrix(emb: EmbeddingSet, examples, s_max: int):
    x = np.stack([build_input(emb, u, binding, cfg, s_max)
                  for u, binding, cfg, _ in examples])
    y = np.array([lab for _, _, _, lab in examples])
    return x, y


def train_neural(emb: EmbeddingSet, corpus: Corpus,
                 cfg: NeuralConfig) -> tuple[MlpParams, list[float]]:
    """Fit the frozen-embedding MLP; returns (params, per-epoch loss trace)."""
    input_dim = (2 + cfg.s_max) * emb.rank
    params = init_mlp(input_dim, emb.rank, cfg.n_layers, cfg.activation,
                      cfg.widths, cfg.seed, cfg.strict_tower)
    if cfg.epochs == 0:
        return params, []
    pool = TrainingPool.from_corpus(corpus, cfg.max_attrs)
    rng = np.random.default_rng(cfg.seed)
    flat = params.weights + params.biases + [params.out_weights]
    opt = Adam([p.shape for p in flat], cfg.lr)
    losses = []
    for epoch in range(cfg.epochs):
        examples = pool.sample_epoch(rng, cfg.neg_per_pos)
        x, y = _epoch_matrix(emb, examples, cfg.s_max)
        order = rng.permutation(len(examples))
        total = 0.0
        for lo in range(0, len(order), cfg.batch_size):
            sel = order[lo:lo + cfg.batch_size]
            xb, yb = x[sel], y[sel]
            (dw, db, dh), _ = backward(params, xb, yb)
            opt.step(flat, dw + db + [dh])
            total += bce_sum(forward(params, xb), yb)
        if not np.isfinite(total):
            raise NumericsError(f"neural training diverged at epoch {epoch}")
        losses.append(total / len(examples))
    return params, losses


@dataclass
class MlpBaseline:
    """End-to-end MLP with its own learned embedding tables."""

    params: MlpParams
    users: np.ndarray
    attrs: np.ndarray
    configs: np.ndarray
    s_max: int
    losses: list = field(default_factory=list, repr=False)

    def _input(self, user: int, binding, config_id: int) -> np.ndarray:
        proxy = EmbeddingSet(self.users, self.attrs, self.configs, None,
                             self.users.shape[1])
        return build_input(proxy, user, binding, config_id, self.s_max)

    def score(self, user: int, binding, config_id: int) -> float:
        return forward(self.params, self._input(user, binding, config_id))


def train_mlp_baseline(corpus: Corpus, rank: int, cfg: NeuralConfig) -> MlpBaseline:
    n, m, h = corpus.n_users, corpus.n_attributes, corpus.n_configs
    rng = np.random.default_rng(cfg.seed)
    tables = [rng.uniform(-0.05, 0.05, size=(rows, rank)) for rows in (n, m, h)]
    model = MlpBaseline(
        params=init_mlp((2 + cfg.s_max) * rank, rank, cfg.n_layers, cfg.activation,
                        cfg.widths, cfg.seed, cfg.strict_tower),
        users=tables[0], attrs=tables[1], configs=tables[2], s_max=cfg.s_max)
    if cfg.epochs == 0:
        return model
    pool = TrainingPool.from_corpus(corpus, cfg.max_attrs)
    params = model.params
    flat = params.weights + params.biases + [params.out_weights] + tables
    opt = Adam([p.shape for p in flat], cfg.lr)
    d = rank
    proxy = EmbeddingSet(model.users, model.attrs, model.configs, None, rank)
    for epoch in range(cfg.epochs):
        examples = pool.sample_epoch(rng, cfg.neg_per_pos)
        order = rng.permutation(len(examples))
        total = 0.0
        count = 0
        for lo in range(0, len(order), cfg.batch_size):
            sel = order[lo:lo + cfg.batch_size]
            batch = [examples[int(i)] for i in sel]
            x = np.stack([build_input(proxy, u, b, c, cfg.s_max)
                          for u, b, c, _ in batch])
            y = np.array([lab for _, _, _, lab in batch])
            (dw, db, dh), dx = backward(params, x, y)
            grads = [np.zeros_like(t) for t in tables]
            for row, (u, binding, c, _) in enumerate(batch):
                grads[0][u] += dx[row, :d]
                grads[2][c] += dx[row, d:2 * d]
                for slot, a in enumerate(dict.fromkeys(binding)):
                    grads[1][a] += dx[row, (2 + slot) * d:(3 + slot) * d]
            opt.step(flat, dw + db + [dh] + grads)
            total += bce_sum(forward(params, x), y)
            count += len(batch)
        if not np.isfinite(total):
            raise NumericsError(f"mlp baseline diverged at epoch {epoch}")
        model.losses.append(total / count)
    return model


def score_neural(emb: EmbeddingSet, params: MlpParams, user: int,
                 binding, config_id: int, s_max: int = 3) -> float:
    return forward(params, build_input(emb, user, binding, config_id, s_max))


def score_neural_cmf(emb: EmbeddingSet, params: MlpParams, alpha: float,
                     user: int, binding, config_id: int, s_max: int = 3) -> float:
    """(1 - alpha) * raw factorization score + alpha * MLP probability."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError("alpha must lie in (0, 1)")
    cmf = score_visualization(emb, user, binding, config_id)
    dnn = score_neural(emb, params, user, binding, config_id, s_max)
    return (1.0 - alpha) * cmf + alpha * dnn
