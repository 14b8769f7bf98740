"""Popularity-weighted implicit-feedback factorization baseline.

Two independent weighted factorizations (user x attribute and user x
configuration): observed cells carry weight 1 with their count as target,
unobserved cells weight w_j = c0 * popularity_j / sum(popularity) with
target 0. A visualization scores by the same product rule as the coupled
model, using these factors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import NumericsError, ValidationError
from ..graphs import InteractionGraphs, SparseMatrix


@dataclass
class EalsConfig:
    rank: int = 10
    ridge: float = 1e-2
    iters: int = 20
    seed: int = 0
    c0: float = 512.0

    def __post_init__(self):
        if self.rank < 1:
            raise ValidationError("rank must be >= 1")


def negative_weights(mat: SparseMatrix, c0: float) -> np.ndarray:
    pop = mat.col_sums()
    total = float(pop.sum())
    if total <= 0:
        return np.zeros(mat.n_cols)
    return c0 * pop / total


def weighted_objective(mat: SparseMatrix, users: np.ndarray, items: np.ndarray,
                       neg_w: np.ndarray, ridge: float) -> float:
    """Dense evaluation of the weighted loss (meant for small instances)."""
    dense = mat.to_dense()
    pred = users @ items.T
    weights = np.tile(neg_w, (mat.n_rows, 1))
    weights[dense > 0] = 1.0
    loss = float(np.sum(weights * (dense - pred) ** 2))
    return loss + ridge * (float(np.sum(users ** 2)) + float(np.sum(items ** 2)))


def _factorize(mat: SparseMatrix, cfg: EalsConfig, rng: np.random.Generator):
    neg_w = negative_weights(mat, cfg.c0)
    users = rng.uniform(-0.01, 0.01, size=(mat.n_rows, cfg.rank))
    items = rng.uniform(-0.01, 0.01, size=(mat.n_cols, cfg.rank))
    csr = mat._csr()
    csc = mat._csc_arrays()
    try:
        for _ in range(cfg.iters):
            gram_neg = (items * neg_w[:, None]).T @ items
            users = kernels.weighted_rows_solve(
                csr[0], csr[1], csr[2], items, gram_neg, neg_w, cfg.ridge)
            gram_users = users.T @ users
            items = kernels.scaled_rows_solve(
                csc[0], csc[1], csc[2], users, gram_users, neg_w, cfg.ridge)
    except np.linalg.LinAlgError as exc:
        raise NumericsError("singular solve in weighted factorization") from exc
    if not (np.all(np.isfinite(users)) and np.all(np.isfinite(items))):
        raise NumericsError("weighted factorization produced non-finite factors")
    return users, items, neg_w


@dataclass
class EalsModel:
    attr_users: np.ndarray
    attr_items: np.ndarray
    config_users: np.ndarray
    config_items: np.ndarray

    def score(self, user: int, binding, config_id: int) -> float:
        s = float(self.config_users[user] @ self.config_items[config_id])
        for a in dict.fromkeys(binding):
            s *= float(self.attr_users[user] @ self.attr_items[a])
        return s


def eals_fit(graphs: InteractionGraphs, cfg: EalsConfig) -> EalsModel:
    rng = np.random.default_rng(cfg.seed)
    au, ai, _ = _factorize(graphs.user_attr, cfg, rng)
    cu, ci, _ = _factorize(graphs.user_config, cfg, rng)
    return EalsModel(attr_users=au, attr_items=ai, config_users=cu, config_items=ci)
