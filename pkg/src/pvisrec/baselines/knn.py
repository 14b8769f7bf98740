"""Item-neighborhood scorers over the interaction graphs.

Neighborhoods are the k columns most cosine-similar to an item (the item
itself included, ties toward lower ids); an item's score for a user is the
similarity-weighted average of the user's row over that neighborhood. The
visualization score averages the configuration term with the mean of the
per-attribute terms; the config-only variant drops the attribute half.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graphs import InteractionGraphs, SparseMatrix


def _column_cosine(mat: SparseMatrix) -> np.ndarray:
    dense = mat.to_dense()
    norms = np.linalg.norm(dense, axis=0)
    safe = np.where(norms > 0, norms, 1.0)
    unit = dense / safe
    return unit.T @ unit


@dataclass
class ItemNeighborhood:
    matrix: np.ndarray        # dense user x item counts
    sim: np.ndarray           # item x item cosine
    neighbors: np.ndarray     # item x k_nn neighbor ids

    @classmethod
    def build(cls, mat: SparseMatrix, k_nn: int) -> "ItemNeighborhood":
        sim = _column_cosine(mat)
        n_items = sim.shape[0]
        k = min(k_nn, n_items)
        ids = np.arange(n_items)
        nbrs = np.empty((n_items, k), dtype=np.int64)
        for j in range(n_items):
            order = np.lexsort((ids, -sim[j]))
            nbrs[j] = order[:k]
        return cls(matrix=mat.to_dense(), sim=sim, neighbors=nbrs)

    def score(self, user: int, item: int) -> float:
        nbrs = self.neighbors[item]
        sims = self.sim[item, nbrs]
        total = float(np.sum(sims))
        if total <= 0:
            return 0.0
        return float(np.dot(sims, self.matrix[user, nbrs])) / total


@dataclass
class VisKnn:
    attr_nbhd: ItemNeighborhood
    config_nbhd: ItemNeighborhood

    @classmethod
    def fit(cls, graphs: InteractionGraphs, k_nn: int = 10) -> "VisKnn":
        return cls(attr_nbhd=ItemNeighborhood.build(graphs.user_attr, k_nn),
                   config_nbhd=ItemNeighborhood.build(graphs.user_config, k_nn))

    def score(self, user: int, binding, config_id: int) -> float:
        config_term = self.config_nbhd.score(user, config_id)
        attrs = tuple(dict.fromkeys(binding))
        attr_term = float(np.mean([self.attr_nbhd.score(user, a) for a in attrs]))
        return 0.5 * (config_term + attr_term)


@dataclass
class VisConfigKnn:
    config_nbhd: ItemNeighborhood

    @classmethod
    def fit(cls, graphs: InteractionGraphs, k_nn: int = 10) -> "VisConfigKnn":
        return cls(config_nbhd=ItemNeighborhood.build(graphs.user_config, k_nn))

    def score(self, user: int, binding, config_id: int) -> float:
        return self.config_nbhd.score(user, config_id)
