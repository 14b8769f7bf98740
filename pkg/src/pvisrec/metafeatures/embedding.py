"""Low-rank meta-embedding of the meta-feature matrix (truncated SVD)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import RankDeficiencyError
from .features import MetaFeatureMatrix

_SIGMA_TOL = 1e-12


@dataclass
class MetaEmbedding:
    """Rank-r factorization M ~ basis @ diag(singular_values) @ coords.T.

    ``basis`` (K x r) and ``coords`` (m x r) have orthonormal columns;
    singular values are non-increasing.
    """

    basis: np.ndarray
    singular_values: np.ndarray
    coords: np.ndarray
    rank: int

    def reduced_matrix(self) -> np.ndarray:
        """r x m compressed stand-in for M: basis.T @ M == diag(s) @ coords.T."""
        return self.singular_values[:, None] * self.coords.T

    def reconstruction(self) -> np.ndarray:
        return self.basis @ self.reduced_matrix()


def fit_meta_embedding(mfm: MetaFeatureMatrix, rank: int) -> MetaEmbedding:
    """Squared-loss optimal rank-r approximation via full SVD truncation."""
    mat = mfm.matrix
    upper = min(mat.shape)
    if not 1 <= rank <= upper:
        raise ValueError(f"rank must be in [1, {upper}], got {rank}")
    u, s, vt = np.linalg.svd(mat, full_matrices=False)
    return MetaEmbedding(basis=np.ascontiguousarray(u[:, :rank]),
                         singular_values=s[:rank].copy(),
                         coords=np.ascontiguousarray(vt[:rank].T),
                         rank=rank)


def embed_new_attribute(emb: MetaEmbedding, vector: np.ndarray) -> np.ndarray:
    """Map a K-dim meta-feature vector into the rank-r embedding space."""
    if np.any(emb.singular_values <= _SIGMA_TOL):
        raise RankDeficiencyError(
            f"meta-embedding has singular values <= {_SIGMA_TOL}; reduce the rank")
    return (emb.basis.T @ vector) / emb.singular_values


def reconstruction_error(mfm: MetaFeatureMatrix, emb: MetaEmbedding) -> float:
    return float(np.linalg.norm(mfm.matrix - emb.reconstruction()))
