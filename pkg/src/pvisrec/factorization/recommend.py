"""Scoring and ranking with a trained embedding set.

A visualization (attribute subset + configuration t) scores for user i as

    (u_i . z_t) * prod over its attributes j of (u_i . v_j)

with no clamping; ranking sorts descending with the deterministic
tie-break (config id, attribute ids).
"""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .als import EmbeddingSet


def score_visualization(emb: EmbeddingSet, user: int, attr_ids, config_id: int) -> float:
    attrs = tuple(dict.fromkeys(attr_ids))
    if not attrs:
        raise ValidationError("cannot score a visualization without attributes")
    u = emb.users[user]
    score = float(u @ emb.configs[config_id])
    for a in attrs:
        score *= float(u @ emb.attrs[a])
    return score


def score_candidates(emb: EmbeddingSet, user: int, candidates) -> np.ndarray:
    """Scores for a slate of (binding, config_id) pairs."""
    u = emb.users[user]
    attr_scores = emb.attrs @ u
    config_scores = emb.configs @ u
    out = np.empty(len(candidates))
    for i, (binding, config_id) in enumerate(candidates):
        s = config_scores[config_id]
        for a in dict.fromkeys(binding):
            s = s * attr_scores[a]
        out[i] = s
    return out


def _top_k(scores: np.ndarray, k: int) -> list[tuple[int, float]]:
    order = np.lexsort((np.arange(scores.shape[0]), -scores))
    return [(int(i), float(scores[i])) for i in order[:k]]


def recommend_attributes(emb: EmbeddingSet, user: int, k: int) -> list[tuple[int, float]]:
    """Top-k attributes by u_i . v_j, ties broken by ascending attribute id."""
    if k < 1:
        raise ValidationError("k must be >= 1")
    return _top_k(emb.attrs @ emb.users[user], k)


def recommend_configs(emb: EmbeddingSet, user: int, k: int) -> list[tuple[int, float]]:
    """Top-k configurations by u_i . z_t, ties broken by ascending config id."""
    if k < 1:
        raise ValidationError("k must be >= 1")
    return _top_k(emb.configs @ emb.users[user], k)


def order_candidates(scores: np.ndarray, candidates) -> list[int]:
    """Indices sorted by descending score, then (config id, attribute ids)."""
    return sorted(range(len(candidates)),
                  key=lambda i: (-scores[i], candidates[i][1], candidates[i][0]))


def rank_visualizations(emb: EmbeddingSet, user: int, candidates) -> list[tuple[tuple, int]]:
    if not candidates:
        raise ValidationError("cannot rank an empty candidate list")
    scores = score_candidates(emb, user, candidates)
    return [candidates[i] for i in order_candidates(scores, candidates)]
