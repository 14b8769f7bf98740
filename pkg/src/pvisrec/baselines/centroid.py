"""Non-personalized reference: every user replaced by the mean user embedding."""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from ..factorization import EmbeddingSet


def global_user_embedding(emb: EmbeddingSet) -> np.ndarray:
    return emb.users.mean(axis=0)


def global_centroid_score(emb: EmbeddingSet, binding, config_id: int) -> float:
    """Product rule with the centroid user; identical for every user."""
    attrs = tuple(dict.fromkeys(binding))
    if not attrs:
        raise ValidationError("cannot score a visualization without attributes")
    ug = global_user_embedding(emb)
    score = float(ug @ emb.configs[config_id])
    for a in attrs:
        score *= float(ug @ emb.attrs[a])
    return score
