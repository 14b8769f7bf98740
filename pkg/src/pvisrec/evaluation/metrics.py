"""Rank metrics for single-relevant-item slates."""

from __future__ import annotations

import math

from ..errors import ValidationError


def hit_ratio_at_k(rank: int, k: int) -> int:
    """1 iff the positive's 1-based rank is within the top k."""
    if rank < 1:
        raise ValidationError("ranks are 1-based")
    return 1 if rank <= k else 0


def ndcg_at_k(rank: int, k: int) -> float:
    """Discounted gain 1/log2(rank+1) inside the top k, else 0; the ideal
    DCG of a single relevant item is 1, so this is already normalized."""
    if rank < 1:
        raise ValidationError("ranks are 1-based")
    if rank > k:
        return 0.0
    return 1.0 / math.log2(rank + 1)


def aggregate_ranks(ranks: list[int], k_max: int) -> dict:
    """Mean HR@K and NDCG@K for K = 1..k_max over per-slate ranks."""
    n = len(ranks)
    hr = [sum(hit_ratio_at_k(r, k) for r in ranks) / n for k in range(1, k_max + 1)]
    ndcg = [sum(ndcg_at_k(r, k) for r in ranks) / n for k in range(1, k_max + 1)]
    return {"hr": hr, "ndcg": ndcg}
