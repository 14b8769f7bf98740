"""Synthetic corpora with a planted low-rank preference structure.

Users, attributes, and design configurations each get a latent vector of
dimension ``planted_rank`` concentrated on one of ``planted_rank`` clusters;
a user's relevant visualizations are the top-scoring candidates under the
multiplicative score (user . config) * prod_attrs (user . attr), perturbed
by log-normal noise. Attribute *data* is drawn from a per-cluster
distribution family so meta-features carry the same cluster signal, and
each cluster owns several configurations (arities 1..3, distinct marks and
aggregates) so the configuration space is wide enough for the co-occurrence
graph to stay sparse.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..errors import ValidationError
from .abstraction import distinct_attrs
from .io import assemble_corpus
from .types import AttributeColumn, Corpus, Dataset, VisualizationSpec

_MARKS = ("bar", "line", "scatter", "area", "point", "tick", "circle", "square")
_AGGS = ("sum", "mean", "count", "min", "max", "median")

# (arity, use x-aggregate, use y-aggregate) patterns owned by each cluster
_PATTERNS = ((1, True, False), (1, False, False),
             (2, False, False), (2, True, False), (2, False, True), (2, True, True),
             (3, False, False), (3, False, True))


def _column_values(rng: np.random.Generator, family: int, n: int) -> list:
    if family == 0:
        vals = rng.normal(rng.uniform(-5, 5), rng.uniform(0.5, 3.0), size=n)
    elif family == 1:
        lo = rng.uniform(-10, 0)
        vals = rng.uniform(lo, lo + rng.uniform(1, 20), size=n)
    elif family == 2:
        vals = rng.exponential(rng.uniform(0.5, 4.0), size=n) + rng.uniform(-1, 1)
    elif family == 3:
        vals = rng.lognormal(rng.uniform(0, 1.5), rng.uniform(0.3, 1.0), size=n)
    else:
        centers = rng.uniform(-8, 8, size=2)
        pick = rng.integers(0, 2, size=n)
        vals = rng.normal(centers[pick], 0.7)
    return [float(x) for x in vals]


def _cluster_vector(rng: np.random.Generator, rank: int, cluster: int,
                    lo: float, hi: float, spread: float = 0.15) -> np.ndarray:
    """Nonnegative latent leaning toward one cluster axis; ``spread`` > 0
    mixes in the other axes so the planted structure is low-rank but not
    block-separable."""
    vec = spread * rng.random(rank)
    vec[cluster] += rng.uniform(lo, hi)
    return vec


def _config_pool(rank: int) -> list[dict]:
    pool = []
    for g in range(rank):
        for j, (arity, x_agg, y_agg) in enumerate(_PATTERNS):
            cfg = {"mark": _MARKS[(3 * g + j) % len(_MARKS)],
                   "arity": arity, "cluster": g}
            if x_agg:
                cfg["x-aggregate"] = _AGGS[(g + j) % len(_AGGS)]
            if y_agg:
                cfg["y-aggregate"] = _AGGS[(g + 2 * j) % len(_AGGS)]
            pool.append(cfg)
    keys = {(c["mark"], c.get("x-aggregate"), c.get("y-aggregate"), c["arity"])
            for c in pool}
    if len(keys) != len(pool):
        raise ValidationError(f"planted_rank={rank} produces colliding configurations")
    return pool


def _local_candidates(pool: list[dict], n_cols: int, max_arity: int = 3):
    """(config index array, local column index array padded with -1)."""
    cfg_idx: list[int] = []
    slots: list[tuple] = []
    cols = range(n_cols)
    for p, cfg in enumerate(pool):
        arity = cfg["arity"]
        if arity > max_arity or arity > n_cols:
            continue
        for combo in itertools.permutations(cols, arity):
            cfg_idx.append(p)
            slots.append(combo + (-1,) * (3 - arity))
    return np.array(cfg_idx, dtype=np.int64), np.array(slots, dtype=np.int64)


def generate_synthetic_corpus(seed: int, n_users: int = 50, n_datasets: int = 12,
                              cols_per_dataset: int = 8, planted_rank: int = 3,
                              datasets_per_user: int = 3, max_positives: int = 4,
                              noise: float = 0.25, spread: float = 0.35,
                              family_alignment: float = 0.7) -> Corpus:
    """Deterministic corpus generator; every user ends up evaluation-eligible
    (>= 2 relevant visualizations on at least one dataset).

    ``family_alignment`` is the probability that an attribute's data
    distribution family matches its preference cluster; below 1.0 the
    meta-feature channel is a noisy witness of the planted structure while
    the co-occurrence graphs stay exact.
    """
    if min(n_users, n_datasets, cols_per_dataset, planted_rank) < 1:
        raise ValidationError("all synthetic corpus counts must be >= 1")
    if cols_per_dataset < 3:
        raise ValidationError("need >= 3 columns per dataset for the candidate space")
    rng = np.random.default_rng(seed)
    rank = planted_rank

    pool = _config_pool(rank)
    cfg_latent = np.stack([_cluster_vector(rng, rank, c["cluster"], 0.6, 1.4, spread)
                           for c in pool])

    datasets = []
    attr_latent = np.zeros((n_datasets * cols_per_dataset, rank))
    for ds in range(n_datasets):
        cols = []
        for c in range(cols_per_dataset):
            cluster = c % rank
            attr_id = ds * cols_per_dataset + c
            attr_latent[attr_id] = _cluster_vector(rng, rank, cluster, 0.6, 1.4, spread)
            family = cluster % 5
            if rng.random() > family_alignment:
                family = int(rng.integers(0, 5))
            n_vals = int(rng.integers(64, 129))
            cols.append(AttributeColumn(
                attribute_id=attr_id, dataset_id=ds, name=f"col_{ds}_{c}",
                values=_column_values(rng, family, n_vals)))
        datasets.append(Dataset(dataset_id=ds, columns=cols))

    cand_cfg, cand_slots = _local_candidates(pool, cols_per_dataset)
    slot_mask = cand_slots >= 0
    safe_slots = np.where(slot_mask, cand_slots, 0)

    visualizations = []
    n_take = min(datasets_per_user, n_datasets)
    for user in range(n_users):
        u = _cluster_vector(rng, rank, user % rank, 0.75, 1.25, spread)
        cfg_dots = cfg_latent @ u
        ds_ids = rng.choice(n_datasets, size=n_take, replace=False)
        for slot, ds in enumerate(int(x) for x in ds_ids):
            base = ds * cols_per_dataset
            attr_dots = attr_latent[base:base + cols_per_dataset] @ u
            factors = np.where(slot_mask, attr_dots[safe_slots], 1.0)
            scores = cfg_dots[cand_cfg] * factors.prod(axis=1)
            scores = scores * np.exp(noise * rng.standard_normal(scores.shape[0]))
            lo = 2 if slot == 0 else 1
            n_pos = int(rng.integers(lo, max(max_positives, lo) + 1))
            top = np.argsort(-scores, kind="mergesort")[:n_pos]
            for i in top:
                cfg = pool[int(cand_cfg[i])]
                binding = tuple(base + int(c) for c in cand_slots[i] if c >= 0)
                channels = {"mark": cfg["mark"], "x": binding[0]}
                if len(binding) > 1:
                    channels["y"] = binding[1]
                if len(binding) > 2:
                    channels["color"] = binding[2]
                for agg in ("x-aggregate", "y-aggregate"):
                    if agg in cfg:
                        channels[agg] = cfg[agg]
                visualizations.append(VisualizationSpec(
                    user_id=user, dataset_id=ds,
                    attribute_ids=list(distinct_attrs(binding)),
                    design_choices=channels))

    return assemble_corpus(datasets, visualizations)
