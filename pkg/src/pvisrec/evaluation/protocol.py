"""Leave-one-out split and negative sampling.

Eligibility: a user qualifies if some dataset carries at least two distinct
relevant visualizations. One eligible dataset is drawn per user, one
positive held out for testing (plus one for validation when a third
exists); every event matching a held-out identity is excluded from the
training side. Negatives come uniformly without replacement from the
held-out dataset's enumerated candidate space minus the user's relevant
set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..corpus import Corpus, enumerate_candidate_visualizations
from ..errors import LeakageError, ValidationError
from ..corpus.types import VisualizationSpec


@dataclass
class HoldOut:
    user: int
    dataset_id: int
    positive: tuple                 # (binding, config_id)
    validation: tuple | None
    train_positives: list           # remaining distinct (binding, config_id)


@dataclass
class EvalSplit:
    entries: list[HoldOut]
    training_visualizations: list[VisualizationSpec]
    seed: int
    by_user: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.by_user = {e.user: e for e in self.entries}

    @property
    def eligible_users(self) -> list[int]:
        return [e.user for e in self.entries]


def _distinct_per_pair(corpus: Corpus) -> dict:
    """(user, dataset) -> distinct (binding, config_id) in first-seen order."""
    out: dict = {}
    for v in corpus.visualizations:
        key = (v.user_id, v.dataset_id)
        bucket = out.setdefault(key, [])
        ident = (v.binding, v.config_id)
        if ident not in bucket:
            bucket.append(ident)
    return out


def make_split(corpus: Corpus, seed: int) -> EvalSplit:
    rng = np.random.default_rng(seed)
    pairs = _distinct_per_pair(corpus)
    users = sorted({u for u, _ in pairs})
    entries = []
    removed: set = set()
    for user in users:
        eligible = sorted(ds for (u, ds), items in pairs.items()
                          if u == user and len(items) >= 2)
        if not eligible:
            continue
        ds = eligible[int(rng.integers(0, len(eligible)))]
        positives = sorted(pairs[(user, ds)], key=lambda p: (p[1], p[0]))
        held = positives[int(rng.integers(0, len(positives)))]
        removed.add((user, ds) + held)
        rest = [p for p in positives if p != held]
        validation = None
        if len(rest) >= 2:
            validation = rest[int(rng.integers(0, len(rest)))]
            removed.add((user, ds) + validation)
            rest = [p for p in rest if p != validation]
        entries.append(HoldOut(user=user, dataset_id=ds, positive=held,
                               validation=validation, train_positives=rest))
    if not entries:
        raise ValidationError("corpus has no evaluation-eligible users "
                              "(need >= 2 distinct positives on one dataset)")
    training = [v for v in corpus.visualizations if v.identity() not in removed]
    return EvalSplit(entries=entries, training_visualizations=training, seed=seed)


def assert_no_leakage(split: EvalSplit, training_corpus: Corpus) -> None:
    """Hard error if any held-out identity survives in the training corpus."""
    train_ids = {v.identity() for v in training_corpus.visualizations}
    for e in split.entries:
        for item, tag in ((e.positive, "test"), (e.validation, "validation")):
            if item is not None and (e.user, e.dataset_id) + item in train_ids:
                raise LeakageError(
                    f"{tag} item of user {e.user} leaked into the training corpus")


def sample_negatives(split: EvalSplit, user: int, corpus: Corpus,
                     rng: np.random.Generator, n_negatives: int = 19,
                     max_attrs: int = 3) -> list:
    """Uniform reservoir sample of non-relevant candidates for the user's
    held-out dataset; never collides with any of the user's positives."""
    entry = split.by_user.get(user)
    if entry is None:
        raise ValidationError(f"user {user} is not part of the split")
    relevant = set(entry.train_positives) | {entry.positive}
    if entry.validation is not None:
        relevant.add(entry.validation)
    dataset = corpus.dataset_by_id(entry.dataset_id)
    reservoir: list = []
    seen = 0
    for cand in enumerate_candidate_visualizations(dataset, corpus.config_registry,
                                                   max_attrs):
        if cand in relevant:
            continue
        seen += 1
        if len(reservoir) < n_negatives:
            reservoir.append(cand)
        else:
            j = int(rng.integers(0, seen))
            if j < n_negatives:
                reservoir[j] = cand
    if seen < n_negatives:
        raise ValidationError(
            f"candidate space of dataset {entry.dataset_id} has only {seen} "
            f"non-relevant members (< {n_negatives}); increase max_attrs")
    return reservoir
