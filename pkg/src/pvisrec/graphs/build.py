"""Interaction graphs: user-attribute, user-configuration, attribute-configuration.

Entries are feedback multiplicities (every feedback kind weighs 1.0 by
default); ``binarize`` collapses them to indicators for ablations.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..corpus import Corpus, distinct_attrs
from .sparse import SparseMatrix


@dataclass
class InteractionGraphs:
    user_attr: SparseMatrix     # n x m
    user_config: SparseMatrix   # n x h
    attr_config: SparseMatrix   # m x h

    @property
    def n_users(self) -> int:
        return self.user_attr.n_rows

    @property
    def n_attributes(self) -> int:
        return self.user_attr.n_cols

    @property
    def n_configs(self) -> int:
        return self.user_config.n_cols


def _weight(vis, weights) -> float:
    if weights is None:
        return 1.0
    return float(weights.get(vis.feedback_kind, 1.0))


def _shape(corpus: Corpus) -> tuple[int, int, int]:
    return corpus.n_users, corpus.n_attributes, corpus.n_configs


def build_user_attribute(corpus: Corpus, weights=None, binarize=False) -> SparseMatrix:
    n, m, _ = _shape(corpus)
    rows, cols, vals = [], [], []
    for vis in corpus.visualizations:
        w = _weight(vis, weights)
        for a in distinct_attrs(tuple(vis.attribute_ids)):
            rows.append(vis.user_id)
            cols.append(a)
            vals.append(w)
    mat = SparseMatrix.from_entries(n, m, rows, cols, vals)
    return mat.binarized() if binarize else mat


def build_user_config(corpus: Corpus, weights=None, binarize=False) -> SparseMatrix:
    n, _, h = _shape(corpus)
    rows = [v.user_id for v in corpus.visualizations]
    cols = [v.config_id for v in corpus.visualizations]
    vals = [_weight(v, weights) for v in corpus.visualizations]
    mat = SparseMatrix.from_entries(n, h, rows, cols, vals)
    return mat.binarized() if binarize else mat


def build_attribute_config(corpus: Corpus, weights=None, binarize=False) -> SparseMatrix:
    _, m, h = _shape(corpus)
    rows, cols, vals = [], [], []
    for vis in corpus.visualizations:
        w = _weight(vis, weights)
        for a in distinct_attrs(tuple(vis.attribute_ids)):
            rows.append(a)
            cols.append(vis.config_id)
            vals.append(w)
    mat = SparseMatrix.from_entries(m, h, rows, cols, vals)
    return mat.binarized() if binarize else mat


def build_graphs(corpus: Corpus, weights=None, binarize=False) -> InteractionGraphs:
    return InteractionGraphs(
        user_attr=build_user_attribute(corpus, weights, binarize),
        user_config=build_user_config(corpus, weights, binarize),
        attr_config=build_attribute_config(corpus, weights, binarize))


def graph_stats(graphs: InteractionGraphs) -> dict:
    return {
        "users": graphs.n_users,
        "attributes": graphs.n_attributes,
        "configurations": graphs.n_configs,
        "feedback_events": graphs.user_config.total(),
        "density_user_attr": graphs.user_attr.density(),
        "density_user_config": graphs.user_config.density(),
        "density_attr_config": graphs.attr_config.density(),
    }
