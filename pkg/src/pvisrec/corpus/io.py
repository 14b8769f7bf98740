"""Corpus assembly, JSON (de)serialization, validation, and summary stats.

File schema (one JSON document)::

    {"datasets": [{"id": 0, "columns": [{"name": "price", "values": [1.5, null, ...]}]}],
     "visualizations": [{"user": 0, "dataset": 0, "attrs": [0, 1],
                         "channels": {"mark": "scatter", "x": 0, "y": 1},
                         "feedback": "generated"}]}

Global attribute ids are assigned densely in file order (datasets in order,
columns in order); the ``attrs`` lists and data-channel bindings reference
those ids. Missing cells are JSON ``null``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from ..errors import CorpusParseError, ValidationError
from .abstraction import abstract_channels, binding_of, register_configuration
from .inference import infer_attribute_type
from .types import (DATA_CHANNELS, AttributeColumn, Corpus, Dataset,
                    VisualizationSpec)


def assemble_corpus(datasets: list[Dataset],
                    visualizations: list[VisualizationSpec]) -> Corpus:
    """Validate, infer attribute types, and register every configuration."""
    seen_ids = set()
    for d in datasets:
        if d.dataset_id in seen_ids:
            raise ValidationError(f"duplicate dataset id {d.dataset_id}")
        seen_ids.add(d.dataset_id)
        for col in d.columns:
            col.inferred_type = infer_attribute_type(col)

    corpus = Corpus(datasets=datasets, visualizations=[], config_registry=[])
    attr_types = corpus.attribute_types()
    dataset_attrs = {d.dataset_id: set(d.attribute_ids) for d in datasets}
    index: dict[str, int] = {}
    for k, vis in enumerate(visualizations):
        where = f"visualization #{k} (user {vis.user_id})"
        if vis.dataset_id not in dataset_attrs:
            raise ValidationError(f"{where}: unknown dataset {vis.dataset_id}")
        owned = dataset_attrs[vis.dataset_id]
        for a in vis.attribute_ids:
            if a not in owned:
                raise ValidationError(
                    f"{where}: attribute {a} does not belong to dataset {vis.dataset_id}")
        bound = {vis.design_choices[ch] for ch in DATA_CHANNELS
                 if ch in vis.design_choices}
        if bound != set(vis.attribute_ids):
            raise ValidationError(
                f"{where}: channel bindings {sorted(bound)} must match attrs "
                f"{sorted(set(vis.attribute_ids))}")
        mapping = abstract_channels(vis, attr_types)
        vis.config_id = register_configuration(corpus.config_registry, index, mapping)
        vis.binding = binding_of(vis)
        corpus.visualizations.append(vis)
    return corpus


def _clean_cell(cell):
    if isinstance(cell, float) and math.isnan(cell):
        return None
    return cell


def load_corpus(path) -> Corpus:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CorpusParseError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    except OSError as exc:
        raise CorpusParseError(f"{path}: {exc}") from exc

    if not isinstance(doc, dict) or "datasets" not in doc:
        raise CorpusParseError(f"{path}: expected an object with a 'datasets' key")

    datasets = []
    next_attr = 0
    try:
        for raw_ds in doc["datasets"]:
            cols = []
            for raw_col in raw_ds["columns"]:
                cols.append(AttributeColumn(
                    attribute_id=next_attr,
                    dataset_id=int(raw_ds["id"]),
                    name=str(raw_col["name"]),
                    values=list(raw_col["values"])))
                next_attr += 1
            datasets.append(Dataset(dataset_id=int(raw_ds["id"]), columns=cols))
        visualizations = []
        for raw_vis in doc.get("visualizations", []):
            visualizations.append(VisualizationSpec(
                user_id=int(raw_vis["user"]),
                dataset_id=int(raw_vis["dataset"]),
                attribute_ids=[int(a) for a in raw_vis["attrs"]],
                design_choices=dict(raw_vis.get("channels", {})),
                feedback_kind=raw_vis.get("feedback", "generated")))
    except (KeyError, TypeError) as exc:
        raise CorpusParseError(f"{path}: record missing field {exc}") from exc

    return assemble_corpus(datasets, visualizations)


def save_corpus(corpus: Corpus, path) -> None:
    doc = {
        "datasets": [
            {"id": d.dataset_id,
             "columns": [{"name": c.name, "values": [_clean_cell(v) for v in c.values]}
                         for c in d.columns]}
            for d in corpus.datasets
        ],
        "visualizations": [
            {"user": v.user_id, "dataset": v.dataset_id, "attrs": list(v.attribute_ids),
             "channels": dict(v.design_choices), "feedback": v.feedback_kind}
            for v in corpus.visualizations
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)


def corpus_stats(corpus: Corpus) -> dict:
    """Counts and per-user means used by the `corpus stats` command."""
    n = corpus.n_users
    per_user_ds: dict[int, set] = {}
    per_user_vis: dict[int, int] = {}
    for v in corpus.visualizations:
        per_user_ds.setdefault(v.user_id, set()).add(v.dataset_id)
        per_user_vis[v.user_id] = per_user_vis.get(v.user_id, 0) + 1
    ds_sizes = {d.dataset_id: len(d.columns) for d in corpus.datasets}
    attrs_per_user = [sum(ds_sizes[ds] for ds in dss) for dss in per_user_ds.values()]

    def _mean(xs):
        return sum(xs) / len(xs) if xs else 0.0

    return {
        "users": n,
        "datasets": len(corpus.datasets),
        "attributes": corpus.n_attributes,
        "visualizations": corpus.n_visualizations,
        "configurations": corpus.n_configs,
        "mean_attrs_per_dataset": _mean(list(ds_sizes.values())),
        "mean_attrs_per_user": _mean(attrs_per_user),
        "mean_vis_per_user": _mean(list(per_user_vis.values())),
        "mean_datasets_per_user": _mean([len(s) for s in per_user_ds.values()]),
    }
