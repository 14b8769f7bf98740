"""Visualization -> data-independent configuration, and candidate enumeration."""

from __future__ import annotations

from collections.abc import Iterator

from ..errors import ValidationError
from .types import (DATA_CHANNELS, LITERAL_CHANNELS, NONE_SETTING, Corpus,
                    Dataset, VisualConfiguration, VisualizationSpec)


def abstract_channels(vis: VisualizationSpec, attr_types: dict[int, str]) -> dict:
    """Channel map with every data binding replaced by the attribute's type."""
    out = {}
    for ch in LITERAL_CHANNELS:
        setting = vis.design_choices.get(ch, NONE_SETTING)
        if not isinstance(setting, str):
            raise ValidationError(f"channel {ch!r} must carry a literal setting")
        out[ch] = setting
    for ch in DATA_CHANNELS:
        if ch in vis.design_choices:
            attr = vis.design_choices[ch]
            if attr not in attr_types:
                raise ValidationError(f"channel {ch!r} binds unknown attribute {attr}")
            out[ch] = attr_types[attr]
        else:
            out[ch] = NONE_SETTING
    return out


def binding_of(vis: VisualizationSpec) -> tuple:
    """Bound attribute ids in canonical data-channel order."""
    return tuple(vis.design_choices[ch] for ch in DATA_CHANNELS
                 if ch in vis.design_choices)


def register_configuration(registry: list[VisualConfiguration],
                           index: dict[str, int], mapping: dict) -> int:
    """Deduplicating insert into the configuration registry; returns the id."""
    key = VisualConfiguration.canonical_key(mapping)
    if key in index:
        return index[key]
    config_id = len(registry)
    ordered = tuple((ch, mapping[ch]) for ch in
                    ("mark", "x", "y", "color", "size", "x-aggregate", "y-aggregate"))
    registry.append(VisualConfiguration(config_id=config_id, channel_types=ordered))
    index[key] = config_id
    return config_id


def extract_visual_configuration(vis: VisualizationSpec, corpus: Corpus) -> VisualConfiguration:
    """Abstract a visualization and register the result in the corpus registry."""
    attr_types = corpus.attribute_types()
    mapping = abstract_channels(vis, attr_types)
    index = {cfg.key(): cfg.config_id for cfg in corpus.config_registry}
    config_id = register_configuration(corpus.config_registry, index, mapping)
    return corpus.config_registry[config_id]


def distinct_attrs(binding: tuple) -> tuple:
    """Attribute subset of a binding, first-bound order, duplicates dropped."""
    seen: list = []
    for a in binding:
        if a not in seen:
            seen.append(a)
    return tuple(seen)


def enumerate_candidate_visualizations(
        dataset: Dataset,
        registry: list[VisualConfiguration],
        max_attrs: int = 3) -> Iterator[tuple[tuple, int]]:
    """Lazily yield every (binding, config_id) candidate for a dataset.

    A binding assigns distinct dataset attributes to the configuration's
    bound channels, types matching slot-by-slot; x/y are distinct slots, so
    two same-typed attributes yield both orderings. Each pair appears
    exactly once.
    """
    if max_attrs < 1:
        raise ValidationError("max_attrs must be >= 1")
    by_type: dict[str, list[int]] = {}
    for col in dataset.columns:
        by_type.setdefault(col.inferred_type, []).append(col.attribute_id)
    for ids in by_type.values():
        ids.sort()

    for cfg in registry:
        slots = cfg.bound_types()
        if not (1 <= len(slots) <= max_attrs):
            continue
        yield from _assignments(slots, by_type, cfg.config_id)


def _assignments(slots: tuple, by_type: dict[str, list[int]],
                 config_id: int) -> Iterator[tuple[tuple, int]]:
    chosen: list[int] = []

    def walk(slot: int) -> Iterator[tuple[tuple, int]]:
        if slot == len(slots):
            yield tuple(chosen), config_id
            return
        for attr in by_type.get(slots[slot], ()):
            if attr in chosen:
                continue
            chosen.append(attr)
            yield from walk(slot + 1)
            chosen.pop()

    yield from walk(0)
