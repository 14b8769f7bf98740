"""Domain types for the user-centric visualization corpus."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import ValidationError

CHANNELS = ("mark", "x", "y", "color", "size", "x-aggregate", "y-aggregate")
DATA_CHANNELS = ("x", "y", "color", "size")
LITERAL_CHANNELS = ("mark", "x-aggregate", "y-aggregate")
ATTRIBUTE_TYPES = ("quantitative", "nominal", "ordinal", "temporal")
FEEDBACK_KINDS = ("generated", "clicked", "liked", "added-to-dashboard")
NONE_SETTING = "none"


@dataclass
class AttributeColumn:
    """One column of a tabular dataset; ids are global across the corpus."""

    attribute_id: int
    dataset_id: int
    name: str
    values: list
    inferred_type: str = ""

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValidationError(
                f"attribute {self.name!r} (dataset {self.dataset_id}) has no values")


@dataclass
class Dataset:
    dataset_id: int
    columns: list[AttributeColumn]

    def __post_init__(self):
        if not self.columns:
            raise ValidationError(f"dataset {self.dataset_id} has no columns")
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise ValidationError(f"dataset {self.dataset_id} has duplicate column names")

    @property
    def attribute_ids(self) -> list[int]:
        return [c.attribute_id for c in self.columns]


@dataclass
class VisualizationSpec:
    """A user's relevant visualization: attribute subset plus design choices.

    ``binding`` and ``config_id`` are derived when the visualization is
    registered against a corpus: binding lists the bound attribute id per
    data channel in canonical channel order.
    """

    user_id: int
    dataset_id: int
    attribute_ids: list[int]
    design_choices: dict
    feedback_kind: str = "generated"
    config_id: int = -1
    binding: tuple = ()

    def __post_init__(self):
        if not self.attribute_ids:
            raise ValidationError("visualization uses no attributes")
        if self.user_id < 0:
            raise ValidationError("user ids must be non-negative")
        if self.feedback_kind not in FEEDBACK_KINDS:
            raise ValidationError(f"unknown feedback kind {self.feedback_kind!r}")
        for ch in self.design_choices:
            if ch not in CHANNELS:
                raise ValidationError(f"unknown channel {ch!r}")

    def identity(self) -> tuple:
        """Hashable identity used for dedup, splits, and leakage checks."""
        return (self.user_id, self.dataset_id, self.binding, self.config_id)


@dataclass(frozen=True)
class VisualConfiguration:
    """Data-independent abstraction: bound channels carry attribute types."""

    config_id: int
    channel_types: tuple  # ((channel, value), ...) in canonical channel order

    @staticmethod
    def canonical_key(mapping: dict) -> str:
        ordered = {ch: mapping.get(ch, NONE_SETTING) for ch in CHANNELS}
        return json.dumps(ordered, separators=(",", ":"))

    def as_dict(self) -> dict:
        return dict(self.channel_types)

    def bound_channels(self) -> tuple:
        d = self.as_dict()
        return tuple(ch for ch in DATA_CHANNELS if d[ch] != NONE_SETTING)

    def bound_types(self) -> tuple:
        d = self.as_dict()
        return tuple(d[ch] for ch in DATA_CHANNELS if d[ch] != NONE_SETTING)

    def key(self) -> str:
        return self.canonical_key(self.as_dict())


@dataclass
class Corpus:
    """Immutable-after-load container for datasets, visualizations, configs."""

    datasets: list[Dataset]
    visualizations: list[VisualizationSpec]
    config_registry: list[VisualConfiguration] = field(default_factory=list)

    @property
    def n_users(self) -> int:
        if not self.visualizations:
            return 0
        return max(v.user_id for v in self.visualizations) + 1

    @property
    def n_attributes(self) -> int:
        return sum(len(d.columns) for d in self.datasets)

    @property
    def n_configs(self) -> int:
        return len(self.config_registry)

    @property
    def n_visualizations(self) -> int:
        return len(self.visualizations)

    def dataset_by_id(self, dataset_id: int) -> Dataset:
        for d in self.datasets:
            if d.dataset_id == dataset_id:
                return d
        raise ValidationError(f"unknown dataset id {dataset_id}")

    def all_columns(self) -> list[AttributeColumn]:
        cols: list[AttributeColumn] = []
        for d in self.datasets:
            cols.extend(d.columns)
        cols.sort(key=lambda c: c.attribute_id)
        return cols

    def column_by_attribute(self, attribute_id: int) -> AttributeColumn:
        for d in self.datasets:
            for c in d.columns:
                if c.attribute_id == attribute_id:
                    return c
        raise ValidationError(f"unknown attribute id {attribute_id}")

    def attribute_types(self) -> dict[int, str]:
        return {c.attribute_id: c.inferred_type for c in self.all_columns()}

    def with_visualizations(self, visualizations: list[VisualizationSpec]) -> "Corpus":
        """Derived corpus sharing datasets and registry (indices stay stable)."""
        return Corpus(datasets=self.datasets,
                      visualizations=list(visualizations),
                      config_registry=self.config_registry)
