"""Popularity scorer: product of attribute and configuration frequencies."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graphs import InteractionGraphs


@dataclass
class FrequencyTables:
    attr_freq: np.ndarray      # column sums of the user-attribute graph
    config_freq: np.ndarray    # column sums of the user-configuration graph

    @classmethod
    def from_graphs(cls, graphs: InteractionGraphs) -> "FrequencyTables":
        return cls(attr_freq=graphs.user_attr.col_sums(),
                   config_freq=graphs.user_config.col_sums())


def vispop_score(tables: FrequencyTables, binding, config_id: int) -> float:
    """f(config) * prod f(attr); zero whenever any component is unseen."""
    score = float(tables.config_freq[config_id])
    for a in dict.fromkeys(binding):
        score *= float(tables.attr_freq[a])
    return score
