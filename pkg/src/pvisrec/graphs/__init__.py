from .build import (InteractionGraphs, build_attribute_config, build_graphs,
                    build_user_attribute, build_user_config, graph_stats)
from .sparse import SparseMatrix

__all__ = [
    "InteractionGraphs", "SparseMatrix", "build_attribute_config",
    "build_graphs", "build_user_attribute", "build_user_config", "graph_stats",
]
