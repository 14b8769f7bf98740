from .als import VARIANTS, EmbeddingSet, TrainConfig, als_fit, objective
from .recommend import (order_candidates, rank_visualizations,
                        recommend_attributes, recommend_configs,
                        score_candidates, score_visualization)

__all__ = [
    "VARIANTS", "EmbeddingSet", "TrainConfig", "als_fit", "objective",
    "order_candidates", "rank_visualizations", "recommend_attributes",
    "recommend_configs", "score_candidates", "score_visualization",
]
