from .centroid import global_centroid_score, global_user_embedding
from .eals import (EalsConfig, EalsModel, eals_fit, negative_weights,
                   weighted_objective)
from .frequency import FrequencyTables, vispop_score
from .knn import ItemNeighborhood, VisConfigKnn, VisKnn

__all__ = [
    "EalsConfig", "EalsModel", "FrequencyTables", "ItemNeighborhood",
    "VisConfigKnn", "VisKnn", "eals_fit", "global_centroid_score",
    "global_user_embedding", "negative_weights", "vispop_score",
    "weighted_objective",
]
