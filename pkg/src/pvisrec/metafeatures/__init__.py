from .catalog import (BLOCKS, K, PARTITION_SCHEMES, PSI_NAMES,
                      REPRESENTATIONS, layout_entries, layout_hash)
from .embedding import (MetaEmbedding, embed_new_attribute, fit_meta_embedding,
                        reconstruction_error)
from .features import (MetaFeatureMatrix, build_meta_feature_matrix,
                       meta_feature_vector, partition, psi, psi_named,
                       representations, representations_of)

__all__ = [
    "BLOCKS", "K", "PARTITION_SCHEMES", "PSI_NAMES", "REPRESENTATIONS",
    "MetaEmbedding", "MetaFeatureMatrix", "build_meta_feature_matrix",
    "embed_new_attribute", "fit_meta_embedding", "layout_entries",
    "layout_hash", "meta_feature_vector", "partition", "psi", "psi_named",
    "reconstruction_error", "representations", "representations_of",
]
