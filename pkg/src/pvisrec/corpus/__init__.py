from .abstraction import (abstract_channels, binding_of, distinct_attrs,
                          enumerate_candidate_visualizations,
                          extract_visual_configuration)
from .inference import encode_numeric, infer_attribute_type, is_missing
from .io import assemble_corpus, corpus_stats, load_corpus, save_corpus
from .synth import generate_synthetic_corpus
from .types import (ATTRIBUTE_TYPES, CHANNELS, DATA_CHANNELS, FEEDBACK_KINDS,
                    AttributeColumn, Corpus, Dataset, VisualConfiguration,
                    VisualizationSpec)

__all__ = [
    "ATTRIBUTE_TYPES", "CHANNELS", "DATA_CHANNELS", "FEEDBACK_KINDS",
    "AttributeColumn", "Corpus", "Dataset", "VisualConfiguration",
    "VisualizationSpec", "abstract_channels", "assemble_corpus", "binding_of",
    "corpus_stats", "distinct_attrs", "encode_numeric",
    "enumerate_candidate_visualizations", "extract_visual_configuration",
    "generate_synthetic_corpus", "infer_attribute_type", "is_missing",
    "load_corpus", "save_corpus",
]
