from .config import (DEFAULTS, config_hash, eval_config, load_config,
                     neural_config, train_config)
from .pipeline import Pipeline, StageResult, pipeline_run, write_report

__all__ = [
    "DEFAULTS", "Pipeline", "StageResult", "config_hash", "eval_config",
    "load_config", "neural_config", "pipeline_run", "train_config",
    "write_report",
]
