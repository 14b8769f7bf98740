from .mlp import (ACTIVATIONS, MlpParams, backward, bce_sum, build_input,
                  forward, init_mlp, loss, tower_widths)
from .train import (Adam, MlpBaseline, NeuralConfig, TrainingPool,
                    score_neural, score_neural_cmf, train_mlp_baseline,
                    train_neural)

__all__ = [
    "ACTIVATIONS", "Adam", "MlpBaseline", "MlpParams", "NeuralConfig",
    "TrainingPool", "backward", "bce_sum", "build_input", "forward",
    "init_mlp", "loss", "score_neural", "score_neural_cmf", "tower_widths",
    "train_mlp_baseline", "train_neural",
]
