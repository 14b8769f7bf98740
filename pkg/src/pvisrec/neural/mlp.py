"""Multilayer perceptron scoring head over frozen embeddings.

Input is the concatenation [user; config; attr_1; ...; attr_s] with unused
attribute slots zero-padded; hidden layers follow a tower (each width half
the previous, final width equal to the embedding size) and the output is a
logistic unit. Gradients are exact (checked against central differences).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError

ACTIVATIONS = ("relu", "sigmoid", "tanh")
PRED_CLIP = 1e-12


def tower_widths(rank: int, n_layers: int) -> list[int]:
    """Halving widths ending at the embedding size, e.g. 40 -> 20 -> 10."""
    return [rank * 2 ** (n_layers - 1 - i) for i in range(n_layers)]


@dataclass
class MlpParams:
    weights: list          # W_l, each (width_l x width_{l-1})
    biases: list           # b_l, each (width_l,)
    out_weights: np.ndarray
    activation: str
    widths: list

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[1]

    def copy(self) -> "MlpParams":
        return MlpParams([w.copy() for w in self.weights],
                         [b.copy() for b in self.biases],
                         self.out_weights.copy(), self.activation, list(self.widths))

    def flatten(self) -> np.ndarray:
        parts = [w.ravel() for w in self.weights] + [b for b in self.biases]
        parts.append(self.out_weights)
        return np.concatenate(parts)


def init_mlp(input_dim: int, rank: int, n_layers: int = 3, activation: str = "relu",
             widths: list[int] | None = None, seed: int = 0,
             strict_tower: bool = True) -> MlpParams:
    """Seeded Glorot-uniform initialization. With ``strict_tower`` the widths
    must halve layer to layer; the last hidden width must equal ``rank``
    either way."""
    if activation not in ACTIVATIONS:
        raise ValidationError(f"activation must be one of {ACTIVATIONS}")
    if widths is None:
        widths = tower_widths(rank, n_layers)
    widths = [int(w) for w in widths]
    if not widths or any(w < 1 for w in widths):
        raise ValidationError("layer widths must be positive")
    if widths[-1] != rank:
        raise ValidationError(
            f"last hidden width must equal the embedding size {rank}, got {widths[-1]}")
    if strict_tower:
        for a, b in zip(widths, widths[1:]):
            if b * 2 != a:
                raise ValidationError(
                    f"tower violation: widths {widths} must halve per layer")
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    fan_in = input_dim
    for w in widths:
        limit = np.sqrt(6.0 / (fan_in + w))
        weights.append(rng.uniform(-limit, limit, size=(w, fan_in)))
        biases.append(np.zeros(w))
        fan_in = w
    limit = np.sqrt(6.0 / (fan_in + 1))
    out_w = rng.uniform(-limit, limit, size=fan_in)
    return MlpParams(weights, biases, out_w, activation, widths)


def build_input(emb, user: int, attr_ids, config_id: int, s_max: int = 3) -> np.ndarray:
    """phi = [u_i; z_t; v_r1; ...; v_rs] padded with zeros to s_max slots."""
    attrs = tuple(dict.fromkeys(attr_ids))
    if not attrs:
        raise ValidationError("visualization binds no attributes")
    if len(attrs) > s_max:
        raise ValidationError(f"visualization uses {len(attrs)} attributes > s_max={s_max}")
    d = emb.rank
    out = np.zeros((2 + s_max) * d)
    out[:d] = emb.users[user]
    out[d:2 * d] = emb.configs[config_id]
    for slot, a in enumerate(attrs):
        out[(2 + slot) * d:(3 + slot) * d] = emb.attrs[a]
    return out


def _act(z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "relu":
        return np.maximum(z, 0.0)
    if kind == "tanh":
        return np.tanh(z)
    return _sigmoid(z)


def _act_grad(a: np.ndarray, z: np.ndarray, kind: str) -> np.ndarray:
    if kind == "relu":
        return (z > 0).astype(np.float64)
    if kind == "tanh":
        return 1.0 - a * a
    return a * (1.0 - a)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0)))


def forward(params: MlpParams, x: np.ndarray) -> np.ndarray:
    """Predicted probability in (0,1); x is one input or a batch (B, in)."""
    squeeze = x.ndim == 1
    a = np.atleast_2d(x)
    for w, b in zip(params.weights, params.biases):
        a = _act(a @ w.T + b, params.activation)
    y = _sigmoid(a @ params.out_weights)
    return float(y[0]) if squeeze else y


def _forward_full(params: MlpParams, x: np.ndarray):
    acts = [np.atleast_2d(x)]
    pre = []
    for w, b in zip(params.weights, params.biases):
        z = acts[-1] @ w.T + b
        pre.append(z)
        acts.append(_act(z, params.activation))
    logits = acts[-1] @ params.out_weights
    return acts, pre, _sigmoid(logits)


def loss(params: MlpParams, x: np.ndarray, labels: np.ndarray) -> float:
    """Summed binary cross-entropy, predictions clamped away from {0, 1}."""
    preds = np.atleast_1d(forward(params, x))
    return bce_sum(preds, np.atleast_1d(labels))


def bce_sum(preds: np.ndarray, labels: np.ndarray) -> float:
    p = np.clip(preds, PRED_CLIP, 1.0 - PRED_CLIP)
    return float(-np.sum(labels * np.log(p) + (1.0 - labels) * np.log(1.0 - p)))


def backward(params: MlpParams, x: np.ndarray, labels: np.ndarray):
    """Exact gradients of the summed BCE loss.

    Returns ((dW list, db list, dh), dX) so embedding-table variants can
    push gradients into their inputs.
    """
    x2 = np.atleast_2d(x)
    y = np.atleast_1d(labels).astype(np.float64)
    acts, pre, preds = _forward_full(params, x2)
    delta_out = preds - y                      # d(BCE)/d(logit)
    dh = acts[-1].T @ delta_out
    delta = np.outer(delta_out, params.out_weights)
    d_weights = [None] * len(params.weights)
    d_biases = [None] * len(params.biases)
    for layer in range(len(params.weights) - 1, -1, -1):
        delta = delta * _act_grad(acts[layer + 1], pre[layer], params.activation)
        d_weights[layer] = delta.T @ acts[layer]
        d_biases[layer] = delta.sum(axis=0)
        delta = delta @ params.weights[layer]
    return (d_weights, d_biases, dh), delta
