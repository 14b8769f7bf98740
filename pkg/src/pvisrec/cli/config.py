"""Run configuration: defaults, YAML loading, and the canonical hash.

Every field has a default; the resolved config's SHA-256 (over canonical
JSON) is stamped into artifacts and reports. See configs/reference.yaml
for a fully commented example.
"""

from __future__ import annotations

import copy
import hashlib
import json

import yaml

from ..baselines import EalsConfig
from ..errors import ValidationError
from ..evaluation import EvalConfig
from ..factorization import TrainConfig
from ..neural import NeuralConfig

DEFAULTS: dict = {
    "paths": {
        "corpus": "",
        "artifacts": "artifacts",
    },
    "metafeatures": {
        "rank": "full",          # "full" or an integer meta-embedding rank
    },
    "graphs": {
        "binarize": False,
        "feedback_weights": {},  # feedback kind -> weight, default 1.0 each
    },
    "train": {
        "rank": 10,
        "ridge": 0.01,
        "max_iters": 50,
        "tol": 1.0e-5,
        "seed": 1,
        "variant": "full",
    },
    "neural": {
        "lr": 0.001,
        "layers": 3,
        "widths": "auto",        # "auto" tower or list of ints ending at rank
        "activation": "relu",
        "epochs": 20,
        "batch_size": 256,
        "neg_per_pos": 5,
        "s_max": 3,
        "alpha": 0.5,
        "seed": 1,
    },
    "eals": {
        "rank": 10,
        "ridge": 0.01,
        "iters": 20,
        "c0": 512.0,
        "seed": 1,
    },
    "eval": {
        "models": ["pvisrec", "vispop", "global"],
        "k_max": 10,
        "n_negatives": 19,
        "max_attrs": 3,
        "knn_k": 10,
        "slate_minmax": False,
        "seed": 1,
    },
}


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ValidationError(f"unknown config key {where!r}")
        if isinstance(base[key], dict) and key != "feedback_weights":
            if not isinstance(value, dict):
                raise ValidationError(f"config key {where!r} must be a mapping")
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = value
    return out


def load_config(path=None) -> dict:
    if path is None:
        return copy.deepcopy(DEFAULTS)
    with open(path, encoding="utf-8") as fh:
        doc = yaml.safe_load(fh) or {}
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: config must be a mapping")
    return _merge(DEFAULTS, doc)


def config_hash(cfg: dict) -> str:
    payload = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def mfe_rank(cfg: dict) -> int | None:
    raw = cfg["metafeatures"]["rank"]
    if raw in ("full", None):
        return None
    return int(raw)


def train_config(cfg: dict, variant: str | None = None) -> TrainConfig:
    t = cfg["train"]
    return TrainConfig(rank=int(t["rank"]), ridge=float(t["ridge"]),
                       max_iters=int(t["max_iters"]), tol=float(t["tol"]),
                       seed=int(t["seed"]), variant=variant or t["variant"])


def neural_config(cfg: dict) -> NeuralConfig:
    n = cfg["neural"]
    widths = n["widths"]
    if widths in ("auto", None):
        widths = None
        strict = True
    else:
        widths = [int(w) for w in widths]
        strict = False
    return NeuralConfig(lr=float(n["lr"]), n_layers=int(n["layers"]), widths=widths,
                        activation=n["activation"], epochs=int(n["epochs"]),
                        batch_size=int(n["batch_size"]),
                        neg_per_pos=int(n["neg_per_pos"]), s_max=int(n["s_max"]),
                        seed=int(n["seed"]), alpha=float(n["alpha"]),
                        max_attrs=int(cfg["eval"]["max_attrs"]),
                        strict_tower=strict)


def eals_config(cfg: dict) -> EalsConfig:
    e = cfg["eals"]
    return EalsConfig(rank=int(e["rank"]), ridge=float(e["ridge"]),
                      iters=int(e["iters"]), seed=int(e["seed"]), c0=float(e["c0"]))


def eval_config(cfg: dict) -> EvalConfig:
    ev = cfg["eval"]
    return EvalConfig(k_max=int(ev["k_max"]), n_negatives=int(ev["n_negatives"]),
                      max_attrs=int(ev["max_attrs"]), mfe_rank=mfe_rank(cfg),
                      knn_k=int(ev["knn_k"]), binarize=bool(cfg["graphs"]["binarize"]),
                      slate_minmax=bool(ev["slate_minmax"]),
                      train=train_config(cfg), neural=neural_config(cfg),
                      eals=eals_config(cfg))
