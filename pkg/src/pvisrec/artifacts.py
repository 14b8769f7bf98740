"""Typed save/load wrappers over the binary container for each artifact."""

from __future__ import annotations

import numpy as np

from .containers import load_container, save_container
from .errors import ValidationError
from .factorization import EmbeddingSet, TrainConfig
from .graphs import InteractionGraphs, SparseMatrix
from .metafeatures import MetaEmbedding, MetaFeatureMatrix
from .neural import MlpParams


def save_meta_matrix(path, mfm: MetaFeatureMatrix, config_hash: str = "") -> None:
    save_container(path, "metafeatures",
                   {"K": mfm.n_features, "m": mfm.n_attributes,
                    "layout_hash": mfm.layout_hash, "config_hash": config_hash},
                   {"matrix": mfm.matrix}, orders={"matrix": "F"})


def load_meta_matrix(path) -> MetaFeatureMatrix:
    header, arrays = load_container(path, "metafeatures")
    return MetaFeatureMatrix(matrix=np.ascontiguousarray(arrays["matrix"]),
                             layout_hash=header["meta"]["layout_hash"])


def save_meta_embedding(path, emb: MetaEmbedding, layout_hash: str,
                        config_hash: str = "") -> None:
    save_container(path, "meta-embedding",
                   {"rank": emb.rank, "K": emb.basis.shape[0],
                    "m": emb.coords.shape[0], "layout_hash": layout_hash,
                    "config_hash": config_hash},
                   {"basis": emb.basis, "singular_values": emb.singular_values,
                    "coords": emb.coords})


def load_meta_embedding(path) -> MetaEmbedding:
    header, arrays = load_container(path, "meta-embedding")
    return MetaEmbedding(basis=arrays["basis"],
                         singular_values=arrays["singular_values"],
                         coords=arrays["coords"], rank=header["meta"]["rank"])


def _sparse_arrays(tag: str, mat: SparseMatrix) -> dict:
    return {f"{tag}_rows": mat.rows, f"{tag}_cols": mat.cols, f"{tag}_data": mat.data}


def _sparse_from(arrays: dict, tag: str, shape) -> SparseMatrix:
    return SparseMatrix(shape[0], shape[1], arrays[f"{tag}_rows"],
                        arrays[f"{tag}_cols"], arrays[f"{tag}_data"])


def save_graphs(path, graphs: InteractionGraphs, config_hash: str = "") -> None:
    meta = {"users": graphs.n_users, "attributes": graphs.n_attributes,
            "configurations": graphs.n_configs, "config_hash": config_hash}
    arrays = {}
    arrays.update(_sparse_arrays("user_attr", graphs.user_attr))
    arrays.update(_sparse_arrays("user_config", graphs.user_config))
    arrays.update(_sparse_arrays("attr_config", graphs.attr_config))
    save_container(path, "graphs", meta, arrays)


def load_graphs(path) -> InteractionGraphs:
    header, arrays = load_container(path, "graphs")
    meta = header["meta"]
    n, m, h = meta["users"], meta["attributes"], meta["configurations"]
    return InteractionGraphs(
        user_attr=_sparse_from(arrays, "user_attr", (n, m)),
        user_config=_sparse_from(arrays, "user_config", (n, h)),
        attr_config=_sparse_from(arrays, "attr_config", (m, h)))


def save_cmf_model(path, emb: EmbeddingSet, cfg: TrainConfig,
                   config_hash: str = "") -> None:
    meta = {"rank": emb.rank, "variant": emb.variant, "ridge": cfg.ridge,
            "max_iters": cfg.max_iters, "tol": cfg.tol, "seed": cfg.seed,
            "config_hash": config_hash, "trace": emb.trace}
    arrays = {"users": emb.users, "attrs": emb.attrs, "configs": emb.configs}
    if emb.meta is not None:
        arrays["meta_factor"] = emb.meta
    save_container(path, "cmf-model", meta, arrays)


def load_cmf_model(path) -> tuple[EmbeddingSet, dict]:
    header, arrays = load_container(path, "cmf-model")
    meta = header["meta"]
    emb = EmbeddingSet(users=arrays["users"], attrs=arrays["attrs"],
                       configs=arrays["configs"],
                       meta=arrays.get("meta_factor"),
                       rank=meta["rank"], variant=meta["variant"],
                       trace=list(meta.get("trace", [])))
    return emb, meta


def save_mlp(path, params: MlpParams, meta: dict, tables: dict | None = None,
             config_hash: str = "") -> None:
    info = {"widths": list(params.widths), "activation": params.activation,
            "n_layers": len(params.weights), "config_hash": config_hash}
    info.update(meta)
    arrays = {"out_weights": params.out_weights}
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        arrays[f"w_{i}"] = w
        arrays[f"b_{i}"] = b
    if tables:
        info["has_tables"] = True
        arrays.update(tables)
    save_container(path, "mlp-model", info, arrays)


def load_mlp(path) -> tuple[MlpParams, dict, dict]:
    header, arrays = load_container(path, "mlp-model")
    meta = header["meta"]
    n_layers = meta["n_layers"]
    params = MlpParams(
        weights=[arrays[f"w_{i}"] for i in range(n_layers)],
        biases=[arrays[f"b_{i}"] for i in range(n_layers)],
        out_weights=arrays["out_weights"],
        activation=meta["activation"], widths=list(meta["widths"]))
    tables = {}
    if meta.get("has_tables"):
        tables = {k: arrays[k] for k in ("users", "attrs", "configs")
                  if k in arrays}
        if len(tables) != 3:
            raise ValidationError(f"{path}: baseline tables are incomplete")
    return params, meta, tables
