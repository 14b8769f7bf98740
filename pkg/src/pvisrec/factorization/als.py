"""Collective factorization of the interaction graphs and meta-feature matrix.

The full model couples four reconstruction terms through shared factors:

    |user_attr - U V^T|^2 + |meta - Y V^T|^2
    + |user_config - U Z^T|^2 + |attr_config - V Z^T|^2  (+ ridge)

with U: users, V: attributes, Z: configurations, Y: meta-features. Zeros
of the sparse graphs are modeled (plain squared loss over full matrices);
Gram identities keep evaluation at O(nnz * d) without densifying. Variants:
``acm`` drops the attr_config term, ``acd`` drops the meta term (and Y).

Each factor update is the exact ridge minimizer given the others, so the
regularized objective is non-increasing per update.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import NumericsError, ValidationError
from ..graphs import InteractionGraphs

VARIANTS = ("full", "acm", "acd")


@dataclass
class TrainConfig:
    rank: int = 10
    ridge: float = 1e-2
    max_iters: int = 50
    tol: float = 1e-5
    seed: int = 0
    variant: str = "full"

    def __post_init__(self):
        if self.rank < 1:
            raise ValidationError("rank must be >= 1")
        if self.ridge < 0:
            raise ValidationError("ridge must be >= 0")
        if self.variant not in VARIANTS:
            raise ValidationError(f"variant must be one of {VARIANTS}")


@dataclass
class EmbeddingSet:
    users: np.ndarray            # n x d
    attrs: np.ndarray            # m x d
    configs: np.ndarray          # h x d
    meta: np.ndarray | None      # K x d (absent for the acd variant)
    rank: int
    variant: str = "full"
    trace: list = field(default_factory=list, repr=False)

    def check_finite(self) -> None:
        mats = [self.users, self.attrs, self.configs]
        if self.meta is not None:
            mats.append(self.meta)
        for mat in mats:
            if not np.all(np.isfinite(mat)):
                raise NumericsError("embedding contains non-finite entries")


def _gram(x: np.ndarray) -> np.ndarray:
    return x.T @ x


def _sq_err_sparse(mat, left, right, gram_left, gram_right) -> float:
    return (mat.frobenius_sq() - 2.0 * mat.cross_inner(left, right)
            + float(np.sum(gram_left * gram_right)))


def objective(graphs: InteractionGraphs, meta: np.ndarray | None,
              emb: EmbeddingSet, ridge: float = 0.0,
              variant: str | None = None) -> float:
    """Exact regularized squared loss (zeros included, nothing densified)."""
    variant = variant or emb.variant
    if variant not in VARIANTS:
        raise ValidationError(f"variant must be one of {VARIANTS}")
    u, v, z, y = emb.users, emb.attrs, emb.configs, emb.meta
    if graphs.user_attr.n_rows != u.shape[0] or graphs.user_attr.n_cols != v.shape[0]:
        raise ValidationError("graph shapes do not match the embeddings")
    gu, gv, gz = _gram(u), _gram(v), _gram(z)
    total = _sq_err_sparse(graphs.user_attr, u, v, gu, gv)
    total += _sq_err_sparse(graphs.user_config, u, z, gu, gz)
    if variant != "acm":
        total += _sq_err_sparse(graphs.attr_config, v, z, gv, gz)
    if variant != "acd":
        if meta is None or y is None:
            raise ValidationError(f"variant {variant!r} needs the meta matrix and factor")
        if meta.shape != (y.shape[0], v.shape[0]):
            raise ValidationError("meta matrix shape does not match the factors")
        gy = _gram(y)
        total += (float(np.sum(meta * meta)) - 2.0 * float(np.sum((meta.T @ y) * v))
                  + float(np.sum(gy * gv)))
    if ridge > 0:
        total += ridge * (float(np.sum(u * u)) + float(np.sum(v * v))
                          + float(np.sum(z * z)))
        if y is not None and variant != "acd":
            total += ridge * float(np.sum(y * y))
    return total


def _solve_factor(gram: np.ndarray, rhs: np.ndarray, name: str, iteration: int) -> np.ndarray:
    try:
        return np.linalg.solve(gram, rhs.T).T
    except np.linalg.LinAlgError as exc:
        raise NumericsError(
            f"singular normal equations updating factor {name!r} "
            f"at iteration {iteration}") from exc


def als_fit(graphs: InteractionGraphs, meta: np.ndarray | None,
            cfg: TrainConfig, on_update=None) -> EmbeddingSet:
    """Alternating closed-form ridge updates until max_iters or the relative
    objective change drops below tol. Deterministic for a fixed seed."""
    variant = cfg.variant
    d = cfg.rank
    n = graphs.n_users
    m = graphs.n_attributes
    h = graphs.n_configs
    if variant != "acd":
        if meta is None:
            raise ValidationError(f"variant {variant!r} needs a meta-feature matrix")
        if meta.shape[1] != m:
            raise ValidationError("meta matrix columns must match attribute count")
        n_meta = meta.shape[0]

    rng = np.random.default_rng(cfg.seed)

    def init(rows):
        return rng.uniform(-0.01, 0.01, size=(rows, d))

    emb = EmbeddingSet(users=init(n), attrs=init(m), configs=init(h),
                       meta=None if variant == "acd" else init(n_meta),
                       rank=d, variant=variant)
    a, c, dd = graphs.user_attr, graphs.user_config, graphs.attr_config
    eye = cfg.ridge * np.eye(d)

    def report(iteration, factor):
        value = objective(graphs, meta, emb, cfg.ridge, variant)
        if on_update is not None:
            on_update(iteration, factor, value)
        return value

    prev = objective(graphs, meta, emb, cfg.ridge, variant)
    emb.trace.append(prev)
    for it in range(1, cfg.max_iters + 1):
        u, v, z, y = emb.users, emb.attrs, emb.configs, emb.meta

        rhs = a.matmul_dense(v) + c.matmul_dense(z)
        emb.users = u = _solve_factor(_gram(v) + _gram(z) + eye, rhs, "users", it)
        if on_update is not None:
            report(it, "users")

        rhs = a.t_matmul_dense(u)
        gram = _gram(u) + eye
        if variant != "acd":
            rhs = rhs + meta.T @ y
            gram = gram + _gram(y)
        if variant != "acm":
            rhs = rhs + dd.matmul_dense(z)
            gram = gram + _gram(z)
        emb.attrs = v = _solve_factor(gram, rhs, "attrs", it)
        if on_update is not None:
            report(it, "attrs")

        rhs = c.t_matmul_dense(u)
        gram = _gram(u) + eye
        if variant != "acm":
            rhs = rhs + dd.t_matmul_dense(v)
            gram = gram + _gram(v)
        emb.configs = z = _solve_factor(gram, rhs, "configs", it)
        if on_update is not None:
            report(it, "configs")

        if variant != "acd":
            emb.meta = _solve_factor(_gram(v) + eye, meta @ v, "meta", it)
            if on_update is not None:
                report(it, "meta")

        current = objective(graphs, meta, emb, cfg.ridge, variant)
        emb.trace.append(current)
        if not np.isfinite(current):
            raise NumericsError(f"objective diverged at iteration {it}")
        if prev > 0 and abs(prev - current) / prev < cfg.tol:
            break
        prev = current

    emb.check_finite()
    return emb
