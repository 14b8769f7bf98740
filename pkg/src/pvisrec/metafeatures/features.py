"""Meta-feature extraction: representations, partitions, psi, and the matrix.

Missing cells are dropped after numeric encoding, so the statistical kernel
sees clean vectors; empty partition cells contribute an all-zero block,
keeping the output length fixed at ``catalog.K`` for every attribute.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..corpus import AttributeColumn, Corpus, encode_numeric
from ..errors import ValidationError
from . import catalog


def representations(column: AttributeColumn) -> list[np.ndarray]:
    """The 4 numeric views of a column: identity, probability, min-max, log-bin."""
    encoded = encode_numeric(column)
    clean = encoded[~np.isnan(encoded)]
    if clean.shape[0] == 0:
        raise ValidationError(
            f"attribute {column.name!r} has no usable values for meta-features")
    return representations_of(clean)


def representations_of(clean: np.ndarray) -> list[np.ndarray]:
    total = float(np.sum(clean))
    if total == 0.0:
        prob = np.full(clean.shape[0], 1.0 / clean.shape[0])
    else:
        prob = clean / total
    lo = float(np.min(clean))
    span = float(np.max(clean)) - lo
    minmax = (clean - lo) / span if span > 0 else np.zeros_like(clean)
    logbin = np.floor(np.log2(1.0 + clean - lo))
    return [clean.astype(np.float64), prob, minmax, logbin]


def partition(vector: np.ndarray, scheme: str, k: int) -> list[np.ndarray]:
    """Disjoint index cells covering the vector; empty cells are kept."""
    if k < 1:
        raise ValidationError("partition needs k >= 1")
    n = vector.shape[0]
    if scheme == "quartile":
        order = np.argsort(vector, kind="mergesort")
        return [np.sort(chunk) for chunk in np.array_split(order, k)]
    if scheme == "equal-width":
        lo = float(np.min(vector))
        width = (float(np.max(vector)) - lo) / k
        if width <= 0:
            cells = [np.arange(n)] + [np.empty(0, dtype=np.int64) for _ in range(k - 1)]
            return cells
        which = np.minimum(((vector - lo) / width).astype(np.int64), k - 1)
        return [np.flatnonzero(which == c) for c in range(k)]
    if scheme == "kmeans":
        _, assign, _ = kernels.kmeans_1d(vector.astype(np.float64), k, 50)
        return [np.flatnonzero(assign == c) for c in range(k)]
    raise ValidationError(f"unknown partition scheme {scheme!r}")


def psi(vector: np.ndarray) -> np.ndarray:
    """Statistical feature vector (catalog.PSI_NAMES order) of one vector."""
    return kernels.psi_kernel(np.ascontiguousarray(vector, dtype=np.float64))


def psi_named(vector: np.ndarray) -> dict[str, float]:
    return dict(zip(catalog.PSI_NAMES, psi(vector)))


def meta_feature_vector(column: AttributeColumn) -> np.ndarray:
    """K-dimensional meta-feature vector of a column (not normalized)."""
    reps = representations(column)
    blocks = [psi(rep) for rep in reps]
    for rep in reps:
        for scheme, k in catalog.PARTITION_SCHEMES:
            for cell in partition(rep, scheme, k):
                blocks.append(psi(rep[cell]))
    out = np.concatenate(blocks)
    if out.shape[0] != catalog.K:
        raise AssertionError("meta-feature layout drifted from the catalog")
    return out


@dataclass
class MetaFeatureMatrix:
    """K x m matrix of L2-normalized meta-feature columns, in attribute order."""

    matrix: np.ndarray
    layout_hash: str

    @property
    def n_features(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_attributes(self) -> int:
        return self.matrix.shape[1]

    def density(self) -> float:
        return float(np.count_nonzero(self.matrix)) / self.matrix.size


def build_meta_feature_matrix(corpus: Corpus) -> MetaFeatureMatrix:
    """Column j is the normalized meta-feature vector of global attribute j;
    shared datasets contribute once because attributes are global."""
    columns = corpus.all_columns()
    m = len(columns)
    mat = np.empty((catalog.K, m), dtype=np.float64)
    for j, col in enumerate(columns):
        if col.attribute_id != j:
            raise ValidationError("attribute ids are not dense; rebuild the corpus")
        vec = meta_feature_vector(col)
        norm = float(np.linalg.norm(vec))
        mat[:, j] = vec / norm if norm > 0 else vec
    return MetaFeatureMatrix(matrix=mat, layout_hash=catalog.layout_hash())
