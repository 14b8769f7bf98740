"""Fixed layout of the shared meta-feature space.

Every attribute maps to the same K-dimensional vector: the statistical
feature block (67 functions, see PSI_NAMES) evaluated on 4 data
representations, whole and partitioned. The layout is a corpus-wide
constant; ``layout_hash`` stamps artifacts so mismatched catalogs are
rejected at load time.
"""

from __future__ import annotations

import hashlib
import json

from ..kernels import PSI_SIZE

PSI_NAMES = (
    "n_instances", "n_missing", "frac_present", "n_nonzero", "n_unique", "density",
    "q1", "q3", "iqr",
    "outlier_lb_1.5iqr", "outlier_lb_3iqr", "outlier_ub_1.5iqr", "outlier_ub_3iqr",
    "outlier_total_1.5iqr", "outlier_total_3iqr", "outlier_2std", "outlier_3std",
    "spearman_rho", "spearman_pval", "kendall_tau", "kendall_pval",
    "pearson_r", "pearson_pval",
    "min", "max", "range", "median", "geometric_mean", "harmonic_mean",
    "mean", "std", "variance", "skewness", "kurtosis", "hyperskewness",
    "moment_6", "moment_7", "moment_8", "moment_9", "moment_10",
    "kstat_3", "kstat_4",
    "quartile_dispersion", "median_abs_dev", "avg_abs_dev",
    "coeff_variation", "efficiency_ratio", "variance_to_mean",
    "snr", "entropy", "norm_entropy", "gini",
    "quartile_max_gap", "centroid_max_gap",
    "hist_0", "hist_1", "hist_2", "hist_3", "hist_4",
    "hist_5", "hist_6", "hist_7", "hist_8", "hist_9",
    "kmeans_ssd", "kmeans_silhouette", "kmeans_iters",
)

assert len(PSI_NAMES) == PSI_SIZE

REPRESENTATIONS = ("identity", "probability", "minmax", "logbin")
PARTITION_SCHEMES = (("quartile", 4), ("equal-width", 5), ("kmeans", 4))

# whole-representation blocks first, then every (scheme, cell) per representation
BLOCKS: tuple = tuple(
    [(rep, "whole", -1) for rep in REPRESENTATIONS]
    + [(rep, scheme, cell)
       for rep in REPRESENTATIONS
       for scheme, k in PARTITION_SCHEMES
       for cell in range(k)]
)

K = len(BLOCKS) * PSI_SIZE


def layout_hash() -> str:
    payload = json.dumps({"blocks": list(BLOCKS), "psi": list(PSI_NAMES)},
                         separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def layout_entries():
    """(index, representation, scheme, cell, feature) for every dimension."""
    idx = 0
    for rep, scheme, cell in BLOCKS:
        for name in PSI_NAMES:
            yield idx, rep, scheme, cell, name
            idx += 1
