"""Pure-numpy implementations of the statistical feature kernels.

``stats_numba`` carries loop-style twins of every function here; the two
paths must agree numerically (see tests/test_kernel_parity.py). Semantics
that both paths pin down:

* quartiles use the median-of-halves rule (Q1 = median of the floor(n/2)
  smallest values, Q3 symmetric; n == 1 degenerates to the single value)
* correlations compare a vector against its own sorted copy; constant
  vectors yield coefficient 0 with p-value 1; p-values use the standard
  large-sample normal approximations
* undefined statistics are imputed so the kernel is a total function
* 1-d k-means seeds from the first k distinct values in appearance order,
  breaks distance ties toward the lowest cluster index, and keeps the old
  centroid for empty clusters
"""

from __future__ import annotations

import math

import numpy as np

PSI_SIZE = 67
KMEANS_K = 4
KMEANS_MAX_ITER = 50
HIST_BINS = 10

_GM_EPS = 1e-12


def _norm_sf2(z: float) -> float:
    # two-sided tail of the standard normal
    return 2.0 * 0.5 * math.erfc(abs(z) / math.sqrt(2.0))


def _median_sorted(s: np.ndarray) -> float:
    n = s.shape[0]
    if n == 0:
        return 0.0
    mid = n // 2
    if n % 2 == 1:
        return float(s[mid])
    return 0.5 * (float(s[mid - 1]) + float(s[mid]))


def quartiles(v: np.ndarray) -> tuple[float, float, float]:
    """(q1, median, q3) of a vector by the median-of-halves rule."""
    s = np.sort(v)
    n = s.shape[0]
    half = max(1, n // 2)
    q1 = _median_sorted(s[:half])
    q3 = _median_sorted(s[n - half:])
    return q1, _median_sorted(s), q3


def ranks_average(v: np.ndarray) -> np.ndarray:
    """1-based ranks with ties assigned their average rank."""
    n = v.shape[0]
    order = np.argsort(v, kind="mergesort")
    sv = v[order]
    run_start = np.r_[True, sv[1:] != sv[:-1]]
    run_ids = np.cumsum(run_start) - 1
    counts = np.bincount(run_ids)
    ends = np.cumsum(counts).astype(np.float64)
    starts = ends - counts + 1.0
    avg = 0.5 * (starts + ends)
    out = np.empty(n, dtype=np.float64)
    out[order] = avg[run_ids]
    return out


def _tie_term(v: np.ndarray) -> float:
    # sum over tie groups of t*(t-1)/2
    _, counts = np.unique(v, return_counts=True)
    c = counts.astype(np.float64)
    return float(np.sum(c * (c - 1.0)) / 2.0)


def kendall_tau(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Kendall tau-b of (x, y) plus its large-sample normal p-value."""
    n = x.shape[0]
    if n < 2:
        return 0.0, 1.0
    nc = 0.0
    nd = 0.0
    chunk = max(1, 2_000_000 // n)
    for i0 in range(0, n, chunk):
        i1 = min(n, i0 + chunk)
        dx = np.sign(x[i0:i1, None] - x[None, :])
        dy = np.sign(y[i0:i1, None] - y[None, :])
        prod = dx * dy
        nc += float(np.sum(prod > 0))
        nd += float(np.sum(prod < 0))
    nc /= 2.0
    nd /= 2.0
    n0 = n * (n - 1) / 2.0
    n1 = _tie_term(x)
    n2 = _tie_term(y)
    denom = math.sqrt(max(n0 - n1, 0.0) * max(n0 - n2, 0.0))
    tau = (nc - nd) / denom if denom > 0 else 0.0
    var = n * (n - 1) * (2.0 * n + 5.0) / 2.0
    if var <= 0:
        return tau, 1.0
    z = 3.0 * (nc - nd) / math.sqrt(var)
    return tau, _norm_sf2(z)


def pearson_r(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Pearson r plus a Fisher-z large-sample p-value."""
    n = x.shape[0]
    if n < 2:
        return 0.0, 1.0
    mx = float(np.mean(x))
    my = float(np.mean(y))
    dx = x - mx
    dy = y - my
    vx = float(np.mean(dx * dx))
    vy = float(np.mean(dy * dy))
    if vx <= 0.0 or vy <= 0.0:
        return 0.0, 1.0
    r = float(np.mean(dx * dy)) / math.sqrt(vx * vy)
    r = min(1.0, max(-1.0, r))
    if n < 4:
        return r, 1.0
    rc = min(1.0 - 1e-15, max(-1.0 + 1e-15, r))
    z = math.atanh(rc) * math.sqrt(n - 3.0)
    return r, _norm_sf2(z)


def spearman_rho(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Spearman rho (average-rank ties) plus its normal-approx p-value."""
    n = x.shape[0]
    if n < 2:
        return 0.0, 1.0
    rho, _ = pearson_r(ranks_average(x), ranks_average(y))
    z = rho * math.sqrt(n - 1.0)
    return rho, _norm_sf2(z)


def kmeans_1d(v: np.ndarray, k: int = KMEANS_K,
              max_iter: int = KMEANS_MAX_ITER) -> tuple[np.ndarray, np.ndarray, int]:
    """Deterministic 1-d k-means; returns (centroids, assignments, iterations)."""
    n = v.shape[0]
    uniq, first = np.unique(v, return_index=True)
    appearance = uniq[np.argsort(first, kind="mergesort")]
    cents = np.empty(k, dtype=np.float64)
    take = min(k, appearance.shape[0])
    cents[:take] = appearance[:take]
    cents[take:] = appearance[take - 1]
    assign = np.zeros(n, dtype=np.int64)
    old = np.full(n, -1, dtype=np.int64)
    iters = 0
    for _ in range(max_iter):
        iters += 1
        dist = np.abs(v[:, None] - cents[None, :])
        assign = np.argmin(dist, axis=1)
        if np.array_equal(assign, old):
            break
        old = assign.copy()
        sums = np.bincount(assign, weights=v, minlength=k)
        counts = np.bincount(assign, minlength=k)
        nonempty = counts > 0
        cents[nonempty] = sums[nonempty] / counts[nonempty]
    return cents, assign, iters


def silhouette_1d(v: np.ndarray, assign: np.ndarray, k: int) -> float:
    """Mean silhouette; 0 when any cluster is empty, singleton points score 0."""
    n = v.shape[0]
    counts = np.bincount(assign, minlength=k).astype(np.float64)
    if np.any(counts == 0):
        return 0.0
    dist = np.abs(v[:, None] - v[None, :])
    onehot = np.zeros((n, k), dtype=np.float64)
    onehot[np.arange(n), assign] = 1.0
    sums = dist @ onehot
    idx = np.arange(n)
    own = sums[idx, assign]
    own_count = counts[assign]
    a = np.where(own_count > 1, own / np.maximum(own_count - 1.0, 1.0), 0.0)
    mean_to = sums / counts[None, :]
    mean_to[idx, assign] = np.inf
    b = mean_to.min(axis=1)
    denom = np.maximum(a, b)
    s = np.where((own_count > 1) & (denom > 0), (b - a) / np.where(denom > 0, denom, 1.0), 0.0)
    return float(np.mean(s))


def psi_kernel(values: np.ndarray) -> np.ndarray:
    """All 67 statistical features of one vector (NaN cells count as missing)."""
    out = np.zeros(PSI_SIZE, dtype=np.float64)
    n_total = values.shape[0]
    out[0] = n_total
    if n_total == 0:
        return out
    v = values[~np.isnan(values)].astype(np.float64)
    cnt = v.shape[0]
    miss = n_total - cnt
    out[1] = miss
    out[2] = (n_total - miss) / n_total
    if cnt == 0:
        return out
    nnz = int(np.count_nonzero(v))
    out[3] = nnz
    out[4] = np.unique(v).shape[0]
    out[5] = nnz / n_total

    s = np.sort(v)
    mn = float(s[0])
    mx = float(s[-1])
    q1, med, q3 = quartiles(v)
    iqr = q3 - q1
    out[6] = q1
    out[7] = q3
    out[8] = iqr
    for slot, alpha in ((9, 1.5), (10, 3.0)):
        out[slot] = np.count_nonzero(v < q1 - alpha * iqr)
    for slot, alpha in ((11, 1.5), (12, 3.0)):
        out[slot] = np.count_nonzero(v > q3 + alpha * iqr)
    out[13] = out[9] + out[11]
    out[14] = out[10] + out[12]

    mu = float(np.mean(v))
    dev = v - mu
    var = float(np.mean(dev * dev))
    sd = math.sqrt(var)
    out[15] = np.count_nonzero(np.abs(dev) > 2.0 * sd)
    out[16] = np.count_nonzero(np.abs(dev) > 3.0 * sd)

    y = s  # sorted copy doubles as the monotone reference
    out[17], out[18] = spearman_rho(v, y)
    out[19], out[20] = kendall_tau(v, y)
    out[21], out[22] = pearson_r(v, y)

    out[23] = mn
    out[24] = mx
    out[25] = mx - mn
    out[26] = med
    out[27] = math.exp(float(np.mean(np.log(np.maximum(np.abs(v), _GM_EPS)))))
    nz = v[v != 0]
    if nz.shape[0] > 0:
        recip = float(np.sum(1.0 / nz))
        # cancelled reciprocal sums are a degenerate case, imputed to 0
        if abs(recip) > 1e-12 * float(np.sum(np.abs(1.0 / nz))):
            out[28] = nz.shape[0] / recip
    out[29] = mu
    out[30] = sd
    out[31] = var

    if sd > 0:
        powed = dev * dev * dev
        scale = sd * sd * sd
        for slot in range(32, 40):  # standardized moments 3..10
            out[slot] = float(np.mean(powed)) / scale
            powed = powed * dev
            scale = scale * sd
    m2 = var
    m3 = float(np.mean(dev ** 3))
    m4 = float(np.mean(dev ** 4))
    if cnt >= 3:
        out[40] = cnt * cnt * m3 / ((cnt - 1.0) * (cnt - 2.0))
    if cnt >= 4:
        out[41] = (cnt * cnt * ((cnt + 1.0) * m4 - 3.0 * (cnt - 1.0) * m2 * m2)
                   / ((cnt - 1.0) * (cnt - 2.0) * (cnt - 3.0)))

    out[42] = iqr / (q3 + q1) if (q3 + q1) != 0.0 else 0.0
    out[43] = _median_sorted(np.sort(np.abs(v - med)))
    out[44] = float(np.mean(np.abs(dev)))
    out[45] = sd / mu if mu != 0.0 else 0.0
    out[46] = var / (mu * mu) if mu != 0.0 else 0.0
    out[47] = var / mu if mu != 0.0 else 0.0
    out[48] = mu * mu / var if var > 0.0 else 0.0

    pos = v[v > 0]
    if pos.shape[0] > 0:
        out[49] = float(-np.sum(pos * np.log(pos)))
        if cnt >= 2:
            out[50] = float(-np.sum(pos * np.log2(pos))) / math.log2(cnt)
    if mn >= 0.0:
        total = float(np.sum(s))
        if total > 0.0:
            i1 = np.arange(1, cnt + 1, dtype=np.float64)
            out[51] = float(np.sum((2.0 * i1 - cnt - 1.0) * s)) / (cnt * total)

    qpoints = np.array([mn, q1, med, q3, mx])
    out[52] = float(np.max(np.diff(qpoints)))

    cents, assign, iters = kmeans_1d(v)
    gap = 0.0
    for i in range(KMEANS_K):
        for j in range(i + 1, KMEANS_K):
            gap = max(gap, abs(float(cents[i]) - float(cents[j])))
    out[53] = gap

    width = (mx - mn) / HIST_BINS
    if width > 0.0:
        bins = np.minimum(((v - mn) / width).astype(np.int64), HIST_BINS - 1)
        hist = np.bincount(bins, minlength=HIST_BINS).astype(np.float64)
    else:
        hist = np.zeros(HIST_BINS)
        hist[0] = cnt
    out[54:64] = hist / cnt

    out[64] = float(np.sum((v - cents[assign]) ** 2))
    out[65] = silhouette_1d(v, assign, KMEANS_K)
    out[66] = iters
    return out
