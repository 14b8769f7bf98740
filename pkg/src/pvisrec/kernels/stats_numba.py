"""Numba-jitted twins of the kernels in ``stats_numpy``.

Loop-style implementations of the same contracts; see stats_numpy for the
semantics both paths must honor.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

PSI_SIZE = 67
KMEANS_K = 4
KMEANS_MAX_ITER = 50
HIST_BINS = 10

_GM_EPS = 1e-12


@njit(cache=True)
def _norm_sf2(z):
    return 2.0 * 0.5 * math.erfc(abs(z) / math.sqrt(2.0))


@njit(cache=True)
def _median_sorted(s):
    n = s.shape[0]
    if n == 0:
        return 0.0
    mid = n // 2
    if n % 2 == 1:
        return s[mid]
    return 0.5 * (s[mid - 1] + s[mid])


@njit(cache=True)
def quartiles(v):
    s = np.sort(v)
    n = s.shape[0]
    half = n // 2
    if half < 1:
        half = 1
    q1 = _median_sorted(s[:half])
    q3 = _median_sorted(s[n - half:])
    return q1, _median_sorted(s), q3


@njit(cache=True)
def ranks_average(v):
    n = v.shape[0]
    order = np.argsort(v)
    out = np.empty(n, dtype=np.float64)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and v[order[j + 1]] == v[order[i]]:
            j += 1
        avg = 0.5 * ((i + 1.0) + (j + 1.0))
        for t in range(i, j + 1):
            out[order[t]] = avg
        i = j + 1
    return out


@njit(cache=True)
def _tie_term(v):
    s = np.sort(v)
    n = s.shape[0]
    total = 0.0
    i = 0
    while i < n:
        j = i
        while j + 1 < n and s[j + 1] == s[i]:
            j += 1
        t = float(j - i + 1)
        total += t * (t - 1.0) / 2.0
        i = j + 1
    return total


@njit(cache=True)
def kendall_tau(x, y):
    n = x.shape[0]
    if n < 2:
        return 0.0, 1.0
    nc = 0.0
    nd = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            a = x[i] - x[j]
            b = y[i] - y[j]
            sa = 0
            if a > 0:
                sa = 1
            elif a < 0:
                sa = -1
            sb = 0
            if b > 0:
                sb = 1
            elif b < 0:
                sb = -1
            prod = sa * sb
            if prod > 0:
                nc += 1.0
            elif prod < 0:
                nd += 1.0
    n0 = n * (n - 1) / 2.0
    n1 = _tie_term(x)
    n2 = _tie_term(y)
    t1 = n0 - n1
    if t1 < 0.0:
        t1 = 0.0
    t2 = n0 - n2
    if t2 < 0.0:
        t2 = 0.0
    denom = math.sqrt(t1 * t2)
    tau = (nc - nd) / denom if denom > 0 else 0.0
    var = n * (n - 1) * (2.0 * n + 5.0) / 2.0
    if var <= 0:
        return tau, 1.0
    z = 3.0 * (nc - nd) / math.sqrt(var)
    return tau, _norm_sf2(z)


@njit(cache=True)
def pearson_r(x, y):
    n = x.shape[0]
    if n < 2:
        return 0.0, 1.0
    mx = np.mean(x)
    my = np.mean(y)
    vx = 0.0
    vy = 0.0
    cov = 0.0
    for i in range(n):
        dx = x[i] - mx
        dy = y[i] - my
        vx += dx * dx
        vy += dy * dy
        cov += dx * dy
    vx /= n
    vy /= n
    cov /= n
    if vx <= 0.0 or vy <= 0.0:
        return 0.0, 1.0
    r = cov / math.sqrt(vx * vy)
    if r > 1.0:
        r = 1.0
    elif r < -1.0:
        r = -1.0
    if n < 4:
        return r, 1.0
    rc = r
    if rc > 1.0 - 1e-15:
        rc = 1.0 - 1e-15
    elif rc < -1.0 + 1e-15:
        rc = -1.0 + 1e-15
    z = math.atanh(rc) * math.sqrt(n - 3.0)
    return r, _norm_sf2(z)


@njit(cache=True)
def spearman_rho(x, y):
    n = x.shape[0]
    if n < 2:
        return 0.0, 1.0
    rho, _ = pearson_r(ranks_average(x), ranks_average(y))
    z = rho * math.sqrt(n - 1.0)
    return rho, _norm_sf2(z)


@njit(cache=True)
def kmeans_1d(v, k=KMEANS_K, max_iter=KMEANS_MAX_ITER):
    n = v.shape[0]
    cents = np.empty(k, dtype=np.float64)
    found = 0
    for i in range(n):
        x = v[i]
        fresh = True
        for j in range(found):
            if cents[j] == x:
                fresh = False
                break
        if fresh:
            cents[found] = x
            found += 1
            if found == k:
                break
    for j in range(found, k):
        cents[j] = cents[found - 1]
    assign = np.zeros(n, dtype=np.int64)
    old = np.full(n, -1, dtype=np.int64)
    iters = 0
    for _ in range(max_iter):
        iters += 1
        changed = False
        for i in range(n):
            best = 0
            bd = abs(v[i] - cents[0])
            for c in range(1, k):
                d = abs(v[i] - cents[c])
                if d < bd:
                    bd = d
                    best = c
            assign[i] = best
            if best != old[i]:
                changed = True
        if not changed:
            break
        for i in range(n):
            old[i] = assign[i]
        sums = np.zeros(k, dtype=np.float64)
        counts = np.zeros(k, dtype=np.int64)
        for i in range(n):
            sums[assign[i]] += v[i]
            counts[assign[i]] += 1
        for c in range(k):
            if counts[c] > 0:
                cents[c] = sums[c] / counts[c]
    return cents, assign, iters


@njit(cache=True)
def silhouette_1d(v, assign, k):
    n = v.shape[0]
    counts = np.zeros(k, dtype=np.int64)
    for i in range(n):
        counts[assign[i]] += 1
    for c in range(k):
        if counts[c] == 0:
            return 0.0
    total = 0.0
    sums = np.empty(k, dtype=np.float64)
    for i in range(n):
        for c in range(k):
            sums[c] = 0.0
        for j in range(n):
            sums[assign[j]] += abs(v[i] - v[j])
        own = assign[i]
        if counts[own] <= 1:
            continue
        a = sums[own] / (counts[own] - 1.0)
        b = np.inf
        for c in range(k):
            if c == own:
                continue
            m = sums[c] / counts[c]
            if m < b:
                b = m
        denom = a if a > b else b
        if denom > 0:
            total += (b - a) / denom
    return total / n


@njit(cache=True)
def psi_kernel(values):
    out = np.zeros(PSI_SIZE, dtype=np.float64)
    n_total = values.shape[0]
    out[0] = n_total
    if n_total == 0:
        return out
    cnt = 0
    for i in range(n_total):
        if not np.isnan(values[i]):
            cnt += 1
    miss = n_total - cnt
    out[1] = miss
    out[2] = (n_total - miss) / n_total
    if cnt == 0:
        return out
    v = np.empty(cnt, dtype=np.float64)
    pos = 0
    for i in range(n_total):
        if not np.isnan(values[i]):
            v[pos] = values[i]
            pos += 1

    nnz = 0
    for i in range(cnt):
        if v[i] != 0.0:
            nnz += 1
    out[3] = nnz
    s = np.sort(v)
    uniq = 1
    for i in range(1, cnt):
        if s[i] != s[i - 1]:
            uniq += 1
    out[4] = uniq
    out[5] = nnz / n_total

    mn = s[0]
    mx = s[cnt - 1]
    q1, med, q3 = quartiles(v)
    iqr = q3 - q1
    out[6] = q1
    out[7] = q3
    out[8] = iqr
    lb15 = 0
    lb3 = 0
    ub15 = 0
    ub3 = 0
    for i in range(cnt):
        if v[i] < q1 - 1.5 * iqr:
            lb15 += 1
        if v[i] < q1 - 3.0 * iqr:
            lb3 += 1
        if v[i] > q3 + 1.5 * iqr:
            ub15 += 1
        if v[i] > q3 + 3.0 * iqr:
            ub3 += 1
    out[9] = lb15
    out[10] = lb3
    out[11] = ub15
    out[12] = ub3
    out[13] = lb15 + ub15
    out[14] = lb3 + ub3

    mu = np.mean(v)
    dev = v - mu
    var = 0.0
    for i in range(cnt):
        var += dev[i] * dev[i]
    var /= cnt
    sd = math.sqrt(var)
    o2 = 0
    o3 = 0
    for i in range(cnt):
        ad = abs(dev[i])
        if ad > 2.0 * sd:
            o2 += 1
        if ad > 3.0 * sd:
            o3 += 1
    out[15] = o2
    out[16] = o3

    out[17], out[18] = spearman_rho(v, s)
    out[19], out[20] = kendall_tau(v, s)
    out[21], out[22] = pearson_r(v, s)

    out[23] = mn
    out[24] = mx
    out[25] = mx - mn
    out[26] = med
    logsum = 0.0
    for i in range(cnt):
        a = abs(v[i])
        if a < _GM_EPS:
            a = _GM_EPS
        logsum += math.log(a)
    out[27] = math.exp(logsum / cnt)
    nz_count = 0
    recip = 0.0
    recip_abs = 0.0
    for i in range(cnt):
        if v[i] != 0.0:
            nz_count += 1
            recip += 1.0 / v[i]
            recip_abs += abs(1.0 / v[i])
    if nz_count > 0 and abs(recip) > 1e-12 * recip_abs:
        out[28] = nz_count / recip
    out[29] = mu
    out[30] = sd
    out[31] = var

    if sd > 0:
        powed = dev * dev * dev
        scale = sd * sd * sd
        for slot in range(32, 40):
            out[slot] = np.mean(powed) / scale
            powed = powed * dev
            scale = scale * sd
    m2 = var
    m3 = np.mean(dev ** 3)
    m4 = np.mean(dev ** 4)
    if cnt >= 3:
        out[40] = cnt * cnt * m3 / ((cnt - 1.0) * (cnt - 2.0))
    if cnt >= 4:
        out[41] = (cnt * cnt * ((cnt + 1.0) * m4 - 3.0 * (cnt - 1.0) * m2 * m2)
                   / ((cnt - 1.0) * (cnt - 2.0) * (cnt - 3.0)))

    if (q3 + q1) != 0.0:
        out[42] = iqr / (q3 + q1)
    absdev_med = np.empty(cnt, dtype=np.float64)
    for i in range(cnt):
        absdev_med[i] = abs(v[i] - med)
    out[43] = _median_sorted(np.sort(absdev_med))
    aad = 0.0
    for i in range(cnt):
        aad += abs(dev[i])
    out[44] = aad / cnt
    if mu != 0.0:
        out[45] = sd / mu
        out[46] = var / (mu * mu)
        out[47] = var / mu
    if var > 0.0:
        out[48] = mu * mu / var

    ent = 0.0
    ent2 = 0.0
    for i in range(cnt):
        if v[i] > 0.0:
            ent -= v[i] * math.log(v[i])
            ent2 -= v[i] * math.log2(v[i])
    out[49] = ent
    if cnt >= 2:
        out[50] = ent2 / math.log2(cnt)
    if mn >= 0.0:
        total = 0.0
        for i in range(cnt):
            total += s[i]
        if total > 0.0:
            acc = 0.0
            for i in range(cnt):
                acc += (2.0 * (i + 1.0) - cnt - 1.0) * s[i]
            out[51] = acc / (cnt * total)

    gap = q1 - mn
    if med - q1 > gap:
        gap = med - q1
    if q3 - med > gap:
        gap = q3 - med
    if mx - q3 > gap:
        gap = mx - q3
    out[52] = gap

    cents, assign, iters = kmeans_1d(v, KMEANS_K, KMEANS_MAX_ITER)
    cgap = 0.0
    for i in range(KMEANS_K):
        for j in range(i + 1, KMEANS_K):
            d = abs(cents[i] - cents[j])
            if d > cgap:
                cgap = d
    out[53] = cgap

    width = (mx - mn) / HIST_BINS
    hist = np.zeros(HIST_BINS, dtype=np.float64)
    if width > 0.0:
        for i in range(cnt):
            b = int((v[i] - mn) / width)
            if b > HIST_BINS - 1:
                b = HIST_BINS - 1
            hist[b] += 1.0
    else:
        hist[0] = cnt
    for b in range(HIST_BINS):
        out[54 + b] = hist[b] / cnt

    ssd = 0.0
    for i in range(cnt):
        d = v[i] - cents[assign[i]]
        ssd += d * d
    out[64] = ssd
    out[65] = silhouette_1d(v, assign, KMEANS_K)
    out[66] = iters
    return out
