"""numba-compiled kernels mirroring :mod:`compcause.kernels._numpy`."""

import numpy as np
from numba import njit


@njit(cache=True)
def _step(a, n, fresh, codes, pos, scratch):
    # a[:n] is the working sequence; it is rewritten in place.
    base = fresh + 1
    for i in range(n):
        if a[i] + 1 > base:
            base = a[i] + 1
    m = 0
    prev_counted = False
    for i in range(n - 1):
        if a[i] == a[i + 1] and i > 0 and prev_counted and a[i - 1] == a[i]:
            prev_counted = False
            continue
        prev_counted = True
        codes[m] = a[i] * base + a[i + 1]
        pos[m] = i
        m += 1
    order = np.argsort(codes[:m], kind="mergesort")
    best_code = -1
    best_count = 0
    best_first = n
    j = 0
    while j < m:
        c = codes[order[j]]
        first = pos[order[j]]
        cnt = 0
        while j < m and codes[order[j]] == c:
            cnt += 1
            j += 1
        if cnt > best_count or (cnt == best_count and first < best_first):
            best_code = c
            best_count = cnt
            best_first = first
    pa = best_code // base
    pb = best_code % base
    # Rescan for replacement with the same greedy rule.
    w = 0
    i = 0
    while i < n:
        if i < n - 1 and a[i] == pa and a[i + 1] == pb:
            scratch[w] = fresh
            i += 2
        else:
            scratch[w] = a[i]
            i += 1
        w += 1
    for i in range(w):
        a[i] = scratch[i]
    return w, pa, pb


@njit(cache=True)
def nsrps_run(a, fresh):
    work = a.astype(np.int64).copy()
    n = work.shape[0]
    codes = np.empty(max(n, 1), dtype=np.int64)
    pos = np.empty(max(n, 1), dtype=np.int64)
    scratch = np.empty(max(n, 1), dtype=np.int64)
    left = np.empty(max(n, 1), dtype=np.int64)
    right = np.empty(max(n, 1), dtype=np.int64)
    lengths = np.empty(max(n, 1), dtype=np.int64)
    it = 0
    while n > 1:
        const = True
        for i in range(1, n):
            if work[i] != work[0]:
                const = False
                break
        if const:
            break
        n, pa, pb = _step(work, n, fresh, codes, pos, scratch)
        left[it] = pa
        right[it] = pb
        lengths[it] = n
        it += 1
        fresh += 1
    return it, left[:it].copy(), right[:it].copy(), lengths[:it].copy()


@njit(cache=True)
def etc_iterations(a, fresh):
    return nsrps_run(a, fresh)[0]


def nsrps_step(a, fresh):
    work = np.asarray(a, dtype=np.int64).copy()
    n = work.shape[0]
    buf = np.empty(n, dtype=np.int64)
    w, pa, pb = _step(work, n, fresh, buf, np.empty(n, dtype=np.int64), np.empty(n, dtype=np.int64))
    return work[:w].copy(), int(pa), int(pb)


@njit(cache=True)
def _code_entropy(codes):
    m = codes.shape[0]
    srt = np.sort(codes)
    h = 0.0
    j = 0
    while j < m:
        c = srt[j]
        cnt = 0
        while j < m and srt[j] == c:
            cnt += 1
            j += 1
        p = cnt / m
        h -= p * np.log(p)
    return h


@njit(cache=True)
def window_codes(a, width, base, start, stop):
    out = np.empty(stop - start, dtype=np.int64)
    for n in range(start, stop):
        c = 0
        for j in range(n - width + 1, n + 1):
            c = c * base + a[j]
        out[n - start] = c
    return out


@njit(cache=True)
def code_entropy(codes):
    return _code_entropy(codes)


@njit(cache=True)
def te_nats(x, y, s, t, kx, ky):
    m = max(s, t)
    n_end = x.shape[0] - 1
    nxt = x[m:n_end + 1].astype(np.int64)
    xp = window_codes(x, s, kx, m - 1, n_end)
    yp = window_codes(y, t, ky, m - 1, n_end)
    ky_t = np.int64(1)
    for _ in range(t):
        ky_t *= ky
    kx_s = np.int64(1)
    for _ in range(s):
        kx_s *= kx
    h_xp = _code_entropy(xp)
    h_nxt_xp = _code_entropy(nxt * kx_s + xp)
    h_xp_yp = _code_entropy(xp * ky_t + yp)
    h_all = _code_entropy((nxt * kx_s + xp) * ky_t + yp)
    return h_nxt_xp - h_xp - h_all + h_xp_yp
