"""Pure-numpy kernels. Reference path and fallback when numba is disabled."""

import numpy as np


def counted_pairs(a):
    """Mask of pair positions kept by a greedy left-to-right non-overlapping scan.

    Pairs of distinct symbols can never overlap with another occurrence of
    themselves, so only runs of a repeated symbol need thinning: inside a run
    the pair starting at offset 0, 2, 4, ... is counted.
    """
    n = a.shape[0] - 1
    eq = a[:-1] == a[1:]
    idx = np.arange(n)
    starts = eq & np.concatenate(([True], ~eq[:-1]))
    run_start = np.maximum.accumulate(np.where(starts, idx, -1))
    return ~eq | ((idx - run_start) % 2 == 0)


def nsrps_step(a, fresh):
    """One pair substitution. ``a`` must hold at least two distinct symbols."""
    a = np.asarray(a, dtype=np.int64)
    counted = counted_pairs(a)
    base = max(int(a.max()), int(fresh)) + 1
    codes = a[:-1] * base + a[1:]
    pos = np.flatnonzero(counted)
    uniq, first, counts = np.unique(codes[pos], return_index=True, return_counts=True)
    ties = counts == counts.max()
    k = int(np.argmin(np.where(ties, pos[first], np.iinfo(np.int64).max)))
    pa, pb = divmod(int(uniq[k]), base)
    hit = counted & (codes == uniq[k])
    starts = np.flatnonzero(hit)
    out = a.copy()
    out[starts] = fresh
    out = np.delete(out, starts + 1)
    return out, pa, pb


def nsrps_run(a, fresh):
    """Iterate pair substitution until the sequence is constant.

    Returns ``(iterations, pair_left, pair_right, lengths)`` where the arrays
    hold one entry per iteration.
    """
    a = np.asarray(a, dtype=np.int64)
    left, right, lengths = [], [], []
    while a.shape[0] > 1 and np.any(a != a[0]):
        a, pa, pb = nsrps_step(a, fresh)
        left.append(pa)
        right.append(pb)
        lengths.append(a.shape[0])
        fresh += 1
    return (
        len(lengths),
        np.asarray(left, dtype=np.int64),
        np.asarray(right, dtype=np.int64),
        np.asarray(lengths, dtype=np.int64),
    )


def etc_iterations(a, fresh):
    return nsrps_run(a, fresh)[0]


def window_codes(a, width, base, start, stop):
    """Composite integer code of ``a[n-width+1 .. n]`` for ``n`` in ``[start, stop)``."""
    a = np.asarray(a, dtype=np.int64)
    win = np.lib.stride_tricks.sliding_window_view(a, width)[start - width + 1 : stop - width + 1]
    weights = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return win @ weights


def code_entropy(codes):
    """Plug-in entropy in nats of the empirical distribution of ``codes``."""
    _, counts = np.unique(codes, return_counts=True)
    p = counts / codes.shape[0]
    return float(-np.sum(p * np.log(p)))


def te_nats(x, y, s, t, kx, ky):
    """Plug-in transfer entropy y -> x in nats with uniform histories."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    m = max(s, t)
    n_end = x.shape[0] - 1
    nxt = x[m:n_end + 1]
    xp = window_codes(x, s, kx, m - 1, n_end)
    yp = window_codes(y, t, ky, m - 1, n_end)
    ky_t = ky ** t
    kx_s = kx ** s
    h_xp = code_entropy(xp)
    h_nxt_xp = code_entropy(nxt * kx_s + xp)
    h_xp_yp = code_entropy(xp * ky_t + yp)
    h_all = code_entropy((nxt * kx_s + xp) * ky_t + yp)
    return h_nxt_xp - h_xp - h_all + h_xp_yp
