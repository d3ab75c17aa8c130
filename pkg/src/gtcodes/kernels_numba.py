"""Numba-accelerated hot kernels.

Semantics (including RNG streams) are defined by
:mod:`gtcodes.kernels_numpy`; this module must stay bit-identical to it.
Trial loops use ``prange`` with per-trial output slots, so results do not
depend on the thread count.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

from .kernels_numpy import GAMMA, MIX1, MIX2, PHI

_GAMMA = np.uint64(GAMMA)
_PHI = np.uint64(PHI)
_MIX1 = np.uint64(MIX1)
_MIX2 = np.uint64(MIX2)
_ONE = np.uint64(1)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)

_P1 = np.uint64(0x5555555555555555)
_P2 = np.uint64(0x3333333333333333)
_P3 = np.uint64(0x0F0F0F0F0F0F0F0F)
_P4 = np.uint64(0x0101010101010101)
_S1 = np.uint64(1)
_S2 = np.uint64(2)
_S4 = np.uint64(4)
_S56 = np.uint64(56)


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> _S1) & _P1)
    x = (x & _P2) + ((x >> _S2) & _P2)
    x = (x + (x >> _S4)) & _P3
    return (x * _P4) >> _S56


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def _next(state):
    state = state + _GAMMA
    return state, _mix64(state)


@njit(cache=True)
def _gv_greedy_fill(q, k, m, num_msgs, d_target, tail, strides, p, e,
                    exp_table, log_table, order, group_start):
    G = np.zeros((k, m), dtype=np.int64)
    digits = np.zeros((k, num_msgs), dtype=np.int64)
    for i in range(k):
        for u in range(num_msgs):
            digits[i, u] = (u // strides[i]) % q
    partial = np.zeros(num_msgs, dtype=np.int64)
    ndet = np.zeros(num_msgs, dtype=np.int64)
    scores = np.zeros(q, dtype=np.float64)

    for j in range(m):
        partial[:] = 0
        r = m - 1 - j
        for i in range(k):
            for v in range(q):
                scores[v] = 0.0
            for gi in range(group_start[i], group_start[i + 1]):
                u = order[gi]
                pu = partial[u]
                di = digits[i, u]
                nu = ndet[u]
                ld = log_table[di]
                for v in range(q):
                    if v == 0:
                        c = pu
                    else:
                        prod = exp_table[ld + log_table[v]]
                        if e == 1:
                            c = (pu + prod) % p
                        else:
                            c = pu ^ prod
                    if c != 0:
                        t_idx = d_target - 2 - nu
                    else:
                        t_idx = d_target - 1 - nu
                    if t_idx < 0:
                        continue
                    if t_idx >= r:
                        scores[v] += 1.0
                    else:
                        scores[v] += tail[r, t_idx]
            best_v = 0
            best_score = scores[0]
            for v in range(1, q):
                if scores[v] < best_score:
                    best_score = scores[v]
                    best_v = v
            G[i, j] = best_v
            if best_v != 0:
                lv = log_table[best_v]
                for u in range(1, num_msgs):
                    di = digits[i, u]
                    if di != 0:
                        prod = exp_table[log_table[di] + lv]
                        if e == 1:
                            partial[u] = (partial[u] + prod) % p
                        else:
                            partial[u] = partial[u] ^ prod
            for gi in range(group_start[i], group_start[i + 1]):
                u = order[gi]
                if partial[u] != 0:
                    ndet[u] += 1
    return G


def gv_greedy_fill(q, k, m, num_msgs, d_target, tail, strides, p, e,
                   exp_table, log_table, order, group_start):
    return _gv_greedy_fill(q, k, m, num_msgs, d_target, tail, strides, p, e,
                           exp_table, log_table, order, group_start)


@njit(cache=True)
def _pairwise_stats(packed):
    n, n_words = packed.shape
    row_sums = np.zeros(n, dtype=np.int64)
    sum_d2 = np.int64(0)
    d_min = np.int64(np.iinfo(np.int64).max)
    for x in range(n - 1):
        for y in range(x + 1, n):
            d = np.int64(0)
            for w in range(n_words):
                d += np.int64(_popcount(packed[x, w] ^ packed[y, w]))
            row_sums[x] += d
            row_sums[y] += d
            sum_d2 += 2 * d * d
            if d < d_min:
                d_min = d
    return d_min, row_sums, sum_d2


def pairwise_stats(packed):
    d_min, row_sums, sum_d2 = _pairwise_stats(packed)
    return int(d_min), row_sums, int(sum_d2)


@njit(cache=True, parallel=True)
def _experiment_trials(packed, t, trials, seed, model_kind, bern_threshold):
    n, n_words = packed.shape
    fp = np.zeros(trials, dtype=np.int64)
    ssize = np.zeros(trials, dtype=np.int64)
    for trial in prange(trials):
        state = _mix64(seed ^ (np.uint64(trial) + _ONE) * _PHI)
        in_s = np.zeros(n, dtype=np.bool_)
        y = np.zeros(n_words, dtype=np.uint64)
        cnt = 0
        if model_kind == 1:
            for item in range(n):
                state, u = _next(state)
                if u < bern_threshold:
                    in_s[item] = True
                    cnt += 1
                    for w in range(n_words):
                        y[w] |= packed[item, w]
        else:
            perm = np.arange(n)
            for i in range(t):
                state, u = _next(state)
                j = i + np.int64(u % np.uint64(n - i))
                tmp = perm[j]
                perm[j] = perm[i]
                perm[i] = tmp
            for i in range(t):
                item = perm[i]
                in_s[item] = True
                for w in range(n_words):
                    y[w] |= packed[item, w]
            cnt = t
        f = 0
        for i in range(n):
            if in_s[i]:
                continue
            covered = True
            for w in range(n_words):
                if packed[i, w] & ~y[w]:
                    covered = False
                    break
            if covered:
                f += 1
        fp[trial] = f
        ssize[trial] = cnt
    return fp, ssize


def experiment_trials(packed, t, trials, seed, model_kind, bern_threshold):
    return _experiment_trials(packed, np.int64(t), np.int64(trials),
                              np.uint64(seed), np.int64(model_kind),
                              np.uint64(bern_threshold))
