"""Pure-numpy implementations of the hot kernels.

Reference semantics for the numba backend: both backends must produce
bit-identical results for identical inputs (the RNG streams are defined
here and mirrored exactly in :mod:`gtcodes.kernels_numba`).

RNG: SplitMix64 (Steele, Lea, Flood 2014).  A trial with index ``i`` under
master seed ``s`` uses the stream whose initial state is
``mix64(s XOR (i+1) * PHI)``; successive outputs advance the state by
``GAMMA`` and scramble it with the standard finalizer.  Constants:

    GAMMA = 0x9E3779B97F4A7C15
    PHI   = 0xD1B54A32D192ED03
    MIX1  = 0xBF58476D1CE4E5B9
    MIX2  = 0x94D049BB133111EB
"""

from __future__ import annotations

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
PHI = 0xD1B54A32D192ED03
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

_U64 = np.uint64
_MASK64 = (1 << 64) - 1


def mix64(z: int) -> int:
    """Scalar SplitMix64 finalizer on python ints (mod 2^64)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * MIX2) & _MASK64
    return z ^ (z >> 31)


def trial_state(seed: int, trial: int) -> int:
    return mix64((seed ^ ((trial + 1) * PHI)) & _MASK64)


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U64(30))) * _U64(MIX1)
    z = (z ^ (z >> _U64(27))) * _U64(MIX2)
    return z ^ (z >> _U64(31))


def _next_vec(states: np.ndarray):
    """Advance a batch of SplitMix64 states; returns (new_states, outputs)."""
    states = states + _U64(GAMMA)
    return states, _mix64_vec(states.copy())


# ---------------------------------------------------------------------------
# GV greedy fill (method of conditional expectations)
# ---------------------------------------------------------------------------

def gv_greedy_fill(q, k, m, num_msgs, d_target, tail, strides, p, e,
                   exp_table, log_table, order, group_start):
    """Fill a k x m generator matrix entry by entry, column-major.

    ``tail[r, T]`` must hold Pr[Binomial(r, 1-1/q) <= T] for
    ``0 <= r <= m`` and ``0 <= T <= d_target``.  ``order`` lists the nonzero
    message indices sorted by last-nonzero-row; ``group_start[i]`` slices the
    block whose last nonzero row is ``i``.

    Returns the int64 generator matrix.
    """
    G = np.zeros((k, m), dtype=np.int64)
    idx = np.arange(num_msgs, dtype=np.int64)
    digits = np.stack([(idx // strides[i]) % q for i in range(k)])
    partial = np.zeros(num_msgs, dtype=np.int64)
    ndet = np.zeros(num_msgs, dtype=np.int64)

    def fmul(a, v):
        if v == 0:
            return np.zeros_like(a)
        out = exp_table[log_table[a] + log_table[v]]
        return np.where(a == 0, 0, out)

    def fadd(a, b):
        if e == 1:
            return (a + b) % p
        return np.bitwise_xor(a, b)

    for j in range(m):
        partial[:] = 0
        r = m - 1 - j
        for i in range(k):
            grp = order[group_start[i]:group_start[i + 1]]
            di = digits[i, grp]
            pu = partial[grp]
            nu = ndet[grp]
            best_v = 0
            best_score = np.inf
            for v in range(q):
                c = fadd(pu, fmul(di, v))
                T = d_target - 1 - (nu + (c != 0))
                terms = np.where(
                    T < 0, 0.0,
                    np.where(T >= r, 1.0, tail[r, np.clip(T, 0, d_target)]),
                )
                # serial left-to-right summation, bit-identical to the
                # numba backend's accumulator
                score = terms.cumsum()[-1] if terms.size else 0.0
                if score < best_score:
                    best_score = score
                    best_v = v
            G[i, j] = best_v
            partial = fadd(partial, fmul(digits[i], best_v))
            cfin = partial[grp]
            ndet[grp] = nu + (cfin != 0)
    return G


# ---------------------------------------------------------------------------
# Pairwise Hamming distance statistics on bit-packed columns
# ---------------------------------------------------------------------------

def pairwise_stats(packed: np.ndarray):
    """Exact pairwise distances over all unordered column pairs.

    Returns ``(d_min, row_sums, sum_d2)`` where ``row_sums[x]`` is the sum of
    distances from column x to every column (self term 0) and ``sum_d2`` is
    the sum of squared distances over all ordered pairs.
    """
    n = packed.shape[0]
    row_sums = np.zeros(n, dtype=np.int64)
    sum_d2 = 0
    d_min = np.iinfo(np.int64).max
    for x in range(n - 1):
        d = np.bitwise_count(packed[x] ^ packed[x + 1:]).sum(
            axis=1, dtype=np.int64)
        row_sums[x] += int(d.sum())
        row_sums[x + 1:] += d
        sum_d2 += 2 * int((d * d).sum())
        dm = int(d.min())
        if dm < d_min:
            d_min = dm
    return int(d_min), row_sums, int(sum_d2)


# ---------------------------------------------------------------------------
# Monte Carlo recovery trials
# ---------------------------------------------------------------------------

_BLOCK = 256


def experiment_trials(packed, t, trials, seed, model_kind, bern_threshold):
    """Run recovery trials; returns (false_positive_count, defective_count).

    Both are int64 arrays of length ``trials``.  A trial draws a defective
    set S (model 1: per-item Bernoulli with 64-bit threshold
    ``bern_threshold``; model 2: uniform t-subset via partial Fisher-Yates),
    forms the OR of the defective columns and counts the non-defective
    columns whose support is covered.
    """
    n, n_words = packed.shape
    fp = np.zeros(trials, dtype=np.int64)
    ssize = np.zeros(trials, dtype=np.int64)
    thr = _U64(bern_threshold)

    for lo in range(0, trials, _BLOCK):
        hi = min(lo + _BLOCK, trials)
        b = hi - lo
        tau = np.arange(lo, hi, dtype=np.uint64)
        states = _mix64_vec(
            _U64(seed) ^ (tau + _U64(1)) * _U64(PHI))
        in_s = np.zeros((b, n), dtype=bool)
        if model_kind == 1:
            for item in range(n):
                states, u = _next_vec(states)
                in_s[:, item] = u < thr
        else:
            perm = np.tile(np.arange(n, dtype=np.int64), (b, 1))
            rows = np.arange(b)
            for i in range(t):
                states, u = _next_vec(states)
                j = i + (u % _U64(n - i)).astype(np.int64)
                tmp = perm[rows, j].copy()
                perm[rows, j] = perm[rows, i]
                perm[rows, i] = tmp
            in_s[rows[:, None], perm[:, :t]] = True
        ssize[lo:hi] = in_s.sum(axis=1)

        y = np.zeros((b, n_words), dtype=np.uint64)
        for trial in range(b):
            cols = np.nonzero(in_s[trial])[0]
            if cols.size:
                y[trial] = np.bitwise_or.reduce(packed[cols], axis=0)
        # column i is covered iff every word of col_i AND NOT y is zero;
        # accumulate word by word to keep the intermediate at (block, n)
        uncovered = np.zeros((b, n), dtype=bool)
        for w in range(n_words):
            uncovered |= (packed[:, w][None, :] & ~y[:, w][:, None]) != 0
        fp[lo:hi] = (~uncovered & ~in_s).sum(axis=1)
    return fp, ssize
