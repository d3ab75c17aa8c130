"""Distance statistics and exact recovery diagnostics on test matrices.

Conventions: the average distance ``D_avg_min`` of a matrix with columns
c_1..c_N is min over x of (1/N) sum over y of d_H(c_x, c_y), the sum
including y = x (a zero term).  ``mean_pairwise`` and ``D2`` average over
all ordered pairs including self.  With exact mode every statistic is an
exact rational.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import backend
from .concat import TestMatrix
from .errors import BudgetExceeded, InvalidParams, NotConstantWeight

EXACT_STATS_BUDGET = 2 ** 32
DISJUNCT_BUDGET = 2 ** 30
WILSON_Z = 1.959963984540054  # two-sided 95%


def wilson_interval(failures: int, trials: int, z: float = WILSON_Z):
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise InvalidParams("trials must be >= 1")
    p = failures / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = p + z2 / (2 * trials)
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials))
    return (max(0.0, (center - half) / denom),
            min(1.0, (center + half) / denom))


@dataclass(frozen=True)
class DistanceStats:
    """d_min / D_avg_min / mean_pairwise / D2 of a column set.

    Exact mode guarantees rational values and the invariants
    D_avg_min <= mean_pairwise and D2 >= mean_pairwise**2.
    """

    d_min: int
    D_avg_min: Fraction
    mean_pairwise: Fraction
    D2: Fraction
    exact: bool


def distance_stats(matrix: TestMatrix, mode: str = "exact",
                   pairs: int = 10 ** 6, seed: int = 0) -> DistanceStats:
    """Distance statistics, exact or row-sampled.

    Exact mode runs all N(N-1)/2 pairs (budget: N^2 words <= 2^32, else
    BudgetExceeded).  Sampled mode picks ceil(pairs / N) distinct columns,
    computes their full distance rows exactly, and aggregates; d_min and
    D_avg_min are then upper bounds from the sampled rows and every value is
    flagged approximate.
    """
    n = matrix.N
    if n < 2:
        zero = Fraction(0)
        return DistanceStats(0, zero, zero, zero, True)
    if mode == "exact":
        if n * n * matrix.n_words > EXACT_STATS_BUDGET:
            raise BudgetExceeded(
                f"N^2 = {n * n} pairs x {matrix.n_words} words over budget")
        d_min, row_sums, sum_d2 = backend.pairwise_stats(matrix.packed)
        return DistanceStats(
            d_min=int(d_min),
            D_avg_min=Fraction(int(row_sums.min()), n),
            mean_pairwise=Fraction(int(row_sums.sum()), n * n),
            D2=Fraction(int(sum_d2), n * n),
            exact=True,
        )
    if mode != "sampled":
        raise InvalidParams(f"mode must be 'exact' or 'sampled', got {mode!r}")

    rng = np.random.default_rng(seed)
    n_rows = min(n, max(1, -(-pairs // n)))
    rows = np.sort(rng.choice(n, size=n_rows, replace=False))
    d_min = None
    best_row_sum = None
    total = 0
    total_d2 = 0
    for x in rows:
        d = np.bitwise_count(matrix.packed[x] ^ matrix.packed).sum(
            axis=1, dtype=np.int64)
        d[x] = 0
        nz = d[d > 0]
        if nz.size:
            dm = int(nz.min())
            d_min = dm if d_min is None else min(d_min, dm)
        s = int(d.sum())
        best_row_sum = s if best_row_sum is None else min(best_row_sum, s)
        total += s
        total_d2 += int((d * d).sum())
    return DistanceStats(
        d_min=d_min if d_min is not None else 0,
        D_avg_min=Fraction(best_row_sum, n),
        mean_pairwise=Fraction(total, n_rows * n),
        D2=Fraction(total_d2, n_rows * n),
        exact=False,
    )


def _union(matrix: TestMatrix, s) -> np.ndarray:
    y = np.zeros(matrix.n_words, dtype=np.uint64)
    for j in s:
        y |= matrix.packed[j]
    return y


def is_covered(matrix: TestMatrix, s, i: int) -> bool:
    """True iff supp(column i) is inside the union of the columns in s."""
    s = sorted(set(int(j) for j in s))
    if i in s:
        raise InvalidParams(f"column {i} is in the candidate set")
    y = _union(matrix, s)
    return not np.any(matrix.packed[i] & ~y)


def is_t_disjunct(matrix: TestMatrix, t: int,
                  budget: int = DISJUNCT_BUDGET):
    """Exhaustive t-disjunctness oracle.

    Returns ``(True, None)`` or ``(False, (S, i))`` with the
    lexicographically first witness (S major, then i).  The cover-check
    count N * C(N-1, t) must stay within budget.
    """
    n = matrix.N
    if not 0 <= t < n:
        raise InvalidParams(f"need 0 <= t < N, got t={t}, N={n}")
    checks = math.comb(n, t) * (n - t)
    if checks > budget:
        raise BudgetExceeded(f"{checks} cover checks exceed budget {budget}")
    for s in itertools.combinations(range(n), t):
        y = _union(matrix, s)
        uncovered = np.zeros(n, dtype=bool)
        for w in range(matrix.n_words):
            uncovered |= (matrix.packed[:, w] & ~y[w]) != 0
        uncovered[list(s)] = True
        if not uncovered.all():
            i = int(np.nonzero(~uncovered)[0][0])
            return False, (s, i)
    return True, None


def estimate_epsilon(matrix: TestMatrix, t: int, trials: int, seed: int):
    """Empirical failure rate over uniform t-subsets (a failure is a trial
    with at least one covered non-defective column)."""
    if not 1 <= t < matrix.N:
        raise InvalidParams(f"need 1 <= t < N, got t={t}, N={matrix.N}")
    if trials < 1:
        raise InvalidParams("trials must be >= 1")
    fp, _ = backend.experiment_trials(
        matrix.packed, t, trials, seed, 2, 0)
    failures = int((fp > 0).sum())
    return {
        "failure_rate": failures / trials,
        "failures": failures,
        "trials": trials,
        "wilson_95_interval": wilson_interval(failures, trials),
    }


def cover_margin(matrix: TestMatrix, s, i: int) -> int:
    """Sum over j in s of (w - d_H(col_i, col_j)/2) for a constant-weight
    matrix; below w it certifies that column i is not covered."""
    w = matrix.meta.get("w")
    if not w:
        raise NotConstantWeight("matrix has no constant-weight metadata")
    s = sorted(set(int(j) for j in s))
    if i in s:
        raise InvalidParams(f"column {i} is in the candidate set")
    margin = 0
    for j in s:
        d = int(np.bitwise_count(
            matrix.packed[i] ^ matrix.packed[j]).sum())
        # equal-weight columns are at even distance
        margin += w - d // 2
    return margin
