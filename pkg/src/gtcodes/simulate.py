"""Random defective models, the cover decoder, and recovery experiments.

Model 1 marks every item defective independently with probability t/N;
model 2 draws a uniform t-subset.  The decoder removes each item that
appears in any negative test; it never produces false negatives, so a
trial fails exactly when some non-defective column is covered by the union
of the defective columns.

All randomness comes from SplitMix64 substreams keyed by (seed, trial), so
reports are bit-for-bit reproducible and independent of thread count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .analysis import wilson_interval
from .concat import TestMatrix
from .errors import InvalidParams
from .kernels_numpy import GAMMA, PHI, mix64, trial_state

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class DefectiveModel:
    """kind 1: iid Bernoulli(t/N) per item; kind 2: uniform t-subset."""

    kind: int
    N: int
    t: int

    def __post_init__(self):
        if self.kind not in (1, 2):
            raise InvalidParams(f"model kind must be 1 or 2, got {self.kind}")
        # kind 2 tolerates the degenerate t = N (the only subset is [N])
        limit = self.N if self.kind == 2 else self.N - 1
        if not 1 <= self.t <= limit:
            raise InvalidParams(f"need 1 <= t < N, got t={self.t}, N={self.N}")

    def bern_threshold(self) -> int:
        """64-bit acceptance threshold: u < floor(t * 2^64 / N)."""
        return (self.t << 64) // self.N


@dataclass(frozen=True)
class TrialReport:
    trials: int
    exact_recoveries: int
    mean_false_positives: float
    max_false_positives: int
    seed: int
    wilson_95: tuple[float, float]
    mean_defectives: float
    max_defectives: int

    @property
    def failure_rate(self) -> float:
        return 1.0 - self.exact_recoveries / self.trials


def draw_defectives(model: DefectiveModel, seed: int, trial: int = 0):
    """Defective set for one trial, identical to the kernel's stream."""
    state = trial_state(seed, trial)
    out = []
    if model.kind == 1:
        thr = model.bern_threshold()
        for item in range(model.N):
            state = (state + GAMMA) & _MASK64
            if mix64(state) < thr:
                out.append(item)
        return out
    perm = list(range(model.N))
    for i in range(model.t):
        state = (state + GAMMA) & _MASK64
        j = i + mix64(state) % (model.N - i)
        perm[i], perm[j] = perm[j], perm[i]
    return sorted(perm[:model.t])


def test_outcomes(matrix: TestMatrix, s) -> np.ndarray:
    """Boolean OR of the columns in s, as packed uint64 words."""
    y = np.zeros(matrix.n_words, dtype=np.uint64)
    for j in s:
        y |= matrix.packed[j]
    return y


def naive_decode(matrix: TestMatrix, y: np.ndarray):
    """Items surviving every negative test: i survives iff
    supp(col_i) is inside supp(y)."""
    keep = np.ones(matrix.N, dtype=bool)
    for w in range(matrix.n_words):
        keep &= (matrix.packed[:, w] & ~y[w]) == 0
    return [int(i) for i in np.nonzero(keep)[0]]


def run_experiment(matrix: TestMatrix, model: DefectiveModel, trials: int,
                   seed: int, threads: int | None = None) -> TrialReport:
    """Monte Carlo recovery experiment; deterministic given (matrix, model,
    trials, seed).  A trial is an exact recovery iff it produces zero false
    positives (the decoder never drops a defective)."""
    if trials < 1:
        raise InvalidParams("trials must be >= 1")
    if model.N != matrix.N:
        raise InvalidParams(
            f"model N = {model.N} does not match matrix N = {matrix.N}")
    backend.set_threads(threads)
    fp, ssize = backend.experiment_trials(
        matrix.packed, model.t, trials, seed, model.kind,
        model.bern_threshold() if model.kind == 1 else 0)
    failures = int((fp > 0).sum())
    return TrialReport(
        trials=trials,
        exact_recoveries=trials - failures,
        mean_false_positives=float(fp.mean()),
        max_false_positives=int(fp.max()),
        seed=seed,
        wilson_95=wilson_interval(failures, trials),
        mean_defectives=float(ssize.mean()),
        max_defectives=int(ssize.max()),
    )
