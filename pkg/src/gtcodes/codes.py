"""q-ary linear codes: Reed-Solomon evaluation codes and greedy
derandomized constructions meeting the Gilbert-Varshamov distance target.

A code is stored as a k x m generator matrix over GF(q).  Codewords are
indexed by message number; message ``j`` has base-q digits of ``j``, most
significant digit first, as its message vector, so column order of any
derived test matrix is the lexicographic message order.

A code may represent a *subgroup* of the full message space: over GF(2^e)
the first ``2^a`` message indices form an additive subgroup (the index bits
are the concatenated digit bits), so restricting to them keeps linearity
and with it the weight/distance equivalence.  ``size`` below is the number
of codewords actually in the code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import backend
from .errors import BudgetExceeded, Infeasible, InvalidParams, ParseError
from .field import FieldSpec, build_field_cached

EXACT_TAIL_MAX_TRIALS = 64
MIN_DISTANCE_BUDGET = 2 ** 24
_VERIFY_BUDGET = 2 ** 26


# ---------------------------------------------------------------------------
# Binomial tails
# ---------------------------------------------------------------------------

def binomial_tail_fraction(r: int, q: int, threshold: int) -> Fraction:
    """Exact Pr[Binomial(r, 1 - 1/q) <= threshold] as a rational."""
    if threshold < 0:
        return Fraction(0)
    threshold = min(threshold, r)
    num = 0
    for i in range(threshold + 1):
        num += math.comb(r, i) * (q - 1) ** i
    return Fraction(num, q ** r)


def _binomial_tail_log(r: int, q: int, threshold: int) -> float:
    """Log-space summation; absolute error well below 1e-12."""
    log_q = math.log(q)
    log_q1 = math.log(q - 1) if q > 2 else 0.0
    logs = [
        math.lgamma(r + 1) - math.lgamma(i + 1) - math.lgamma(r - i + 1)
        + i * log_q1 - r * log_q
        for i in range(threshold + 1)
    ]
    peak = max(logs)
    if peak == -math.inf:
        return 0.0
    return math.exp(peak) * math.fsum(math.exp(x - peak) for x in logs)


def binomial_tail(r: int, q: int, threshold: int) -> float:
    """Pr[Binomial(r, 1 - 1/q) <= threshold].

    Exact rational arithmetic for r <= 64, log-space floating summation
    above (documented absolute error bound 1e-12).
    """
    if r < 0:
        raise InvalidParams(f"negative trial count {r}")
    if threshold < 0:
        return 0.0
    threshold = min(threshold, r)
    if r <= EXACT_TAIL_MAX_TRIALS:
        return float(binomial_tail_fraction(r, q, threshold))
    return min(1.0, _binomial_tail_log(r, q, threshold))


def _tail_table(m: int, q: int, d_target: int) -> np.ndarray:
    """tail[r, T] = Pr[Binomial(r, 1-1/q) <= T] for T <= d_target.

    The truncated DP is exact: weight is nondecreasing in r, so mass above
    d_target never flows back.
    """
    p1 = (q - 1) / q
    p0 = 1.0 / q
    width = d_target + 1
    pmf = np.zeros(width)
    pmf[0] = 1.0
    tail = np.zeros((m + 1, width))
    tail[0] = 1.0
    for r in range(1, m + 1):
        nxt = pmf * p0
        nxt[1:] += pmf[:-1] * p1
        pmf = nxt
        tail[r] = np.cumsum(pmf)
    return tail


# ---------------------------------------------------------------------------
# LinearCode
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearCode:
    """q-ary linear code given by a generator matrix.

    ``size`` is the number of codewords: ``q**k`` for the full code, or a
    power of two for a subgroup code over GF(2^e) (first ``size`` message
    indices).  ``d_claimed`` is the distance the construction promises;
    it is verified exactly where enumeration is affordable.
    """

    field: FieldSpec
    m: int
    k: int
    generator: np.ndarray
    d_claimed: int | None = None
    size: int = 0

    def __post_init__(self):
        q = self.field.q
        full = q ** self.k
        size = self.size or full
        object.__setattr__(self, "size", size)
        gen = np.ascontiguousarray(self.generator, dtype=np.int64)
        object.__setattr__(self, "generator", gen)
        if gen.shape != (self.k, self.m):
            raise InvalidParams(
                f"generator shape {gen.shape} != ({self.k}, {self.m})")
        if gen.min() < 0 or gen.max() >= q:
            raise InvalidParams("generator entries outside [0, q)")
        if not np.all(gen.any(axis=0)):
            raise InvalidParams("generator has an all-zero column")
        if size > full:
            raise InvalidParams(f"size {size} exceeds q^k = {full}")
        if size < full:
            if self.field.p != 2 or size & (size - 1):
                raise InvalidParams(
                    "subgroup codes need characteristic 2 and a power-of-two size")
            a = size.bit_length() - 1
            if not (self.k - 1) * self.field.e < a <= self.k * self.field.e:
                raise InvalidParams(
                    f"subgroup size 2^{a} incompatible with k={self.k} over {self.field}")

    @property
    def q(self) -> int:
        return self.field.q

    def strides(self) -> np.ndarray:
        return np.array(
            [self.q ** (self.k - 1 - i) for i in range(self.k)], dtype=np.int64)

    def message_digits(self, lo: int = 0, hi: int | None = None) -> np.ndarray:
        """Digit matrix (k, count) for message indices [lo, hi)."""
        hi = self.size if hi is None else hi
        idx = np.arange(lo, hi, dtype=np.int64)
        return np.stack([(idx // s) % self.q for s in self.strides()])

    def codeword_symbols(self, lo: int = 0, hi: int | None = None) -> np.ndarray:
        """Codewords (count, m) for message indices [lo, hi)."""
        hi = self.size if hi is None else hi
        digits = self.message_digits(lo, hi)
        acc = np.zeros((hi - lo, self.m), dtype=np.int64)
        for i in range(self.k):
            term = self.field.mul_vec(digits[i][:, None], self.generator[i][None, :])
            acc = self.field.add_vec(acc, term)
        return acc


def min_distance_exact(code: LinearCode, budget: int = MIN_DISTANCE_BUDGET) -> int:
    """Exact minimum distance by enumerating all nonzero codewords.

    By linearity this equals the minimum nonzero-codeword weight (subgroup
    codes are closed under addition, so the argument survives restriction).
    """
    if code.size * code.m > budget:
        raise BudgetExceeded(
            f"{code.size} codewords x {code.m} coordinates exceeds budget {budget}")
    best = code.m + 1
    chunk = max(1, 2 ** 16 // max(code.m, 1))
    for lo in range(1, code.size, chunk):
        hi = min(lo + chunk, code.size)
        weights = np.count_nonzero(code.codeword_symbols(lo, hi), axis=1)
        best = min(best, int(weights.min()))
    if best > code.m:
        raise InvalidParams("code has no nonzero codeword")
    return best


# ---------------------------------------------------------------------------
# Reed-Solomon evaluation codes
# ---------------------------------------------------------------------------

def rs_generate(field: FieldSpec, k: int, n: int) -> LinearCode:
    """Evaluation code of polynomials of degree < k at the first n field
    elements; MDS with minimum distance n - k + 1."""
    if not 1 <= k <= n:
        raise InvalidParams(f"need 1 <= k <= n, got k={k}, n={n}")
    if n > field.q:
        raise InvalidParams(f"length {n} exceeds field size {field.q}")
    gen = np.zeros((k, n), dtype=np.int64)
    for j in range(n):
        for i in range(k):
            gen[i, j] = field.pow(j, i)
    return LinearCode(field=field, m=n, k=k, generator=gen, d_claimed=n - k + 1)


# ---------------------------------------------------------------------------
# Gilbert-Varshamov greedy construction
# ---------------------------------------------------------------------------

def gv_feasible_size(field: FieldSpec, m: int, d_target: int) -> int:
    """Largest code size S with (S - 1) * Pr[Bin(m, 1-1/q) <= d_target-1] < 1.

    Exact rational comparison, so a borderline potential never flips on
    rounding.  Returns 1 when even two codewords are infeasible.
    """
    tail = binomial_tail_fraction(m, field.q, d_target - 1)
    if tail == 0:
        return field.q ** m
    # S - 1 < 1/tail
    bound = tail.denominator // tail.numerator
    if (tail.denominator % tail.numerator) == 0:
        bound -= 1  # strict inequality
    return bound + 1


def max_feasible_k(field: FieldSpec, m: int, d_target: int, k_cap: int = 64) -> int:
    """Largest k with (q^k - 1) * tail < 1 (0 when infeasible even at k=1)."""
    limit = gv_feasible_size(field, m, d_target)
    k = 0
    size = 1
    while k < k_cap and size * field.q <= limit:
        size *= field.q
        k += 1
    return k


def gv_construct(field: FieldSpec, m: int, d_target: int,
                 k: int | None = None, size: int | None = None,
                 verify: bool = True) -> LinearCode:
    """Deterministic generator matrix whose nonzero codewords all have
    weight >= d_target, by the method of conditional expectations.

    Entries are fixed one at a time, column-major, each set to the value
    minimizing the expected number of underweight codewords (ties broken by
    the smallest canonical element).  The potential starts below 1 by the
    GV feasibility precondition and never increases, so the finished code
    has no codeword under the target.

    ``k`` picks the dimension (default: largest GV-feasible).  ``size``
    instead requests a power-of-two subgroup code over GF(2^e), whose
    feasibility precondition is the milder (size - 1) * tail < 1.
    """
    q = field.q
    if d_target > m:
        raise Infeasible(f"distance target {d_target} exceeds length {m}")
    if k is not None and size is not None:
        raise InvalidParams("pass at most one of k and size")

    if d_target <= 1:
        kk = k if k is not None else m
        return LinearCode(field=field, m=m, k=kk,
                          generator=np.eye(kk, m, dtype=np.int64), d_claimed=max(d_target, 1))

    limit = gv_feasible_size(field, m, d_target)
    if size is None:
        if k is None:
            k = max_feasible_k(field, m, d_target)
            if k == 0:
                raise Infeasible(
                    f"GV precondition fails at k=1 for q={q}, m={m}, d={d_target}")
        elif q ** k > limit:
            raise Infeasible(
                f"k={k} infeasible: q^k = {q ** k} > GV limit {limit}")
        size = q ** k
    else:
        if size > limit:
            raise Infeasible(
                f"size {size} exceeds GV limit {limit} for q={q}, m={m}, d={d_target}")
        if field.p != 2 or size < 2 or size & (size - 1):
            raise InvalidParams(
                "explicit size requires characteristic 2 and a power of two >= 2")
        a = size.bit_length() - 1
        k = -(-a // field.e)

    strides = np.array([q ** (k - 1 - i) for i in range(k)], dtype=np.int64)
    idx = np.arange(size, dtype=np.int64)
    lastnz = np.full(size, -1, dtype=np.int64)
    for i in range(k):
        lastnz[((idx // strides[i]) % q) != 0] = i
    order = np.argsort(lastnz, kind="stable").astype(np.int64)[1:]  # drop msg 0
    counts = np.bincount(lastnz[1:], minlength=k)
    group_start = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)

    tail = _tail_table(m, q, d_target)
    gen = backend.gv_greedy_fill(
        q, k, m, size, d_target, tail, strides, field.p, field.e,
        field.exp_table, field.log_table, order, group_start)

    # a column left all-zero (possible when the potential hit 0 early and
    # ties defaulted to 0) would break the no-zero-coordinate invariant;
    # setting one entry can only raise weights
    for j in range(m):
        if not gen[:, j].any():
            gen[0, j] = 1

    code = LinearCode(field=field, m=m, k=k, generator=gen,
                      d_claimed=d_target, size=size)
    if verify and size * m <= _VERIFY_BUDGET:
        d = min_distance_exact(code, budget=_VERIFY_BUDGET)
        if d < d_target:
            raise RuntimeError(
                f"greedy construction missed target: got {d} < {d_target}")
    return code


# ---------------------------------------------------------------------------
# Generator serialization (text format: header "q k m [size]", k rows)
# ---------------------------------------------------------------------------

def code_to_text(code: LinearCode) -> str:
    header = f"{code.q} {code.k} {code.m}"
    if code.size != code.q ** code.k:
        header += f" {code.size}"
    rows = [" ".join(str(int(x)) for x in row) for row in code.generator]
    return "\n".join([header] + rows) + "\n"


def code_from_text(text: str) -> LinearCode:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty generator file", line=1)
    head = lines[0].split()
    if len(head) not in (3, 4):
        raise ParseError("header must be 'q k m [size]'", line=1)
    try:
        q, k, m = int(head[0]), int(head[1]), int(head[2])
        size = int(head[3]) if len(head) == 4 else 0
    except ValueError:
        raise ParseError("non-integer header field", line=1)
    field = build_field_cached(q)
    gen = np.zeros((k, m), dtype=np.int64)
    if len(lines) < k + 1:
        raise ParseError(f"expected {k} generator rows", line=len(lines) + 1)
    for i in range(k):
        parts = lines[1 + i].split()
        if len(parts) != m:
            raise ParseError(f"expected {m} entries", line=2 + i)
        for j, tok in enumerate(parts):
            try:
                gen[i, j] = int(tok)
            except ValueError:
                raise ParseError(f"bad entry {tok!r}", line=2 + i, column=j + 1)
    return LinearCode(field=field, m=m, k=k, generator=gen, size=size)
