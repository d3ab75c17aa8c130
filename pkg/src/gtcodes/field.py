"""Exact arithmetic over GF(q) for prime q and GF(2^e).

Elements are canonical integers in ``[0, q)``.  For an extension field
GF(2^e) the integer's binary digits are the coefficients of the polynomial
representative (bit ``i`` is the coefficient of ``x^i``).  For a prime field
the integer is the usual residue.

Multiplication in extension fields goes through log/antilog tables indexed
by a fixed generator of the multiplicative group, so a ``FieldSpec`` is
cheap to share and every operation is pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DivisionByZero, NotPrimePower

MAX_EXTENSION_DEGREE = 16


def _factorize(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def _gf2_poly_mod(a: int, mod: int) -> int:
    """Reduce the GF(2)[x] polynomial ``a`` modulo ``mod`` (bit encodings)."""
    deg_mod = mod.bit_length() - 1
    while a.bit_length() - 1 >= deg_mod:
        a ^= mod << (a.bit_length() - 1 - deg_mod)
    return a


def _gf2_poly_mulmod(a: int, b: int, mod: int) -> int:
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        a = _gf2_poly_mod(a, mod)
    return acc


def _gf2_irreducible(poly: int, e: int) -> bool:
    """Trial division by every polynomial of degree 1..e//2."""
    for deg in range(1, e // 2 + 1):
        for divisor in range(1 << deg, 1 << (deg + 1)):
            # polynomial long division of poly by divisor, remainder only
            rem = poly
            while rem.bit_length() - 1 >= deg:
                rem ^= divisor << (rem.bit_length() - 1 - deg)
            if rem == 0:
                return False
    return True


def _smallest_irreducible(e: int) -> int:
    for poly in range(1 << e, 1 << (e + 1)):
        if _gf2_irreducible(poly, e):
            return poly
    raise AssertionError(f"no irreducible polynomial of degree {e}")


@dataclass(frozen=True)
class FieldSpec:
    """Arithmetic context for GF(q).

    Attributes
    ----------
    q : field cardinality (prime, or a power of two)
    p : characteristic
    e : extension degree, ``q == p**e``
    modulus : irreducible polynomial as coefficient list over GF(p),
        lowest degree first, length ``e + 1``; empty for prime fields
    """

    q: int
    p: int
    e: int
    modulus: tuple[int, ...]
    # log/antilog tables for the full multiplicative group; exp has the
    # cycle written out twice so exp[log a + log b] never wraps.
    exp_table: np.ndarray = dc_field(repr=False, compare=False, default=None)
    log_table: np.ndarray = dc_field(repr=False, compare=False, default=None)

    # -- scalar operations -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a - b) % self.p
        return a ^ b

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return a

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp_table[self.log_table[a] + self.log_table[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return int(self.exp_table[self.q - 1 - self.log_table[a]])

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n == 0:
                return 1
            if n < 0:
                raise DivisionByZero("negative power of 0")
            return 0
        exponent = (self.log_table[a] * n) % (self.q - 1)
        return int(self.exp_table[exponent])

    # -- vector operations (canonical integer arrays) ----------------------

    def add_vec(self, a: np.ndarray, b) -> np.ndarray:
        if self.e == 1:
            return (a + b) % self.p
        return np.bitwise_xor(a, b)

    def mul_vec(self, a: np.ndarray, b) -> np.ndarray:
        """Elementwise product; ``b`` may be a scalar or an array."""
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.exp_table[self.log_table[a] + self.log_table[b]]
        zero = (a == 0) | (b == 0)
        return np.where(zero, 0, out)

    def elements(self) -> range:
        return range(self.q)

    def __str__(self) -> str:
        if self.e == 1:
            return f"GF({self.q})"
        return f"GF({self.p}^{self.e})"


def _build_tables(q: int, p: int, e: int, modulus_int: int):
    """Log/antilog tables over a generator of the multiplicative group."""
    order_factors = list(_factorize(q - 1))

    if e == 1:
        def mul(a, b):
            return (a * b) % p
    else:
        def mul(a, b):
            return _gf2_poly_mulmod(a, b, modulus_int)

    def pow_(a, n):
        acc, base = 1, a
        while n:
            if n & 1:
                acc = mul(acc, base)
            base = mul(base, base)
            n >>= 1
        return acc

    def is_generator(g):
        return all(pow_(g, (q - 1) // f) != 1 for f in order_factors)

    gen = next(g for g in range(2, q) if is_generator(g)) if q > 2 else 1

    exp = np.zeros(2 * (q - 1), dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    acc = 1
    for i in range(q - 1):
        exp[i] = acc
        exp[i + q - 1] = acc
        log[acc] = i
        acc = mul(acc, gen)
    assert acc == 1, "generator order mismatch"
    log[0] = 0  # never consulted for zero operands
    return exp, log


def build_field(q: int) -> FieldSpec:
    """Construct the arithmetic context for GF(q).

    Supported cardinalities are primes and powers of two up to 2^16.  For
    GF(2^e) the modulus is the irreducible polynomial of degree ``e`` with
    the smallest integer encoding, found by exhaustive trial division, so
    the field is the same on every platform.

    Raises
    ------
    NotPrimePower
        If ``q`` is composite with several prime factors, or an odd prime
        power with exponent > 1 (unsupported), or a power of two past 2^16.
    """
    if q < 2:
        raise NotPrimePower(f"q must be >= 2, got {q}")
    factors = _factorize(q)
    if len(factors) != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    p, e = next(iter(factors.items()))
    if e == 1:
        exp, log = _build_tables(q, p, 1, 0)
        return FieldSpec(q=q, p=p, e=1, modulus=(), exp_table=exp, log_table=log)
    if p != 2:
        raise NotPrimePower(
            f"odd-characteristic extension field GF({p}^{e}) is unsupported"
        )
    if e > MAX_EXTENSION_DEGREE:
        raise NotPrimePower(f"GF(2^{e}) exceeds the supported degree {MAX_EXTENSION_DEGREE}")
    modulus_int = _smallest_irreducible(e)
    modulus = tuple((modulus_int >> i) & 1 for i in range(e + 1))
    exp, log = _build_tables(q, 2, e, modulus_int)
    return FieldSpec(q=q, p=2, e=e, modulus=modulus, exp_table=exp, log_table=log)


def is_supported_prime_power(q: int) -> bool:
    """True when ``build_field(q)`` would succeed (no tables are built)."""
    if q < 2:
        return False
    factors = _factorize(q)
    if len(factors) != 1:
        return False
    p, e = next(iter(factors.items()))
    return e == 1 or (p == 2 and e <= MAX_EXTENSION_DEGREE)


_FIELD_CACHE: dict[int, FieldSpec] = {}


def build_field_cached(q: int) -> FieldSpec:
    """Memoized :func:`build_field`; FieldSpec is immutable so sharing is safe."""
    spec = _FIELD_CACHE.get(q)
    if spec is None:
        spec = build_field(q)
        _FIELD_CACHE[q] = spec
    return spec
