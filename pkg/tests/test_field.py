import numpy as np
import pytest
from hypothesis import given, strategies as st

from gtcodes.errors import DivisionByZero, NotPrimePower
from gtcodes.field import (build_field, build_field_cached,
                           is_supported_prime_power)

PRIMES = [2, 3, 5, 7, 13, 31]
EXTENSIONS = [4, 8, 16, 32, 64]


@pytest.mark.parametrize("q", PRIMES)
def test_prime_field_matches_modular_arithmetic(q):
    f = build_field(q)
    for a in range(q):
        for b in range(q):
            assert f.add(a, b) == (a + b) % q
            assert f.sub(a, b) == (a - b) % q
            assert f.mul(a, b) == (a * b) % q
        assert f.neg(a) == (-a) % q


@pytest.mark.parametrize("q", PRIMES + EXTENSIONS)
def test_field_axioms(q):
    f = build_field(q)
    elems = range(q)
    for a in elems:
        assert f.add(a, 0) == a
        assert f.mul(a, 1) == a
        assert f.mul(a, 0) == 0
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
    rng = np.random.default_rng(q)
    for _ in range(200):
        a, b, c = rng.integers(0, q, size=3)
        a, b, c = int(a), int(b), int(c)
        assert f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c)
        assert f.add(a, f.add(b, c)) == f.add(f.add(a, b), c)
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
        assert f.mul(a, b) == f.mul(b, a)


@pytest.mark.parametrize("q,modulus_bits", [
    (4, 0b111),       # x^2 + x + 1
    (8, 0b1011),      # x^3 + x + 1
    (16, 0b10011),    # x^4 + x + 1
    (256, 0b100011011),  # x^8 + x^4 + x^3 + x + 1
])
def test_smallest_irreducible_modulus(q, modulus_bits):
    f = build_field(q)
    got = sum(c << i for i, c in enumerate(f.modulus))
    assert got == modulus_bits


@pytest.mark.parametrize("q", PRIMES + EXTENSIONS)
def test_pow_and_multiplicative_order(q):
    f = build_field(q)
    for a in range(1, q):
        assert f.pow(a, q - 1) == 1
        assert f.pow(a, 0) == 1
        assert f.mul(f.pow(a, 3), f.pow(a, 4)) == f.pow(a, 7)
    assert f.pow(0, 0) == 1
    assert f.pow(0, 5) == 0
    with pytest.raises(DivisionByZero):
        f.pow(0, -1)
    with pytest.raises(DivisionByZero):
        f.inv(0)


@pytest.mark.parametrize("q", [4, 7, 16])
def test_vector_ops_match_scalar(q):
    f = build_field(q)
    rng = np.random.default_rng(0)
    a = rng.integers(0, q, size=50)
    b = rng.integers(0, q, size=50)
    add = f.add_vec(a, b)
    mul = f.mul_vec(a, b)
    for i in range(50):
        assert add[i] == f.add(int(a[i]), int(b[i]))
        assert mul[i] == f.mul(int(a[i]), int(b[i]))
    assert np.array_equal(f.mul_vec(a, 1), a)
    assert not f.mul_vec(a, 0).any()


@pytest.mark.parametrize("q", [0, 1, 6, 9, 10, 12, 25, 27, 2 ** 17])
def test_unsupported_cardinalities(q):
    assert not is_supported_prime_power(q)
    with pytest.raises(NotPrimePower):
        build_field(q)


def test_supported_cardinalities():
    for q in PRIMES + EXTENSIONS + [2 ** 16, 997]:
        assert is_supported_prime_power(q)


def test_cache_returns_same_object():
    assert build_field_cached(8) is build_field_cached(8)


@given(st.sampled_from([4, 8, 16, 32]),
       st.integers(min_value=0, max_value=31),
       st.integers(min_value=0, max_value=31))
def test_extension_mul_is_polynomial_product(q, a, b):
    f = build_field_cached(q)
    a %= q
    b %= q
    # schoolbook carry-less product reduced by the modulus
    mod = sum(c << i for i, c in enumerate(f.modulus))
    acc = 0
    for i in range(q.bit_length()):
        if (b >> i) & 1:
            acc ^= a << i
    while acc.bit_length() >= mod.bit_length():
        acc ^= mod << (acc.bit_length() - mod.bit_length())
    assert f.mul(a, b) == acc
