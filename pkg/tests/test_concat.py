from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gtcodes import codes, concat
from gtcodes.concat import (concatenate, content_hash, dumps_matrix,
                            loads_matrix, pack_dense, phi, truncate)
from gtcodes.errors import InvalidParams, ParseError
from gtcodes.field import build_field_cached


def test_phi_examples():
    assert phi(0, 4).tolist() == [1, 0, 0, 0]
    assert phi(3, 4).tolist() == [0, 0, 0, 1]
    assert phi(1, 2).tolist() == [0, 1]
    with pytest.raises(InvalidParams):
        phi(4, 4)


def test_phi_injective():
    images = {tuple(phi(c, 8)) for c in range(8)}
    assert len(images) == 8


def test_concatenate_rs_example(rs_matrix):
    assert (rs_matrix.M, rs_matrix.N) == (12, 16)
    assert rs_matrix.meta["w"] == 3
    assert rs_matrix.meta["d_binary"] == 4
    assert rs_matrix.meta["D_formula"] == Fraction(9, 2)
    assert set(rs_matrix.column_weights().tolist()) == {3}
    # one 1 per q-block of rows in every column
    dense = rs_matrix.to_dense()
    for j in range(16):
        blocks = dense[:, j].reshape(3, 4)
        assert (blocks.sum(axis=1) == 1).all()
    # exact pairwise minimum distance is twice the q-ary distance
    d_min = min(
        int((dense[:, a] != dense[:, b]).sum())
        for a in range(16) for b in range(a + 1, 16))
    assert d_min == 4


def test_concatenate_repetition_code():
    code = codes.LinearCode(field=build_field_cached(2), m=3, k=1,
                            generator=np.array([[1, 1, 1]]), d_claimed=3)
    mat = concatenate(code)
    assert (mat.M, mat.N) == (6, 2)
    dense = mat.to_dense()
    assert dense[:, 0].tolist() == [1, 0, 1, 0, 1, 0]
    assert dense[:, 1].tolist() == [0, 1, 0, 1, 0, 1]
    assert mat.meta["d_binary"] == 6


def test_concatenate_matches_phi_columns():
    code = codes.rs_generate(build_field_cached(5), 2, 4)
    mat = concatenate(code)
    symbols = code.codeword_symbols()
    for j in (0, 1, 7, 24):
        expected = np.concatenate([phi(int(c), 5) for c in symbols[j]])
        assert mat.column(j).tolist() == expected.tolist()


@pytest.mark.parametrize("q,kind", [(4, "rs"), (8, "gv")])
def test_binary_distance_is_twice_qary(q, kind):
    f = build_field_cached(q)
    if kind == "rs":
        code = codes.rs_generate(f, 2, q - 1)
    else:
        code = codes.gv_construct(f, 10, 6)
    d_q = codes.min_distance_exact(code)
    mat = concatenate(code)
    dense = mat.to_dense().astype(np.int64)
    d_bin = min(
        int(np.abs(dense[:, a] - dense[:, b]).sum())
        for a in range(mat.N) for b in range(a + 1, mat.N))
    assert d_bin == 2 * d_q


def test_truncate(rs_matrix):
    same = truncate(rs_matrix, 16)
    assert same is rs_matrix and "D_formula" in same.meta
    cut = truncate(rs_matrix, 10)
    assert (cut.M, cut.N) == (12, 10)
    assert "D_formula" not in cut.meta
    assert cut.meta["w"] == 3
    assert np.array_equal(cut.packed, rs_matrix.packed[:10])
    single = truncate(rs_matrix, 1)
    assert single.N == 1
    with pytest.raises(InvalidParams):
        truncate(rs_matrix, 17)
    with pytest.raises(InvalidParams):
        truncate(rs_matrix, 0)


def test_file_round_trip(rs_matrix):
    for fmt in ("gtm1", "gtmb"):
        text = dumps_matrix(rs_matrix, fmt)
        back = loads_matrix(text)
        assert (back.M, back.N) == (rs_matrix.M, rs_matrix.N)
        assert np.array_equal(back.packed, rs_matrix.packed)
        assert back.meta["w"] == 3 and back.meta["q"] == 4
        assert content_hash(back) == content_hash(rs_matrix)


def test_gtm1_layout(two_column_matrix):
    text = dumps_matrix(two_column_matrix, "gtm1")
    lines = text.splitlines()
    assert lines[0] == "GTM1 6 2 0 0 0"
    assert lines[1:] == ["10", "01", "10", "01", "10", "01"]


@pytest.mark.parametrize("text,line,column", [
    ("", 1, 0),
    ("GTMX 2 2 0 0 0\n10\n01\n", 1, 0),
    ("GTM1 2 2 0 0\n10\n01\n", 1, 0),
    ("GTM1 2 2 0 0 0\n10\n", 3, 0),
    ("GTM1 2 2 0 0 0\n100\n01\n", 2, 0),
    ("GTM1 2 2 0 0 0\n10\n0x\n", 3, 2),
    ("GTMB 2 2 0 0 0\n!!!\n", 2, 0),
])
def test_parse_errors(text, line, column):
    with pytest.raises(ParseError) as err:
        loads_matrix(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_gtmb_payload_length_check():
    good = dumps_matrix(pack_dense(np.eye(4, dtype=np.uint8)), "gtmb")
    head, payload = good.splitlines()
    with pytest.raises(ParseError):
        loads_matrix(head + "\n" + payload[:-4] + "\n")


def test_content_hash_distinguishes(rs_matrix, two_column_matrix):
    assert content_hash(rs_matrix) != content_hash(two_column_matrix)
    assert content_hash(rs_matrix) == content_hash(rs_matrix)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 90), st.integers(2, 9), st.integers(0, 2 ** 32 - 1))
def test_pack_round_trip_random(m_rows, n, seed):
    rng = np.random.default_rng(seed)
    dense = rng.integers(0, 2, size=(m_rows, n)).astype(np.uint8)
    mat = pack_dense(dense)
    assert np.array_equal(mat.to_dense(), dense)
    for fmt in ("gtm1", "gtmb"):
        back = loads_matrix(dumps_matrix(mat, fmt))
        assert np.array_equal(back.to_dense(), dense)
