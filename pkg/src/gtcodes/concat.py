"""Kautz-Singleton concatenation and the binary test-matrix container.

A q-ary codeword of length m becomes a binary column of length q*m: each
symbol c is replaced by the unit-weight vector of length q with the 1 at
index c.  Columns therefore have constant weight m, and binary distance is
exactly twice the q-ary distance.

Storage is bit-packed column-major: ``packed[j, w]`` holds rows
``64*w .. 64*w + 63`` of column ``j`` (row r lives in bit ``r % 64`` of word
``r // 64``).  OR-ing defective columns and support-containment tests are
then word-parallel, which is what the simulation kernels run on.

File formats
------------
GTM1 (ASCII): header line ``GTM1 M N w_or_0 q_or_0 m_or_0`` followed by M
lines of N characters from {0,1}, row-major.  GTMB (binary-ish): the same
header with magic ``GTMB``, then one line of standard base64 encoding the
packed column words (column-major, little-endian 64-bit).
"""

from __future__ import annotations

import base64
import hashlib
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .codes import LinearCode
from .errors import InvalidParams, ParseError

_CHUNK = 4096


@dataclass(frozen=True)
class TestMatrix:
    """Immutable binary test matrix with bit-packed columns.

    ``meta`` carries optional concatenation provenance: keys ``q``, ``m``,
    ``w``, ``d_binary`` and ``D_formula`` (the exact average distance
    2m(1-1/q) as a Fraction, present only while it is known to be valid).
    """

    __test__ = False  # name starts with "Test" but this is not a test case

    M: int
    N: int
    packed: np.ndarray
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        packed = np.ascontiguousarray(self.packed, dtype=np.uint64)
        n_words = (self.M + 63) // 64
        if packed.shape != (self.N, n_words):
            raise InvalidParams(
                f"packed shape {packed.shape} != ({self.N}, {n_words})")
        object.__setattr__(self, "packed", packed)

    @property
    def n_words(self) -> int:
        return self.packed.shape[1]

    def column(self, j: int) -> np.ndarray:
        """Column j as a length-M uint8 vector."""
        bits = np.unpackbits(self.packed[j].view(np.uint8), bitorder="little")
        return bits[:self.M]

    def to_dense(self) -> np.ndarray:
        """Full (M, N) uint8 array; intended for tests and small matrices."""
        bits = np.unpackbits(
            self.packed.view(np.uint8), axis=1, bitorder="little")
        return bits[:, :self.M].T.copy()

    def column_weights(self) -> np.ndarray:
        return np.bitwise_count(self.packed).sum(axis=1, dtype=np.int64)


def phi(symbol: int, q: int) -> np.ndarray:
    """Unit-weight length-q vector with the 1 at the symbol's index."""
    if not 0 <= symbol < q:
        raise InvalidParams(f"symbol {symbol} outside [0, {q})")
    out = np.zeros(q, dtype=np.uint8)
    out[symbol] = 1
    return out


def pack_dense(dense: np.ndarray) -> TestMatrix:
    """Build a TestMatrix from a dense (M, N) 0/1 array."""
    dense = np.asarray(dense, dtype=np.uint8)
    m_rows, n = dense.shape
    padded = np.zeros((n, ((m_rows + 63) // 64) * 64), dtype=np.uint8)
    padded[:, :m_rows] = dense.T
    packed = np.packbits(padded, axis=1, bitorder="little").view(np.uint64)
    return TestMatrix(M=m_rows, N=n, packed=packed)


def concatenate(code: LinearCode) -> TestMatrix:
    """Concatenated test matrix: column j is the unit-weight expansion of
    codeword j, so M = q*m, every column has weight m, and binary distance
    is twice the q-ary distance.
    """
    q, m, n = code.q, code.m, code.size
    big_m = q * m
    n_words = (big_m + 63) // 64
    packed = np.zeros((n, n_words), dtype=np.uint64)
    block_rows = np.arange(m, dtype=np.int64) * q
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        rows = block_rows[None, :] + code.codeword_symbols(lo, hi)
        cols = np.repeat(np.arange(lo, hi), m)
        np.bitwise_or.at(
            packed, (cols, (rows >> 6).ravel()),
            np.uint64(1) << (rows.astype(np.uint64).ravel() & np.uint64(63)))
    meta = {"q": q, "m": m, "w": m}
    if code.d_claimed is not None:
        meta["d_binary"] = 2 * code.d_claimed
    if code.size == q ** code.k:
        # exact average distance of a full linear code with no identically
        # zero coordinate; subgroup codes may fall short of it, so they get
        # their D measured instead
        meta["D_formula"] = Fraction(2 * m * (q - 1), q)
    return TestMatrix(M=big_m, N=n, packed=packed, meta=meta)


def truncate(matrix: TestMatrix, n_keep: int) -> TestMatrix:
    """Keep the first n_keep columns.  The average-distance formula stops
    being valid for a proper truncation, so D_formula is dropped."""
    if not 1 <= n_keep <= matrix.N:
        raise InvalidParams(f"n_keep {n_keep} outside [1, {matrix.N}]")
    if n_keep == matrix.N:
        return matrix
    meta = {k: v for k, v in matrix.meta.items() if k != "D_formula"}
    return TestMatrix(M=matrix.M, N=n_keep,
                      packed=matrix.packed[:n_keep].copy(), meta=meta)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _header(matrix: TestMatrix, magic: str) -> str:
    meta = matrix.meta
    return (f"{magic} {matrix.M} {matrix.N} "
            f"{meta.get('w', 0)} {meta.get('q', 0)} {meta.get('m', 0)}")


def write_matrix(matrix: TestMatrix, path, fmt: str = "gtm1") -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps_matrix(matrix, fmt))


def dumps_matrix(matrix: TestMatrix, fmt: str = "gtm1") -> str:
    if fmt == "gtm1":
        dense = matrix.to_dense()
        lines = [_header(matrix, "GTM1")]
        digits = np.array(["0", "1"])
        lines.extend("".join(digits[row]) for row in dense)
        return "\n".join(lines) + "\n"
    if fmt == "gtmb":
        payload = base64.b64encode(
            matrix.packed.astype("<u8").tobytes()).decode("ascii")
        return _header(matrix, "GTMB") + "\n" + payload + "\n"
    raise InvalidParams(f"unknown matrix format {fmt!r}")


def _parse_header(line: str) -> tuple[str, int, int, dict]:
    parts = line.split()
    if len(parts) != 6 or parts[0] not in ("GTM1", "GTMB"):
        raise ParseError("header must be 'GTM1|GTMB M N w q m'", line=1)
    try:
        m_rows, n, w, q, mm = (int(x) for x in parts[1:])
    except ValueError:
        raise ParseError("non-integer header field", line=1)
    if m_rows < 1 or n < 1:
        raise ParseError("M and N must be positive", line=1)
    meta = {}
    if w:
        meta["w"] = w
    if q:
        meta["q"] = q
    if mm:
        meta["m"] = mm
    return parts[0], m_rows, n, meta


def loads_matrix(text: str) -> TestMatrix:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty matrix file", line=1)
    magic, m_rows, n, meta = _parse_header(lines[0])
    if magic == "GTMB":
        if len(lines) < 2:
            raise ParseError("missing base64 payload", line=2)
        try:
            raw = base64.b64decode(lines[1], validate=True)
        except Exception:
            raise ParseError("invalid base64 payload", line=2)
        n_words = (m_rows + 63) // 64
        if len(raw) != n * n_words * 8:
            raise ParseError(
                f"payload holds {len(raw)} bytes, expected {n * n_words * 8}",
                line=2)
        packed = np.frombuffer(raw, dtype="<u8").astype(np.uint64)
        return TestMatrix(M=m_rows, N=n,
                          packed=packed.reshape(n, n_words), meta=meta)
    if len(lines) < m_rows + 1:
        raise ParseError(f"expected {m_rows} data rows", line=len(lines) + 1)
    dense = np.zeros((m_rows, n), dtype=np.uint8)
    for r in range(m_rows):
        row = lines[1 + r]
        if len(row) != n:
            raise ParseError(f"row has {len(row)} characters, expected {n}",
                             line=2 + r)
        arr = np.frombuffer(row.encode("ascii"), dtype=np.uint8)
        bad = np.nonzero((arr != 0x30) & (arr != 0x31))[0]
        if bad.size:
            raise ParseError("matrix rows must be 0/1", line=2 + r,
                             column=int(bad[0]) + 1)
        dense[r] = arr - 0x30
    out = pack_dense(dense)
    return TestMatrix(M=m_rows, N=n, packed=out.packed, meta=meta)


def read_matrix(path) -> TestMatrix:
    with open(path, "r", encoding="ascii") as fh:
        return loads_matrix(fh.read())


def content_hash(matrix: TestMatrix) -> str:
    """sha256 over the canonical packed representation (format independent)."""
    h = hashlib.sha256()
    h.update(_header(matrix, "GTMB").encode("ascii"))
    h.update(matrix.packed.astype("<u8").tobytes())
    return h.hexdigest()
