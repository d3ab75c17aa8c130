import numpy as np
import pytest

from gtcodes import concat, codes
from gtcodes.field import build_field_cached


@pytest.fixture(scope="session")
def rs_matrix():
    """12x16 Kautz-Singleton matrix from the RS code over GF(4), k=2, n=3."""
    code = codes.rs_generate(build_field_cached(4), 2, 3)
    return concat.concatenate(code)


@pytest.fixture(scope="session")
def two_column_matrix():
    """6x2 matrix with columns 101010 and 010101."""
    return concat.pack_dense(np.array(
        [[1, 0], [0, 1], [1, 0], [0, 1], [1, 0], [0, 1]], dtype=np.uint8))


def identity_matrix(n):
    return concat.pack_dense(np.eye(n, dtype=np.uint8))
