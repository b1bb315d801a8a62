import numpy as np
import pytest

from smplab.qcore import random_density
from smplab.serialize import (
    load_matrix,
    matrix_from_bytes,
    matrix_from_text,
    matrix_to_bytes,
    matrix_to_text,
    save_matrix,
)


def test_binary_roundtrip_exact(tmp_path):
    rng = np.random.default_rng(0)
    a = random_density(8, rng).entries
    path = tmp_path / "rho.qmat"
    save_matrix(path, a)
    back = load_matrix(path)
    assert back.dtype == np.complex128
    assert np.array_equal(back, a)


def test_binary_rejects_garbage():
    with pytest.raises(ValueError, match="magic"):
        matrix_from_bytes(b"nope" + b"\x00" * 32)
    good = matrix_to_bytes(np.eye(2, dtype=complex))
    with pytest.raises(ValueError, match="truncated"):
        matrix_from_bytes(good[:-8])


def test_text_roundtrip_exact():
    rng = np.random.default_rng(1)
    a = random_density(4, rng).entries
    back = matrix_from_text(matrix_to_text(a))
    assert np.array_equal(back, a)


def test_text_header_checked():
    with pytest.raises(ValueError, match="header"):
        matrix_from_text("bogus\n1,0 0,0\n")


def test_non_square_rejected():
    with pytest.raises(ValueError, match="square"):
        matrix_to_bytes(np.zeros((2, 3)))
