from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistkit.errors import PreconditionError
from twistkit.indices import build_index_sets


@pytest.mark.parametrize("d", range(3, 11))
def test_sizes(d):
    idx = build_index_sets(d)
    assert len(idx.I) == d * d - 4
    assert len(idx.J) == d * d - d - 4
    assert len(idx.kernel_f_indices) == (d - 1) * d - 4


def test_d3_explicit():
    idx = build_index_sets(3)
    assert idx.I == ((0, 2), (1, 2), (2, 0), (2, 1), (2, 2))
    assert idx.J == ((2, 1), (2, 2))


@pytest.mark.parametrize("d", [-1, 0, 1, 2])
def test_small_d_rejected(d):
    with pytest.raises(PreconditionError, match="d ≥ 3 required"):
        build_index_sets(d)


@given(st.integers(3, 12))
def test_J_is_I_minus_excluded(d):
    idx = build_index_sets(d)
    removed = set(idx.I) - set(idx.J)
    assert removed == {(i, 0) for i in range(2, d)} | {(0, 2), (1, 2)}
    assert all(idx.in_I(ij) for ij in idx.J)
    assert not any(idx.in_I(ij) for ij in [(0, 0), (0, 1), (1, 0), (1, 1)])


@given(st.integers(0, 20), st.integers(0, 20))
def test_k_is_min(i, j):
    assert build_index_sets(3).k(i, j) == min(i, j)
