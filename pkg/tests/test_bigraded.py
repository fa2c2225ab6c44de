from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistkit.bigraded import (
    Section,
    SplittingType,
    TwistedFreeModule,
    compose,
    global_basis,
    identity_map,
    splitting_from_h0,
    splitting_stats,
)
from twistkit.errors import PreconditionError
from twistkit.forms import SForm
from twistkit.params import param_ring

R = param_ring(3)

degree_lists = st.lists(st.integers(-3, 3), min_size=0, max_size=6)


@given(degree_lists)
def test_splitting_roundtrip(degs):
    t = SplittingType(degs)
    lo, hi = -6, 6
    assert splitting_from_h0(t.h0, t.rank, (lo, hi)) == t


@given(degree_lists)
def test_h0_is_sum_of_line_bundles(degs):
    t = SplittingType(degs)
    for m in range(-5, 5):
        assert t.h0(m) == sum(max(0, a + m + 1) for a in degs)


def test_str_and_stats():
    t = SplittingType([0, 0, 0, 0, 1])
    assert str(t) == "{0^4, 1}"
    assert splitting_stats(t).as_tuple() == (0, 4, 1, True, False)
    assert splitting_stats(SplittingType([1, 2])).ample
    empty = SplittingType([])
    assert str(empty) == "{}"
    assert splitting_stats(empty).generated_by_global_sections


def test_unrealizable_h0_rejected():
    with pytest.raises(PreconditionError):
        splitting_from_h0({-2: 0, -1: 2, 0: 2}, 2)
    with pytest.raises(PreconditionError):
        splitting_from_h0({-1: 1, 0: 2}, 1)


def test_global_basis_counts():
    M = TwistedFreeModule((("a", 2), ("b", 0), ("c", -1)))
    assert M.h0_dimension(0) == 3 + 1 + 0
    assert len(global_basis(M, 1)) == M.h0_dimension(1) == 4 + 2 + 1


def test_identity_composition():
    M = TwistedFreeModule((("a", 1), ("b", 0)))
    ident = identity_map(M, R)
    sec = Section(M, 1, R, {"a": SForm.monomial(R, 1, 1), "b": SForm.monomial(R, 0, 1, 3)})
    assert ident.apply(sec) == sec
    assert compose(ident, ident) == ident


def test_section_degree_enforced():
    M = TwistedFreeModule((("a", 1),))
    with pytest.raises(Exception):
        Section(M, 0, R, {"a": SForm.monomial(R, 2, 0)})
