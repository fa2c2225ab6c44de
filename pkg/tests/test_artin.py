from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistkit.artin import (
    ArtinElement,
    context_d,
    context_d_prime,
    context_ds,
    d_relation,
    d_relations,
    ds_generators,
    full_symbols,
    reduce_in_context,
    u,
    v,
    w,
)
from twistkit.indices import build_index_sets
from twistkit.linalg import rank_fraction
from twistkit.params import param_ring


def _vector(forms, symbols):
    pos = {s: k for k, s in enumerate(symbols)}
    rows = []
    for f in forms:
        row = [Fraction(0)] * len(symbols)
        for s, c in f.items():
            row[pos[s]] = Fraction(c)
        rows.append(row)
    return rows


def test_symbol_count():
    for d in range(3, 7):
        assert len(full_symbols(d)) == 4 * (d * d - 4) + 4


def test_nilpotents_square_to_zero():
    R = param_ring(3)
    a = ArtinElement.symbol(R, u(2, 1, 0), R.var("C_1a")) + ArtinElement.scalar(R, 2)
    b = ArtinElement.symbol(R, v(3), 5)
    assert (b * b).is_zero()
    assert (a * b) == b.scale(2)
    assert (a * a).constant_part() == ArtinElement.scalar(R, 4)


def test_d_relation_examples():
    # boundary terms outside I_d drop out
    assert d_relation(3, 1, 2) == {u(0, 2, 1): 1, u(1, 2, 3): 1}
    assert d_relation(3, 3, 3) == {u(2, 2, 0): 1}
    assert d_relation(3, 2, 2) == {u(1, 2, 1): 1, u(2, 1, 2): 1, u(2, 2, 3): 1}


@pytest.mark.parametrize("d", range(3, 8))
def test_d_relations_are_independent(d):
    rels = [r for _, r in d_relations(d)]
    syms = full_symbols(d)
    assert rank_fraction(_vector(rels, syms)) == len(rels)


@pytest.mark.parametrize("d", range(3, 8))
def test_ds_basis_size(d):
    ctx = context_ds(d, (1, 0))
    assert len(ctx.reduced_basis()) == d * d - d - 2


@pytest.mark.parametrize("d", range(3, 7))
def test_ds_table_at_base_point(d):
    ctx = context_ds(d, (1, 0))
    idx = build_index_sets(d)
    for (i, j) in idx.I:
        assert ctx.image(u(i, j, 0)) == {}
        assert ctx.image(u(i, j, 1)) == {}
        if j <= d - 2:
            assert ctx.image(u(i, j, 2)) == {w(i, j + 1): -1}
        if idx.in_J((i, j)):
            assert ctx.image(u(i, j, 3)) == {w(i, j): 1}
        else:
            assert ctx.image(u(i, j, 3)) == {}
    assert ctx.image(v(0)) == {} and ctx.image(v(1)) == {}
    assert ctx.image(v(2)) == {v(2): 1} and ctx.image(v(3)) == {v(3): 1}


@pytest.mark.parametrize("d", [3, 4])
def test_reduction_kills_relations(d):
    R = param_ring(d)
    ctx = context_d(d)
    for _, rel in d_relations(d):
        a = ArtinElement(R, None, {s: R.const(c) for s, c in rel.items()})
        assert reduce_in_context(a, ctx).is_zero()


def test_d_prime_is_coarser_than_d():
    d = 4
    assert len(context_d_prime(d).reduced_basis()) > len(context_d(d).reduced_basis())


@given(st.fractions(min_value=-5, max_value=5), st.fractions(min_value=-5, max_value=5))
def test_ds_generators_vanish_in_context(s0, s1):
    if s0 == 0 and s1 == 0:
        return
    d = 3
    R = param_ring(d)
    ctx = context_ds(d, (s0, s1))
    for g in ds_generators(d, (s0, s1)):
        a = ArtinElement(R, None, {s: R.const(c) for s, c in g.items()})
        assert reduce_in_context(a, ctx).is_zero()
