from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistkit.errors import UnknownParameterError
from twistkit.params import param_ring, parse_assignment, parse_param_poly

R = param_ring(4)


def test_alphabet_d3():
    assert set(param_ring(3).names) == {"C_2", "C_1a", "C_1b", "C_za", "C_zb"}


@pytest.mark.parametrize("d", range(3, 9))
def test_alphabet_size(d):
    # grid entries (i, j) in I_d with i, j <= d-2, then C_2..C_(d-1), then four named constants
    assert param_ring(d).nvars == ((d - 1) ** 2 - 4) + (d - 2) + 4


def test_out_of_alphabet_indices_are_zero():
    assert R.C(0, -1).is_zero()
    assert R.C(0, 3).is_zero()
    assert R.Cj(1).is_zero()


small = st.integers(-3, 3)


@st.composite
def polys(draw):
    names = R.names
    p = R.zero()
    for _ in range(draw(st.integers(0, 4))):
        term = R.const(draw(small))
        for _ in range(draw(st.integers(0, 3))):
            term = term * R.var(names[draw(st.integers(0, len(names) - 1))])
        p = p + term
    return p


points = st.lists(st.integers(-5, 5), min_size=R.nvars, max_size=R.nvars).map(
    lambda xs: dict(zip(R.names, xs))
)


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@given(polys(), polys(), points)
def test_specialize_is_a_homomorphism(a, b, pt):
    assert (a * b).specialize(pt) == a.specialize(pt) * b.specialize(pt)
    assert (a + b).specialize(pt) == a.specialize(pt) + b.specialize(pt)


@given(polys(), polys())
def test_exact_div_roundtrip(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


@given(polys())
def test_str_parse_roundtrip(a):
    assert parse_param_poly(R, str(a)) == a


def test_parse_examples():
    p = parse_param_poly(R, "2*C_1a*C_(2,1)^2 - 1/3")
    assert p.specialize({n: 1 for n in R.names}) == Fraction(5, 3)


def test_unknown_parameter():
    with pytest.raises(UnknownParameterError) as exc:
        parse_assignment(R, {"C_9": "1"})
    assert exc.value.name == "C_9"
    with pytest.raises(UnknownParameterError):
        R.var("C_q")


def test_partial_specialization_fails_loudly():
    with pytest.raises(UnknownParameterError, match="no value assigned"):
        R.var("C_1a").specialize({})


def test_assignment_parses_rationals():
    assert parse_assignment(R, {"C_1a": "3/4", "C_1b": 2}) == {"C_1a": Fraction(3, 4), "C_1b": Fraction(2)}
