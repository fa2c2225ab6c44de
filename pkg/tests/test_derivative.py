from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from twistkit.artin import v, w
from twistkit.derivative import (
    certify_surjective,
    check_pipeline_identity,
    dq_columns,
    dq_matrix,
    extend_to_n,
    ms_basis,
)
from twistkit.errors import PreconditionError, UnknownParameterError
from twistkit.linalg import det_fraction, ff_rank_det, specialize_matrix
from twistkit.params import param_ring


def _sympy_det(M, names):
    syms = {n: sympy.Symbol(n) for n in names}

    def conv(p):
        e = sympy.Integer(0)
        for mono, c in p.terms.items():
            t = sympy.Rational(c.numerator, c.denominator)
            for n, k in zip(names, mono):
                t *= syms[n] ** k
            e += t
        return e

    return sympy.expand(sympy.Matrix([[conv(x) for x in row] for row in M]).det(method="berkowitz")), syms


def test_d3_matrix_frozen():
    M = dq_matrix(3)
    R = param_ring(3)
    C1a, C1b, C2, Cza, Czb = (R.var(n) for n in ("C_1a", "C_1b", "C_2", "C_za", "C_zb"))
    assert M.cols == ["g0", "g1", "f_(0,2)", "f_(1,2)"]
    assert M.rows == [w(2, 1), w(2, 2), v(2), v(3)]
    assert M.row(w(2, 1)) == {"g0": -C1a}
    assert M.row(w(2, 2)) == {"g0": -C2, "g1": -C1a, "f_(0,2)": C1b}
    assert M.row(v(2)) == {"g1": Czb * 2, "f_(1,2)": Cza * -2}
    assert M.row(v(3)) == {"g0": Czb * -2, "g1": Cza * 2}


@pytest.mark.parametrize("d", range(3, 7))
def test_matrix_is_square(d):
    M = dq_matrix(d)
    assert M.size == len(M.cols) == len(ms_basis(d)) == d * d - d - 2
    assert dq_columns(d)[:2] == ["g0", "g1"]


@pytest.mark.parametrize("d", range(3, 7))
def test_pipeline_identity(d):
    assert check_pipeline_identity(d).passed


def test_d3_determinant_sympy_oracle():
    M = dq_matrix(3)
    names = list(param_ring(3).names)
    det, s = _sympy_det(M.entries, names)
    assert det == 4 * s["C_1a"] * s["C_1b"] * s["C_za"] ** 2
    assert ff_rank_det(M.entries).det == param_ring(3).parse("4*C_1a*C_1b*C_za^2")


def test_d4_determinant_sympy_oracle():
    M = dq_matrix(4)
    names = list(param_ring(4).names)
    det, _ = _sympy_det(M.entries, names)
    cert = certify_surjective(M)
    mine, _ = _sympy_det([[cert.determinant]], names)
    assert sympy.expand(det - mine) == 0
    assert str(cert.determinant).count("C_za^2") >= 1


@pytest.mark.parametrize("d", range(3, 6))
def test_certificate_issued(d):
    cert = certify_surjective(dq_matrix(d))
    assert cert.issued
    assert cert.modular_checks["ranks_agree"] and cert.modular_checks["determinant_agrees"]
    assert cert.modular_checks["seeds"] >= 20
    M = dq_matrix(d)
    assert det_fraction(specialize_matrix(M.entries, {k: Fraction(x) for k, x in cert.witness.items()})) \
        == cert.witness_value != 0


@pytest.mark.parametrize("name", ["C_1a", "C_1b", "C_za"])
def test_tampered_parameter_is_reported(name):
    cert = certify_surjective(dq_matrix(3), {name: Fraction(0)})
    assert not cert.issued
    assert cert.violated == [name]


def test_harmless_assignment_keeps_certificate():
    cert = certify_surjective(dq_matrix(3), {"C_zb": Fraction(0), "C_2": Fraction(0)})
    assert cert.issued and cert.witness["C_1a"] != 0


def test_unknown_parameter_in_assignment():
    with pytest.raises(UnknownParameterError):
        certify_surjective(dq_matrix(3), {"C_(7,7)": Fraction(1)})


def test_certificate_deterministic_in_seed():
    a = certify_surjective(dq_matrix(4), seed=3)
    b = certify_surjective(dq_matrix(4), seed=3)
    assert a.witness == b.witness and a.factored() == b.factored()


def test_extend_to_n():
    rep = extend_to_n(3, 11)
    assert rep["extra_summands"] == 2 and rep["rank_X"] == 5
    assert rep["spanning_transfers"]
    with pytest.raises(PreconditionError):
        extend_to_n(3, 8)


@pytest.mark.parametrize("d", [3, 4])
def test_specializations_avoiding_factors_are_invertible(d):
    from hypothesis import given, settings
    from hypothesis import strategies as st

    M = dq_matrix(d)
    cert = certify_surjective(M)
    names = list(param_ring(d).names)

    @settings(max_examples=40)
    @given(st.lists(st.integers(-3, 3), min_size=len(names), max_size=len(names)))
    def check(values):
        pt = dict(zip(names, values))
        avoids = all(f.poly.specialize(pt) != 0 for f in cert.factors)
        det = det_fraction(specialize_matrix(M.entries, pt))
        assert (det != 0) == avoids

    check()
