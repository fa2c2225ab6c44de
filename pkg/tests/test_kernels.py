from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistkit import _kernels_py, kernels
from twistkit.linalg import det_fraction, rank_fraction

P = kernels.DEFAULT_PRIME

try:
    from twistkit import _kernels as compiled
except ImportError:  # pragma: no cover
    compiled = None

square = st.integers(1, 7).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)
)


def test_prime_constant():
    assert P == 2**62 - 57
    assert all(pow(a, P - 1, P) == 1 for a in (2, 3, 5, 7, 11))


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")


@given(square)
def test_python_kernels_match_fraction_oracle(M):
    assert _kernels_py.rank_mod_p([[x % P for x in r] for r in M], P) == rank_fraction(M)
    assert _kernels_py.det_mod_p([[x % P for x in r] for r in M], P) == det_fraction(M) % P


@pytest.mark.skipif(compiled is None, reason="extension not built")
@given(square)
def test_backends_agree(M):
    Mp = [[x % P for x in r] for r in M]
    assert compiled.rank_mod_p(Mp, P) == _kernels_py.rank_mod_p(Mp, P)
    assert compiled.det_mod_p(Mp, P) == _kernels_py.det_mod_p(Mp, P)


@pytest.mark.skipif(compiled is None, reason="extension not built")
@given(
    st.lists(st.tuples(st.lists(st.integers(0, 5), min_size=3, max_size=3), st.integers(0, P - 1)), max_size=8),
    st.lists(st.integers(0, P - 1), min_size=3, max_size=3),
)
def test_eval_terms_agree(terms, point):
    exps = [e for e, _ in terms]
    coeffs = [c for _, c in terms]
    expected = sum(c * pow(point[0], e[0], P) * pow(point[1], e[1], P) * pow(point[2], e[2], P)
                   for e, c in terms) % P
    assert _kernels_py.eval_terms_mod_p(exps, coeffs, point, P) == expected
    assert compiled.eval_terms_mod_p(exps, coeffs, point, P) == expected


def test_large_residues_do_not_overflow():
    a = P - 1
    M = [[a, a], [a, 1]]
    expected = (a * 1 - a * a) % P
    assert kernels.det_mod_p(M, P) == expected
    assert _kernels_py.det_mod_p(M, P) == expected


def test_fraction_det_example():
    assert det_fraction([[Fraction(1, 2), 1], [3, 4]]) == Fraction(-1)


def test_pure_python_fallback_selected_by_env():
    import os
    import subprocess
    import sys

    code = (
        "from twistkit import kernels; from twistkit.derivative import certify_surjective, dq_matrix;"
        "c = certify_surjective(dq_matrix(4)); print(kernels.BACKEND, c.factored(), c.modular_checks['determinant_agrees'], sep='|')"
    )
    env = dict(os.environ, TWISTKIT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    backend, factored, agrees = out.strip().split('|')
    assert backend == "python" and agrees == "True"
    from twistkit.derivative import certify_surjective, dq_matrix

    assert factored == certify_surjective(dq_matrix(4)).factored()
