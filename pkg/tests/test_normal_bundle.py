from __future__ import annotations

import pytest

from twistkit.artin import context_d
from twistkit.bigraded import SplittingType, compose
from twistkit.normal_bundle import (
    build_dG,
    check_dG_surjective,
    check_kernel,
    check_kernel_splitting,
    h_m_class,
    invert_dG0,
    kernel_basis,
    kernel_h0,
    kernel_module,
    kernel_splitting_type,
    target_module,
    tev_module,
    twisted_global_permutation,
)


@pytest.mark.parametrize("d", range(3, 9))
def test_signed_permutation(d):
    perm = twisted_global_permutation(d)
    assert perm.is_signed_permutation, perm.problems
    assert len(perm.forward) == d * d
    rep = check_dG_surjective(d)
    assert rep.passed


@pytest.mark.parametrize("d", range(3, 7))
def test_e_products(d):
    perm = twisted_global_permutation(d)
    # S1 e0 -> +(0,0), S0 e0 -> +(1,0), S1 e1 -> -(0,1), S0 e1 -> -(1,1)
    assert perm.forward[("e0", 0)] == ((0, 0), 1)
    assert perm.forward[("e0", 1)] == ((1, 0), 1)
    assert perm.forward[("e1", 0)] == ((0, 1), -1)
    assert perm.forward[("e1", 1)] == ((1, 1), -1)


@pytest.mark.parametrize("d", range(3, 7))
def test_e_rows_consistent(d):
    dG = build_dG(d)
    assert all(dG.e_checks.values()), dG.e_checks
    assert not dG.full.degree_audit()


@pytest.mark.parametrize("d", range(3, 7))
def test_kernel_composition_is_zero(d):
    kb = kernel_basis(d)
    assert compose(build_dG(d).full, kb.iota).is_zero()
    assert check_kernel(d).passed


@pytest.mark.parametrize("d", [3, 4])
def test_invert_dG0_is_a_right_inverse(d):
    dG = build_dG(d)
    for name, img in kernel_basis(d).iota0.images.items():
        t = dG.dGm.apply(img)
        if t:
            assert dG.dG0.apply(invert_dG0(d, t)) == t


@pytest.mark.parametrize("d", range(3, 7))
def test_kernel_splitting_type(d):
    t = kernel_splitting_type(d)
    assert t == SplittingType([0] * (d * d - d - 2) + [1])
    assert check_kernel_splitting(d).passed


@pytest.mark.parametrize("d", range(3, 7))
def test_kernel_rank_and_degree_from_chern_bookkeeping(d):
    # independent route: rank and degree of a kernel of a surjection of split bundles
    tev, tgt = tev_module(d), target_module(d)
    rank = tev.rank - tgt.rank
    degree = sum(tev.twist(n) for n in tev.names) - sum(tgt.twist(n) for n in tgt.names)
    t = kernel_splitting_type(d)
    assert t.rank == rank == kernel_module(d).rank
    assert sum(t.degrees) == degree == 1


def test_kernel_h0_frozen_d3():
    # {0^4, 1}: h0(-1) = 1, h0(0) = 4 + 2, h0(1) = 8 + 3
    assert [kernel_h0(3, m) for m in (-2, -1, 0, 1)] == [0, 1, 6, 11]


def test_h_m_class_is_nilpotent():
    hm = h_m_class(3)
    assert hm
    assert not hm.constant_part()
    assert kernel_basis(3).ctx is context_d(3)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_h_m_class_independent_of_correction(d):
    # any two valid corrections for h differ by a twist -1 section killed by dG0;
    # those are exactly the multiples of c, so the class modulo c is well defined
    import sympy

    from twistkit.bigraded import global_matrix

    M, rows, cols = global_matrix(build_dG(d).dG0, -1)
    num = sympy.Matrix([[x.const.constant_value() if x else 0 for x in row] for row in M])
    null = num.nullspace()
    assert len(null) == 1
    support = [cols[k] for k in range(len(cols)) if null[0][k] != 0]
    assert support == [("c", 0)]


def test_perturbed_correction_gives_same_class():
    from twistkit.bigraded import Section
    from twistkit.artin import ArtinElement, v
    from twistkit.forms import SForm
    from twistkit.params import param_ring

    d = 3
    R = param_ring(d)
    kb = kernel_basis(d)
    hm = kb.h_m
    bump = Section(hm.module, hm.m, R, {"c": SForm.monomial(R, 0, 0, ArtinElement.symbol(R, v(2)))})
    perturbed = hm + bump
    # still a valid correction: dG0 kills the bump
    assert not build_dG(d).dG0.apply(bump)
    strip = lambda s: {n: f for n, f in s.comps.items() if n != "c"}  # noqa: E731
    assert strip(perturbed) == strip(hm) == h_m_class(d).comps
