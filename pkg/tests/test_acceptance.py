"""Acceptance gate: one test per criterion, each at its stated tolerance.

Every test records a single PASS/FAIL line; the lines are printed in the
terminal summary (see conftest.py) and immediately when run with ``-s``.
"""

from __future__ import annotations

import json
import random
import time

import jsonschema
import pytest

from twistkit.artin import context_d, d_relations
from twistkit.bigraded import SplittingType, compose
from twistkit.cli import main
from twistkit.derivative import certify_surjective, dq_matrix
from twistkit.divisor import (
    brute_force_schedules,
    chern_tev_X,
    conic_invariants,
    necessity_check,
    psi_schedule,
    schedule_threshold,
)
from twistkit.family import check_G_vanishes
from twistkit.figures import ERRATUM, FACTOR2, MATCH, compare_figure
from twistkit.linalg import ff_rank_det, modular_det_agrees
from twistkit.normal_bundle import build_dG, check_dG_surjective, kernel_basis, kernel_splitting_type
from twistkit.params import param_ring
from twistkit.report import load_schema

RESULTS: list[str] = []


def record(n: int, ok: bool, text: str) -> None:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {text}"
    RESULTS.append(line)
    print(line)


def test_criterion_01_G_vanishes():
    t0 = time.perf_counter()
    ok = all(check_G_vanishes(d).passed for d in range(3, 9))
    elapsed = time.perf_counter() - t0
    guard = all(
        not check_G_vanishes(d, context_d(d, drop=ij)).passed
        for d in range(3, 9)
        for ij, _ in d_relations(d)
    )
    passed = ok and guard and elapsed < 30
    record(1, passed, f"f*G = 0 over D for d=3..8 in {elapsed:.2f}s (<30s); every dropped relation breaks it: {guard}")
    assert passed


def test_criterion_02_dG_permutation_and_figure1():
    problems = []
    for d in range(3, 9):
        if not check_dG_surjective(d).passed:
            problems.append(f"d={d}: not a signed permutation")
        comp = compare_figure(1, d)
        for r in comp.rows:
            want = ERRATUM if r.row == "e0" else MATCH
            if r.status != want:
                problems.append(f"d={d} row {r.row}: {r.status}")
        e0 = next(r for r in comp.rows if r.row == "e0")
        if e0.computed != f"S0^0 S1^{d - 2} · T1^{d - 1}":
            problems.append(f"d={d}: e0 = {e0.computed}")
    record(2, not problems, "d^2 x d^2 signed permutation for d=3..8; b/a rows verbatim; e0 erratum "
                            "(derived S1^(d-2) T1^(d-1))" + (f"; {problems}" if problems else ""))
    assert not problems


def test_criterion_03_kernel_composition():
    bad = []
    for d in range(3, 7):
        kb = kernel_basis(d)
        residual = compose(build_dG(d).full, kb.iota)
        # the check includes nilpotent components: kernel corrections are nonzero and still cancel
        if not residual.is_zero() or not any(kb.corrections.values()):
            bad.append(d)
    record(3, not bad, "dG o iota = 0 over D, constant and nilpotent parts, d=3..6" + (f"; fails at {bad}" if bad else ""))
    assert not bad


def test_criterion_04_figures_3_to_6():
    problems = []
    for d in (3, 4, 5):
        for fig in (3, 4, 5, 6):
            for r in compare_figure(fig, d).rows:
                if r.row.startswith("v") and fig != 3:
                    want = FACTOR2
                else:
                    want = MATCH
                if r.status != want:
                    problems.append(f"fig {fig} d={d} {r.row}: {r.status}")
    record(4, not problems, "figures 3-6 for d=3,4,5: w rows strict, v rows up to the factor 2"
           + (f"; {problems}" if problems else ""))
    assert not problems


def test_criterion_05_determinant():
    problems = []
    t6 = None
    for d in range(3, 7):
        t0 = time.perf_counter()
        M = dq_matrix(d)
        if not (M.size == len(M.cols) == d * d - d - 2):
            problems.append(f"d={d}: shape {M.size}x{len(M.cols)}")
        cert = certify_surjective(M, modular_seeds=20)
        if not cert.issued or not cert.modular_checks["determinant_agrees"]:
            problems.append(f"d={d}: certificate {cert.violated}")
        if d == 6:
            t6 = time.perf_counter() - t0
    R = param_ring(3)
    M3 = dq_matrix(3).entries
    det3 = ff_rank_det(M3).det
    target = R.parse("4*C_1a*C_1b*C_za^2")
    sign_ok = det3 == target or det3 == -target
    mod_ok = modular_det_agrees(M3, det3, range(20))
    passed = not problems and sign_ok and mod_ok and t6 is not None and t6 < 60
    record(5, passed, f"square of size d^2-d-2 with nonzero det for d=3..6; d=3 det = {det3} "
                      f"(Bareiss and 20 modular points agree: {mod_ok}); d=6 in {t6:.2f}s (<60s)")
    assert passed


# The stated exponent d^2-d-3 gives rank d^2-d-2, one less than the kernel's rank
# d^2-d-1 (= rank Tev - rank target).  The computed type is {0^(d^2-d-2), 1}; see
# test_criterion_06_kernel_splitting_corrected below.
@pytest.mark.xfail(strict=True, reason="stated exponent is inconsistent with the kernel rank d^2-d-1")
def test_criterion_06_kernel_splitting_as_stated():
    got = {d: kernel_splitting_type(d) for d in range(3, 7)}
    want = {d: SplittingType([0] * (d * d - d - 3) + [1]) for d in range(3, 7)}
    ok = got == want
    record(6, ok, "kernel splitting {0^(d^2-d-3), 1} for d=3..6 as stated; computed "
                  + ", ".join(f"d={d}: {t}" for d, t in got.items()))
    assert ok


def test_criterion_06_kernel_splitting_corrected():
    got = {d: kernel_splitting_type(d) for d in range(3, 7)}
    ok = all(t == SplittingType([0] * (d * d - d - 2) + [1]) for d, t in got.items())
    line = "(corrected) kernel splitting {0^(d^2-d-2), 1} for d=3..6: " + ", ".join(str(t) for t in got.values())
    RESULTS.append(f"             {'PASS' if ok else 'FAIL'}  {line}")
    print(RESULTS[-1])
    assert ok


def test_criterion_07_divisor_grid():
    t0 = time.perf_counter()
    bad = []
    for d in range(2, 21):
        tri = d * (d + 1) // 2
        for n in range(max(d, 2), 501):
            c = chern_tev_X(n, d)
            # printed x-form and psi-form, expanded with psi = x - 2h
            x_form = (n - tri, -(n - d - 1))
            psi_coeffs = (n + 1 - d * d, n - tri)
            expanded = (psi_coeffs[1], psi_coeffs[0] - 2 * psi_coeffs[1])
            same = x_form == expanded == (c.cx, c.ch) and c.psi_view == (psi_coeffs[1], psi_coeffs[0])
            feas = necessity_check(n, d).feasible == (n >= d * d)
            if not (same and feas):
                bad.append((n, d))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 1
    record(7, ok, f"divisor identities and necessity on 2<=d<=20, d<=n<=500 in {elapsed:.3f}s (<1s)"
           + (f"; failures {bad[:5]}" if bad else ""))
    assert ok


def test_criterion_08_psi_schedule():
    rng = random.Random(20261017)
    t0 = time.perf_counter()
    bad = []
    cases = 0
    pairs = [(rng.randint(1, 40), rng.randint(1, 40)) for _ in range(50)]
    for a0, b1 in pairs:
        a1 = schedule_threshold(a0, b1)
        for a in range(a1, a1 + 201):
            if a0 % 2 == 0 and a % 2 == 1:
                continue
            s = psi_schedule(a0, b1, a)
            cases += 1
            oracle = brute_force_schedules(a0, b1, a)
            if not (a == s.m * a0 + 2 * s.r_prime and 0 <= s.r_prime < a0 and s.m * b1 - s.r_prime > 0
                    and (s.m, s.r_prime) in oracle):
                bad.append((a0, b1, a))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 5
    record(8, ok, f"psi_schedule on 50 random (a0, b1), {cases} admissible a, brute-force agreement, "
                  f"{elapsed:.2f}s (<5s)" + (f"; failures {bad[:5]}" if bad else ""))
    assert ok


def test_criterion_09_conics():
    a = conic_invariants(9, 3).as_tuple()
    b = conic_invariants(4, 2).fiber_dim
    ok = a == (20, 14, 4, -1, True) and b == 1
    record(9, ok, f"conic invariants (9,3) -> {a}; (4,2) fiber dim {b}")
    assert ok


def test_criterion_10_cli(capsys, tmp_path):
    schema = load_schema()

    def run(*argv):
        code = main(list(argv))
        return code, capsys.readouterr().out

    code, out = run("verify", "--d", "4", "--format", "json", "--seed", "11")
    valid = True
    try:
        jsonschema.validate(json.loads(out), schema)
    except jsonschema.ValidationError:
        valid = False
    code2, out2 = run("verify", "--d", "4", "--format", "json", "--seed", "11")
    pf = tmp_path / "zeroed_C1b.json"
    pf.write_text(json.dumps({"C_1b": "0"}))
    code3, out3 = run("verify", "--d", "4", "--format", "json", "--param-file", str(pf))
    names_c1b = "C_1b" in json.loads(out3)["certificate"]["violated"]
    ok = code == 0 and valid and out == out2 and code2 == 0 and code3 == 1 and names_c1b
    record(10, ok, f"verify --d 4: exit {code}, schema-valid {valid}, byte-identical rerun {out == out2}; "
                   f"C_1b = 0: exit {code3}, names C_1b {names_c1b}")
    assert ok
