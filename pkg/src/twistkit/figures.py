"""Reference tables transcribed from their printed form, and comparison against recomputed values.

Printed tables are written out here from their general-d formulas and are
never used as input to the computation; they only serve as golden values.
Two known print discrepancies are recognised and reported as errata:

* the e0 row of the dG table prints ``T1^(d-2)`` where the relations force ``T1^(d-1)``;
* the v rows of the step 2, step 3 and matrix tables omit the factor 2 coming from the ``Z^2`` term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .artin import ArtinElement, context_d, symbol_key, symbol_name, u, v, w
from .bigraded import Section
from .derivative import dq_matrix, ms_basis, printed_ds_table, step2_coefficients, step3_preimages
from .errors import PreconditionError
from .family import build_gamma, f_pullback
from .forms import BiSection, SForm, X_VARS, bisection_from_slots, segre_pullback
from .indices import build_index_sets
from .normal_bundle import b_name, build_dG, f_name, slot_name, tev_module
from .params import ParamPoly, param_ring

MATCH = "match"
FACTOR2 = "match-up-to-factor-2"
ERRATUM = "erratum"
MISMATCH = "mismatch"

FIGURES = (1, 2, 3, 4, 5, 6)


@dataclass
class RowComparison:
    row: str
    computed: str
    printed: str
    status: str


@dataclass
class FigureComparison:
    figure: int
    d: int
    rows: list[RowComparison] = field(default_factory=list)

    @property
    def status(self) -> str:
        if any(r.status == MISMATCH for r in self.rows):
            return "fail"
        if any(r.status in (FACTOR2, ERRATUM) for r in self.rows):
            return "pass-with-erratum"
        return "pass"

    def errata(self) -> list[str]:
        return [f"{r.row}: {r.status}" for r in self.rows if r.status in (FACTOR2, ERRATUM)]


# -- formatting -----------------------------------------------------------------------------------


def _coeff_str(c) -> str:
    if isinstance(c, ArtinElement):
        return str(c)
    return str(c)


def _scaled(term: str, coeff) -> str:
    text = _coeff_str(coeff)
    if text == "1":
        return term
    if text == "-1":
        return f"-{term}"
    if " " in text and not text.startswith("("):
        text = f"({text})"
    return f"{text} {term}"


def _join(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _t_part(t0: int, t1: int) -> str:
    bits = []
    for name, e in (("T0", t0), ("T1", t1)):
        if e == 1:
            bits.append(name)
        elif e > 1:
            bits.append(f"{name}^{e}")
    return " ".join(bits) if bits else "1"


def format_bisection(f: BiSection) -> str:
    parts = []
    for ((s0, s1), (t0, t1)), c in f.sorted_terms():
        parts.append(_scaled(f"S0^{s0} S1^{s1} · {_t_part(t0, t1)}", c))
    return _join(parts)


def _s_mono(p: int, q: int) -> str:
    bits = []
    for name, e in (("S0", p), ("S1", q)):
        if e == 1:
            bits.append(name)
        elif e > 1:
            bits.append(f"{name}^{e}")
    return " ".join(bits)


def format_section(sec: Section) -> str:
    parts = []
    for name in sec.module.names:
        f = sec.comps.get(name)
        if not f:
            continue
        for p in sorted(f.terms, reverse=True):
            mono = _s_mono(p, f.degree - p)
            term = f"{mono} {name}" if mono else name
            parts.append(_scaled(term, f.terms[p]))
    return _join(parts)


def format_row(entries: dict[str, ParamPoly]) -> str:
    parts = [_scaled(f"(1/S0) {col}", c) for col, c in entries.items()]
    return _join(parts)


def format_linear(form: dict) -> str:
    parts = [_scaled(symbol_name(s), c) for s, c in sorted(form.items(), key=lambda kv: symbol_key(kv[0]))]
    return _join(parts)


# -- helpers for writing printed rows ---------------------------------------------------------------


def _bi(R, coeff, s0: int, s1: int, t0: int, t1: int) -> BiSection:
    if min(s0, s1, t0, t1) < 0:
        return BiSection(R, (s0 + s1, t0 + t1))
    c = coeff if isinstance(coeff, ArtinElement) else ArtinElement.scalar(R, coeff)
    return BiSection.monomial(R, (s0, s1), (t0, t1), c)


def _sum(items: list[BiSection]) -> BiSection:
    out = items[0]
    for x in items[1:]:
        out = out + x
    return out


def _sec(d: int, parts: list[tuple[str, int, int, object]]) -> Section:
    """Section of Tev(-1) from (generator, S0-exp, S1-exp, coefficient) tuples."""
    R = param_ring(d)
    out = Section(tev_module(d), -1, R)
    for name, p, q, c in parts:
        coeff = c if isinstance(c, ArtinElement) else ArtinElement.scalar(R, c)
        out = out + Section(tev_module(d), -1, R, {name: SForm.monomial(R, p, q, coeff)})
    return out


def _compare(computed, printed, allow_factor2: bool, erratum: bool = False) -> str:
    if computed == printed:
        return MATCH
    if allow_factor2 and _times(printed, 2) == computed:
        return FACTOR2
    if erratum:
        return ERRATUM
    return MISMATCH


def _times(x, k: int):
    if isinstance(x, dict):
        return {c: e.scale(k) for c, e in x.items()}
    return x.scale(k) if isinstance(x, Section) else x * k


# -- dG table ---------------------------------------------------------------------------------------


def printed_dG_rows(d: int) -> dict[str, BiSection]:
    """Constant rows of the printed dG table."""
    R = param_ring(d)
    rows: dict[str, BiSection] = {}
    for (i, j) in build_index_sets(d).I:
        rows[b_name(i, j)] = _bi(R, 1, i, d - 1 - i, j, d - 1 - j)
    rows["a0"] = _bi(R, 1, 0, d - 1, 0, d - 1)
    rows["a1"] = _bi(R, -1, 0, d - 1, 1, d - 2)
    rows["a2"] = _bi(R, -1, 1, d - 2, 0, d - 1)
    rows["a3"] = _bi(R, 1, 1, d - 2, 1, d - 2)
    rows["e0"] = _bi(R, 1, 0, d - 2, 0, d - 2)
    rows["e1"] = _bi(R, -1, 0, d - 2, 1, d - 2)
    return rows


def c_row_formula(d: int) -> BiSection:
    """``sum_l (2 v^l f*gamma_z + sum u^l_(i,j) f*gamma_(i,j)) f*X_l``, reduced in D."""
    R = param_ring(d)
    gamma = build_gamma(d)
    ctx = context_d(d)
    total = BiSection(R, (d - 1, d - 1))
    gz = segre_pullback(gamma.gamma_z)
    for l, x in enumerate(X_VARS):
        fx = segre_pullback(_x_form(R, l))
        inner = gz * ArtinElement.symbol(R, v(l), 2)
        for ij, g in gamma.entries.items():
            if g:
                inner = inner + segre_pullback(g) * ArtinElement.symbol(R, u(ij[0], ij[1], l))
        total = total + inner * fx
    return total.reduce(ctx)


def _x_form(R, l: int):
    from .forms import Form

    e = [0, 0, 0, 0]
    e[l] = 1
    return Form.x_monomial(R, *e)


def _row_bisection(d: int, sec: Section) -> BiSection:
    """Recombine a row of slot forms into a form of T-degree d - 1."""
    slots = [sec.component(slot_name(j)) for j in range(d)]
    return bisection_from_slots(param_ring(d), slots, sec.m + d)


def compare_figure1(d: int) -> FigureComparison:
    dG = build_dG(d)
    printed = printed_dG_rows(d)
    comp = FigureComparison(1, d)
    c_computed = _row_bisection(d, dG.full.images["c"])
    c_expected = c_row_formula(d)
    comp.rows.append(RowComparison(
        "c", format_bisection(c_computed), "sum_l (2 v^l gamma_z + sum u^l gamma) f*X_l",
        MATCH if c_computed == c_expected and not dG.dG0.images["c"] else MISMATCH,
    ))
    for name in [b_name(i, j) for (i, j) in build_index_sets(d).I]:
        computed = _row_bisection(d, dG.dG0.images[name])
        comp.rows.append(RowComparison(name, format_bisection(computed), format_bisection(printed[name]),
                                       _compare(computed, printed[name], False)))
    for l in range(4):
        computed = _row_bisection(d, dG.a_rows[l].constant_part())
        key = f"a{l}"
        comp.rows.append(RowComparison(key, format_bisection(computed), format_bisection(printed[key]),
                                       _compare(computed, printed[key], False)))
    for e in ("e0", "e1"):
        computed = _row_bisection(d, dG.dG0.images[e])
        # the printed e0 row has T-degree d - 2; the relations force d - 1
        comp.rows.append(RowComparison(e, format_bisection(computed), format_bisection(printed[e]),
                                       _compare(computed, printed[e], False, erratum=(e == "e0"))))
    return comp


# -- gamma table (third column) -----------------------------------------------------------------------


def printed_gamma_pullbacks(d: int) -> dict[str, BiSection]:
    R = param_ring(d)
    rows = {}
    idx = build_index_sets(d)
    for (i, j) in idx.I:
        key = f"gamma_({i},{j})"
        if i <= d - 2 and j <= d - 2:
            rows[key] = _bi(R, R.C(i, j), i, d - 2 - i, j, d - 2 - j)
        elif i == d - 1 and j >= 2:
            rows[key] = _bi(R, R.Cj(j), j - 1, d - 1 - j, 0, d - 2)
        elif (i, j) == (d - 1, 1):
            rows[key] = _sum([_bi(R, R.var("C_1a"), 1, d - 3, 0, d - 2),
                              _bi(R, R.var("C_1b"), 0, d - 2, 1, d - 3)])
        else:
            rows[key] = BiSection(R, (d - 2, d - 2))
    rows["gamma_z"] = _sum([_bi(R, R.var("C_za"), 1, d - 3, 1, d - 3),
                            _bi(R, R.var("C_zb"), 1, d - 3, 0, d - 2)])
    return rows


def compare_figure2(d: int) -> FigureComparison:
    gamma = build_gamma(d)
    printed = printed_gamma_pullbacks(d)
    comp = FigureComparison(2, d)
    for (i, j), g in gamma.entries.items():
        key = f"gamma_({i},{j})"
        computed = f_pullback(g)
        comp.rows.append(RowComparison(key, format_bisection(computed), format_bisection(printed[key]),
                                       _compare(computed, printed[key], False)))
    computed = f_pullback(gamma.gamma_z)
    comp.rows.append(RowComparison("gamma_z", format_bisection(computed), format_bisection(printed["gamma_z"]),
                                   _compare(computed, printed["gamma_z"], False)))
    return comp


# -- Step 1 table -------------------------------------------------------------------------------------


def compare_figure3(d: int) -> FigureComparison:
    basis = ms_basis(d)
    printed = printed_ds_table(d)
    comp = FigureComparison(3, d)
    idx = build_index_sets(d)
    for sym in sorted(printed, key=symbol_key):
        computed = basis.ctx.image(sym)
        shown = {t: c for t, c in printed[sym].items() if t[0] != "w" or idx.in_J((t[1], t[2]))}
        comp.rows.append(RowComparison(symbol_name(sym), format_linear(computed), format_linear(shown),
                                       MATCH if computed == shown else MISMATCH))
    return comp


# -- Step 2 table -------------------------------------------------------------------------------------


def printed_step2(d: int) -> dict[tuple, BiSection]:
    R = param_ring(d)
    C, Cj = R.C, R.Cj
    C1a, C1b, Cza, Czb = (R.var(n) for n in ("C_1a", "C_1b", "C_za", "C_zb"))
    rows = {}
    for (i, j) in build_index_sets(d).J:
        if i <= d - 2:
            rows[w(i, j)] = _bi(R, C(i, j) - C(i, j - 1), i, d - 1 - i, j, d - 1 - j)
    for j in range(3, d):
        rows[w(d - 1, j)] = _sum([_bi(R, Cj(j), j - 1, d - j, 0, d - 1),
                                  _bi(R, -Cj(j - 1), j - 2, d + 1 - j, 1, d - 2)])
    rows[w(d - 1, 2)] = _sum([_bi(R, -C1a, 1, d - 2, 1, d - 2),
                              _bi(R, -C1b, 0, d - 1, 2, d - 3),
                              _bi(R, Cj(2), 1, d - 2, 0, d - 1)])
    rows[w(d - 1, 1)] = _sum([_bi(R, C1a, 1, d - 2, 0, d - 1), _bi(R, C1b, 0, d - 1, 1, d - 2)])
    rows[v(2)] = _sum([_bi(R, Cza, 1, d - 2, 2, d - 3), _bi(R, Czb, 1, d - 2, 1, d - 2)])
    rows[v(3)] = _sum([_bi(R, Cza, 1, d - 2, 1, d - 2), _bi(R, Czb, 1, d - 2, 0, d - 1)])
    return rows


def compare_figure4(d: int) -> FigureComparison:
    computed = step2_coefficients(d)
    printed = printed_step2(d)
    comp = FigureComparison(4, d)
    for sym in ms_basis(d).symbols:
        c, p = computed[sym], printed[sym]
        comp.rows.append(RowComparison(symbol_name(sym), format_bisection(c), format_bisection(p),
                                       _compare(c, p, allow_factor2=(sym[0] == "v"))))
    return comp


# -- Step 3 table -------------------------------------------------------------------------------------


def printed_step3(d: int) -> dict[tuple, Section]:
    R = param_ring(d)
    C, Cj = R.C, R.Cj
    C1a, C1b, Cza, Czb = (R.var(n) for n in ("C_1a", "C_1b", "C_za", "C_zb"))
    rows = {}
    for (i, j) in build_index_sets(d).J:
        if i <= d - 2:
            rows[w(i, j)] = _sec(d, [(b_name(i, j), 0, 0, -C(i, j) + C(i, j - 1))])
    for j in range(4, d):
        rows[w(d - 1, j)] = _sec(d, [(b_name(j - 1, 0), 0, 0, -Cj(j)), (b_name(j - 2, 1), 0, 0, Cj(j - 1))])
    if d >= 4:
        rows[w(d - 1, 3)] = _sec(d, [(b_name(2, 0), 0, 0, -Cj(3)), ("e1", 1, 0, -Cj(2))])
    rows[w(d - 1, 2)] = _sec(d, [("e1", 1, 0, -C1a), (b_name(0, 2), 0, 0, C1b), ("e0", 1, 0, -Cj(2))])
    rows[w(d - 1, 1)] = _sec(d, [("e0", 1, 0, -C1a), ("e1", 0, 1, C1b)])
    rows[v(2)] = _sec(d, [(b_name(1, 2), 0, 0, -Cza), ("e1", 1, 0, Czb)])
    rows[v(3)] = _sec(d, [("e1", 1, 0, Cza), ("e0", 1, 0, -Czb)])
    return rows


def compare_figure5(d: int) -> FigureComparison:
    computed = step3_preimages(d)
    printed = printed_step3(d)
    comp = FigureComparison(5, d)
    for sym in ms_basis(d).symbols:
        c, p = computed[sym], printed[sym]
        comp.rows.append(RowComparison(symbol_name(sym), format_section(c), format_section(p),
                                       _compare(c, p, allow_factor2=(sym[0] == "v"))))
    return comp


# -- Step 5 table -------------------------------------------------------------------------------------


def printed_step5(d: int) -> dict[tuple, dict[str, ParamPoly]]:
    R = param_ring(d)
    C, Cj = R.C, R.Cj
    C1a, C1b, Cza, Czb = (R.var(n) for n in ("C_1a", "C_1b", "C_za", "C_zb"))
    rows: dict[tuple, dict[str, ParamPoly]] = {}
    for (i, j) in build_index_sets(d).J:
        if i <= d - 2:
            rows[w(i, j)] = {f_name(i, j): -C(i, j) + C(i, j - 1)}
    for j in range(4, d):
        rows[w(d - 1, j)] = {f_name(j - 1, 0): -Cj(j), f_name(j - 2, 1): Cj(j - 1)}
    if d >= 4:
        rows[w(d - 1, 3)] = {f_name(2, 0): -Cj(3), "g1": -Cj(2)}
    rows[w(d - 1, 2)] = {"g1": -C1a, f_name(0, 2): C1b, "g0": -Cj(2)}
    rows[w(d - 1, 1)] = {"g0": -C1a}
    rows[v(2)] = {f_name(1, 2): -Cza, "g1": Czb}
    rows[v(3)] = {"g1": Cza, "g0": -Czb}
    return {k: {c: e for c, e in row.items() if e} for k, row in rows.items()}


def compare_figure6(d: int) -> FigureComparison:
    M = dq_matrix(d)
    printed = printed_step5(d)
    comp = FigureComparison(6, d)
    for sym in M.rows:
        c, p = M.row(sym), printed[sym]
        comp.rows.append(RowComparison(symbol_name(sym), format_row(c), format_row(p),
                                       _compare(c, p, allow_factor2=(sym[0] == "v"))))
    return comp


COMPARATORS: dict[int, Callable[[int], FigureComparison]] = {
    1: compare_figure1,
    2: compare_figure2,
    3: compare_figure3,
    4: compare_figure4,
    5: compare_figure5,
    6: compare_figure6,
}


def compare_figure(figure: int, d: int) -> FigureComparison:
    if figure not in COMPARATORS:
        raise PreconditionError(f"unknown figure {figure}; choose one of {sorted(COMPARATORS)}")
    build_index_sets(d)
    return COMPARATORS[figure](d)
