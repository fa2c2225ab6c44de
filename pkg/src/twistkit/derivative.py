"""The derivative matrix at s = [1:0] and its genericity certificate."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional

from . import kernels
from .artin import (
    ArtinElement,
    QuotientContext,
    context_ds,
    d_relations,
    ds_generators,
    full_symbols,
    symbol_key,
    symbol_name,
    u,
    v,
    w,
)
from .bigraded import Section
from .errors import PreconditionError, UnknownParameterError, VerificationError
from .family import CheckReport
from .forms import BiSection, SForm, bisection_from_slots
from .indices import build_index_sets
from .linalg import det_fraction, ff_rank_det, matrix_mod_p, modular_ranks, poly_mod_p, random_point
from .normal_bundle import (
    build_dG,
    f_name,
    h_m_class,
    invert_dG0,
    slot_name,
    target_module,
)
from .params import ParamPoly, param_ring

BASE_POINT = (1, 0)
# above this many terms the determinant is kept in factored form only
EXPAND_LIMIT = 1 << 17


def _check_point(s) -> None:
    if (Fraction(s[0]), Fraction(s[1])) != (1, 0):
        raise PreconditionError("only s = [1:0] is supported")


# -- Step 1: the basis of m O_{D_s} ---------------------------------------------------------------


@dataclass
class MsBasis:
    d: int
    symbols: list[tuple]
    # printed substitution rule: full symbol -> {reduced symbol: coefficient}
    table: dict[tuple, dict[tuple, Fraction]]
    ctx: QuotientContext

    def __len__(self) -> int:
        return len(self.symbols)

    def names(self) -> list[str]:
        return [symbol_name(s) for s in self.symbols]


def printed_ds_table(d: int) -> dict[tuple, dict[tuple, Fraction]]:
    """The substitution rule at s = [1:0] written out symbol by symbol."""
    idx = build_index_sets(d)
    table: dict[tuple, dict[tuple, Fraction]] = {}
    for (i, j) in idx.I:
        table[u(i, j, 0)] = {}
        table[u(i, j, 1)] = {}
        table[u(i, j, 2)] = {w(i, j + 1): Fraction(-1)} if j <= d - 2 else {}
        table[u(i, j, 3)] = {w(i, j): Fraction(1)} if idx.in_J((i, j)) else {}
    table[v(0)] = {}
    table[v(1)] = {}
    table[v(2)] = {v(2): Fraction(1)}
    table[v(3)] = {v(3): Fraction(1)}
    return table


def _apply_table(table, form: Mapping) -> dict:
    out: dict = {}
    for s, c in form.items():
        for t, k in table[s].items():
            out[t] = out.get(t, 0) + Fraction(c) * k
    return {t: c for t, c in out.items() if c}


@lru_cache(maxsize=None)
def ms_basis(d: int, s=BASE_POINT) -> MsBasis:
    _check_point(s)
    idx = build_index_sets(d)
    table = printed_ds_table(d)
    # w_(i, j+1) for (i, j+1) outside J_d means zero
    for sym, img in table.items():
        for t in list(img):
            if t[0] == "w" and not idx.in_J((t[1], t[2])):
                del img[t]
    failing = []
    for key, rel in d_relations(d):
        if _apply_table(table, rel):
            failing.append(f"D-relation {key}")
    for gen in ds_generators(d, (1, 0)):
        if _apply_table(table, gen):
            failing.append("D_s generator")
    ctx = context_ds(d, (1, 0))
    for sym in full_symbols(d):
        if ctx.image(sym) != table[sym]:
            failing.append(f"{symbol_name(sym)}: elimination gives {ctx.image(sym)}, table gives {table[sym]}")
    if failing:
        raise VerificationError("inconsistent D_s table: " + "; ".join(failing[:5]))
    symbols = [w(i, j) for (i, j) in idx.J] + [v(2), v(3)]
    if sorted(ctx.reduced_basis(), key=symbol_key) != symbols:
        raise VerificationError("reduced basis of D_s differs from the expected w, v2, v3 list")
    return MsBasis(d, symbols, table, ctx)


# -- Steps 2 and 3 -----------------------------------------------------------------------------


def _coefficient_slots(sec: Section, sym: tuple, d: int) -> list[SForm]:
    R = param_ring(d)
    slots = []
    for j in range(d):
        f = sec.component(slot_name(j))
        terms = {}
        for p, c in f.terms.items():
            k = c.coefficient(sym)
            if k:
                terms[p] = ArtinElement(R, k)
        slots.append(SForm(R, f.degree, terms))
    return slots


@lru_cache(maxsize=None)
def _step2_slots(d: int) -> dict[tuple, list[SForm]]:
    basis = ms_basis(d)
    dG = build_dG(d, basis.ctx)
    c_img = dG.dGm.images["c"]
    return {sym: _coefficient_slots(c_img, sym, d) for sym in basis.symbols}


def step2_coefficients(d: int) -> dict[tuple, BiSection]:
    """For each basis symbol w, the coefficient of w in dGm(c), as a form of bidegree (d-1, d-1)."""
    R = param_ring(d)
    return {sym: bisection_from_slots(R, slots, d - 1) for sym, slots in _step2_slots(d).items()}


@lru_cache(maxsize=None)
def step3_preimages(d: int) -> dict[tuple, Section]:
    """``-dG0^{-1}`` applied to each Step 2 coefficient."""
    out = {}
    for sym, slots in _step2_slots(d).items():
        R = param_ring(d)
        t = Section(target_module(d), -1, R, {slot_name(j): f for j, f in enumerate(slots)})
        out[sym] = -invert_dG0(d, t)
    return out


def check_pipeline_identity(d: int) -> CheckReport:
    """Step 3 agrees with the coefficients of h_m, and dG0 of each preimage returns minus Step 2."""
    basis = ms_basis(d)
    hm = h_m_class(d, basis.ctx)
    dG0 = build_dG(d, basis.ctx).dG0
    mismatches = []
    for sym, sec in step3_preimages(d).items():
        R = param_ring(d)
        coeff = Section(hm.module, hm.m, R, {
            n: SForm(R, f.degree, {p: ArtinElement(R, c.coefficient(sym)) for p, c in f.terms.items()})
            for n, f in hm.comps.items()
        })
        if coeff != sec:
            mismatches.append(f"{symbol_name(sym)}: h_m coefficient differs from Step 3")
        back = dG0.apply(sec)
        slots = _step2_slots(d)[sym]
        expect = Section(target_module(d), -1, R, {slot_name(j): -f for j, f in enumerate(slots)})
        if back != expect:
            mismatches.append(f"{symbol_name(sym)}: dG0(Step 3) != -Step 2")
    return CheckReport("pipeline identity", not mismatches, {"d": d, "mismatches": mismatches})


# -- Steps 4 and 5: the matrix ----------------------------------------------------------------


@dataclass
class DerivMatrix:
    d: int
    rows: list[tuple]
    cols: list[str]
    entries: list[list[ParamPoly]]
    normalization: str = "1/S0"

    @property
    def size(self) -> int:
        return len(self.rows)

    def row_names(self) -> list[str]:
        return [symbol_name(s) for s in self.rows]

    def row(self, sym: tuple) -> dict[str, ParamPoly]:
        k = self.rows.index(sym)
        return {c: e for c, e in zip(self.cols, self.entries[k]) if e}

    def substitute(self, assignment: Mapping[str, Fraction]) -> DerivMatrix:
        return DerivMatrix(self.d, self.rows, self.cols,
                           [[e.substitute(assignment) for e in row] for row in self.entries],
                           self.normalization)


def dq_columns(d: int) -> list[str]:
    return ["g0", "g1"] + [f_name(i, j) for (i, j) in build_index_sets(d).kernel_f_indices]


@lru_cache(maxsize=None)
def dq_matrix(d: int, s=BASE_POINT) -> DerivMatrix:
    _check_point(s)
    basis = ms_basis(d)
    cols = dq_columns(d)
    col_index = {c: k for k, c in enumerate(cols)}
    R = param_ring(d)
    idx = build_index_sets(d)
    entries = []
    for sym in basis.symbols:
        sec = step3_preimages(d)[sym]
        row = [R.zero() for _ in cols]
        for name, f in sec.comps.items():
            if name == "c":
                raise VerificationError(f"unexpected c-component in the row of {symbol_name(sym)}")
            # Step 4: restrict to S1 = 0
            f = f.set_S1_zero()
            if not f:
                continue
            if name in ("e0", "e1"):
                # S0^2 e = g, so alpha S0 e = (alpha / S0) g
                if f.degree != 1:
                    raise VerificationError(f"e-coefficient of {symbol_name(sym)} has degree {f.degree}")
                col = "g" + name[1]
            else:
                i, j = (int(t) for t in name[3:-1].split(","))
                if i > d - 2 or not idx.in_I((i, j)):
                    raise VerificationError(
                        f"row {symbol_name(sym)} has a {name} component with no f-preimage"
                    )
                if f.degree != 0:
                    raise VerificationError(f"b-coefficient of {symbol_name(sym)} has degree {f.degree}")
                col = f_name(i, j)
            coeff = f.terms[f.degree]
            if coeff.nil:
                raise VerificationError(f"row {symbol_name(sym)} has a nilpotent entry")
            row[col_index[col]] = row[col_index[col]] + coeff.const
        entries.append(row)
    M = DerivMatrix(d, list(basis.symbols), cols, entries)
    if len(M.rows) != len(M.cols) or len(M.rows) != d * d - d - 2:
        raise VerificationError(f"derivative matrix is {len(M.rows)} x {len(M.cols)}")
    return M


# -- certificate ------------------------------------------------------------------------------


@dataclass
class Factor:
    poly: ParamPoly
    multiplicity: int

    def __str__(self) -> str:
        base = str(self.poly)
        if len(self.poly) > 1:
            base = f"({base})"
        return base if self.multiplicity == 1 else f"{base}^{self.multiplicity}"


@dataclass
class GenericityCertificate:
    d: int
    issued: bool
    # None when the expansion would exceed EXPAND_LIMIT terms
    determinant: Optional[ParamPoly]
    constant: Fraction
    factors: list[Factor]
    witness: Optional[dict[str, int]]
    witness_value: Optional[Fraction]
    violated: list[str] = field(default_factory=list)
    modular_checks: dict = field(default_factory=dict)
    rank: int = 0

    @property
    def conditions(self) -> list[ParamPoly]:
        return [f.poly for f in self.factors]

    def factored(self) -> str:
        if not self.issued and not self.factors:
            return "0"
        parts = []
        c = self.constant
        if c == -1:
            parts.append("-1")
        elif c != 1:
            parts.append(str(c))
        parts.extend(str(f) for f in self.factors)
        return "*".join(parts) if parts else "1"


def _split_monomial_content(p: ParamPoly) -> tuple[Fraction, dict[int, int], ParamPoly]:
    """``p = c * prod(var_k^e_k) * q`` with ``q`` monomial-free and content 1."""
    R = p.ring
    content = p.monomial_content()
    mono = {k: e for k, e in enumerate(content) if e}
    if mono:
        q = ParamPoly(R, {tuple(a - b for a, b in zip(m, content)): c for m, c in p.terms.items()})
    else:
        q = p
    lead = q.leading_term()[1]
    num = 0
    den = 1
    from math import gcd

    for c in q.terms.values():
        num = gcd(num, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
    scale = Fraction(num, den) if lead > 0 else -Fraction(num, den)
    q = q.scale(1 / scale)
    return scale, mono, q


def factor_determinant(peeled: list[ParamPoly], core: ParamPoly, sign: int = 1) -> tuple[Fraction, list[Factor]]:
    R = core.ring
    constant = Fraction(sign)
    counts: dict[ParamPoly, int] = {}
    order: list[ParamPoly] = []

    def add(poly: ParamPoly, k: int = 1) -> None:
        if poly not in counts:
            counts[poly] = 0
            order.append(poly)
        counts[poly] += k

    for p in list(peeled) + [core]:
        c, mono, q = _split_monomial_content(p)
        constant *= c
        for var, e in mono.items():
            add(R.var(R.names[var]), e)
        if not q.is_constant():
            add(q)
        else:
            constant *= q.constant_value()
    factors = [Factor(p, counts[p]) for p in order]
    factors.sort(key=lambda f: (len(f.poly), f.poly.variables()))
    return constant, factors


def _eval_factors(constant: Fraction, factors: list[Factor], assignment: Mapping[str, Fraction]) -> Fraction:
    val = constant
    for f in factors:
        val *= f.poly.specialize(assignment) ** f.multiplicity
    return val


def _witness_candidates(names: list[str], seed: int):
    yield {n: 1 for n in names}
    yield {n: k + 1 for k, n in enumerate(names)}
    rng = random.Random(seed)
    for _ in range(50):
        yield {n: rng.randint(-9, 9) or 1 for n in names}


def certify_surjective(
    M: DerivMatrix,
    assignment: Optional[Mapping[str, Fraction]] = None,
    seed: int = 0,
    modular_seeds: int = 20,
) -> GenericityCertificate:
    """Exact determinant, its factorisation into nonvanishing conditions, and a small integer witness.

    ``assignment`` fixes some parameters before certifying; factors of the
    generic determinant that vanish under it are reported as violated.
    """
    if M.size != len(M.cols):
        raise PreconditionError("certify_surjective needs a square matrix")
    R = param_ring(M.d)
    generic = ff_rank_det(M.entries, expand=False)
    if generic.rank < M.size:
        return GenericityCertificate(M.d, False, R.zero(), Fraction(0), [], None, None,
                                     ["determinant is identically zero"], rank=generic.rank)
    constant, factors = factor_determinant(generic.peeled, generic.core_det, generic.sign)
    estimate = 1
    for f in factors:
        estimate *= len(f.poly) ** f.multiplicity
    det = None
    if estimate <= EXPAND_LIMIT:
        det = ff_rank_det(M.entries).det
        product = R.const(constant)
        for f in factors:
            product = product * f.poly ** f.multiplicity
        if product != det:
            raise VerificationError("factorisation does not multiply back to the determinant")

    # modular cross-check of rank and determinant at random points
    p = kernels.DEFAULT_PRIME
    seeds = list(range(seed, seed + modular_seeds))
    ranks = modular_ranks(M.entries, seeds, p)
    det_ok = True
    for s in seeds:
        pt = random_point(R, s, p)
        lhs = kernels.det_mod_p(matrix_mod_p(M.entries, pt, p), p)
        rhs = constant.numerator * pow(constant.denominator, p - 2, p) % p
        for f in factors:
            rhs = rhs * pow(poly_mod_p(f.poly, pt, p), f.multiplicity, p) % p
        det_ok = det_ok and lhs == rhs
    modular = {
        "prime": p,
        "seeds": len(seeds),
        "ranks_agree": all(r == generic.rank for r in ranks),
        "determinant_agrees": det_ok,
        "backend": kernels.BACKEND,
    }

    if assignment:
        for name in assignment:
            if name not in R.index:
                raise UnknownParameterError(name)
        violated = [str(f.poly) for f in factors if f.poly.substitute(assignment).is_zero()]
        special_rank = ff_rank_det(M.substitute(assignment).entries, expand=False).rank
        if bool(violated) != (special_rank < M.size):
            raise VerificationError("factor conditions disagree with the rank of the specialized matrix")
        if violated:
            return GenericityCertificate(M.d, False, det, constant, factors, None, None,
                                         violated, modular, special_rank)
        fixed = {k: Fraction(x) for k, x in assignment.items()}
    else:
        fixed = {}

    free = [n for n in R.names if n not in fixed]
    witness = None
    value = None
    for cand in _witness_candidates(free, seed):
        full = dict(fixed)
        full.update({k: Fraction(x) for k, x in cand.items()})
        val = _eval_factors(constant, factors, full)
        if val:
            exact = det_fraction([[e.specialize(full) for e in row] for row in M.entries])
            if exact != val:
                raise VerificationError("witness evaluation disagrees with the numeric determinant")
            witness, value = cand, val
            break
    issued = witness is not None
    return GenericityCertificate(M.d, issued, det, constant, factors, witness, value,
                                 [] if issued else ["no witness found"], modular, generic.rank)


# -- cone extension ------------------------------------------------------------------------------


def extend_to_n(d: int, n_prime: int) -> dict:
    build_index_sets(d)
    if n_prime < d * d:
        raise PreconditionError(
            f"n' = {n_prime} < d^2 = {d * d}: no twisting family exists below the necessity bound"
        )
    extra = n_prime - d * d
    rank_X = d * d - d - 1
    rank_Xp = rank_X + extra
    # quotient by the O(1)-block: O(1)^(n+1-d^2) with n = d^2, and O(1)^(n'+1-d^2)
    quotient_X = rank_X - 1
    quotient_Xp = rank_Xp - (n_prime + 1 - d * d)
    return {
        "d": d,
        "n_prime": n_prime,
        "extra_summands": extra,
        "rank_X": rank_X,
        "rank_X_prime": rank_Xp,
        "quotient_dimension_X": quotient_X,
        "quotient_dimension_X_prime": quotient_Xp,
        "spanning_transfers": quotient_X == quotient_Xp and rank_Xp == rank_X + extra,
    }
