"""The explicit hypersurface ``G``, its gamma table, and the Segre family over the Artin base."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .artin import (
    ArtinElement,
    QuotientContext,
    context_d,
    context_ds,
    d_relations,
    ds_generators,
    symbol_key,
    symbol_name,
    u,
    v,
)
from .errors import PreconditionError, StructureError
from .forms import BiSection, Form, X_VARS, Y, segre_pullback
from .indices import Index, build_index_sets
from .linalg import rank_fraction
from .params import param_ring


@dataclass
class GammaTable:
    d: int
    entries: dict[Index, Form]
    gamma_z: Form

    def __getitem__(self, ij: Index) -> Form:
        return self.entries[ij]


def build_gamma(d: int) -> GammaTable:
    idx = build_index_sets(d)
    R = param_ring(d)
    xm = lambda *e, c=1: Form.x_monomial(R, *e, coeff=c)  # noqa: E731
    entries: dict[Index, Form] = {}
    for (i, j) in idx.I:
        if i <= d - 2 and j <= d - 2:
            k = min(i, j)
            entries[(i, j)] = xm(k, i - k, j - k, d - 2 - i - j + k, c=R.C(i, j))
        elif i == d - 1 and 2 <= j <= d - 1:
            entries[(i, j)] = xm(0, j - 1, 0, d - 1 - j, c=R.Cj(j))
        elif (i, j) == (d - 1, 1):
            entries[(i, j)] = xm(0, 1, 0, d - 3, c=R.var("C_1a")) + xm(0, 0, 1, d - 3, c=R.var("C_1b"))
        else:
            # gamma_(i,d-1) for i <= d-2 and gamma_(d-1,0)
            entries[(i, j)] = Form(R)
    gamma_z = xm(1, 0, 0, d - 3, c=R.var("C_za")) + xm(0, 1, 0, d - 3, c=R.var("C_zb"))
    return GammaTable(d, entries, gamma_z)


def y_linear_monomial(d: int, i: int, j: int) -> tuple[int, int, int, int]:
    """Exponents of ``X0^k X1^(i-k) X2^(j-k) X3^(d-1-i-j+k)`` with ``k = min(i, j)``."""
    k = min(i, j)
    return (k, i - k, j - k, d - 1 - i - j + k)


@lru_cache(maxsize=None)
def build_G(d: int) -> Form:
    gamma = build_gamma(d)
    for ij, g in gamma.entries.items():
        if not g.is_homogeneous(d - 2):
            raise StructureError(f"gamma_{ij} is not homogeneous of degree {d - 2}")
    if not gamma.gamma_z.is_homogeneous(d - 2):
        raise StructureError(f"gamma_z is not homogeneous of degree {d - 2}")
    R = param_ring(d)
    X = [Form.var(R, x) for x in X_VARS]
    Zf = Form.var(R, "Z")
    G = (X[0] * X[3] - X[1] * X[2]) * X[3] ** (d - 2)
    for (i, j) in build_index_sets(d).I:
        Yf = Form.var(R, Y(i, j))
        G = G + Yf * Form.x_monomial(R, *y_linear_monomial(d, i, j))
        G = G + Yf * Zf * gamma[(i, j)]
    G = G + Zf * Zf * gamma.gamma_z
    if not G.is_homogeneous(d):
        raise StructureError("G is not homogeneous of degree d")
    return G


# -- the family over the Artin base ------------------------------------------------------------------


@lru_cache(maxsize=None)
def phi_images(d: int) -> dict[str, Form]:
    """``Y_(i,j) -> sum_l u^l_(i,j) X_l`` and ``Z -> sum_l v^l X_l``."""
    R = param_ring(d)
    X = [Form.var(R, x) for x in X_VARS]
    out = {}
    for (i, j) in build_index_sets(d).I:
        f = Form(R)
        for l in range(4):
            f = f + X[l] * ArtinElement.symbol(R, u(i, j, l))
        out[Y(i, j)] = f
    z = Form(R)
    for l in range(4):
        z = z + X[l] * ArtinElement.symbol(R, v(l))
    out["Z"] = z
    return out


def phi_pullback(p: Form) -> Form:
    return p.substitute(phi_images(p.ring.d))


def f_pullback(p: Form, ctx: Optional[QuotientContext] = None) -> BiSection:
    """Substitute Y and Z, then the Segre map, then reduce in ``ctx`` (default D)."""
    d = p.ring.d
    if ctx is None:
        ctx = context_d(d)
    degs = p.degree_set()
    if len(degs) > 1:
        raise PreconditionError("f_pullback needs a homogeneous form")
    return segre_pullback(phi_pullback(p)).reduce(ctx)


# -- checks -----------------------------------------------------------------------------------------------


@dataclass
class CheckReport:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    status: Optional[str] = None

    def __post_init__(self):
        if self.status is None:
            self.status = "pass" if self.passed else "fail"


def _linear_form_of(a: ArtinElement) -> dict:
    out = {}
    for s, c in a.nil.items():
        if not c.is_constant():
            raise StructureError(f"coefficient of {symbol_name(s)} is not a number")
        out[s] = c.constant_value()
    return out


def _format_linear(form: dict) -> str:
    parts = []
    for s in sorted(form, key=symbol_key):
        c = form[s]
        name = symbol_name(s)
        parts.append(name if c == 1 else f"-{name}" if c == -1 else f"{c}*{name}")
    out = parts[0] if parts else "0"
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def check_G_vanishes(d: int, ctx: Optional[QuotientContext] = None) -> CheckReport:
    """Pull G back along the family; over D (the default) every coefficient must vanish."""
    if ctx is None:
        ctx = context_d(d)
    G = build_G(d)
    unreduced = segre_pullback(phi_pullback(G))
    # quadric part on its own
    quad = G.coefficient_of({Y(i, j): 0 for (i, j) in build_index_sets(d).I} | {"Z": 0})
    quad_pull = segre_pullback(quad)
    ledger = []
    for ((s0, s1), (t0, t1)), coeff in unreduced.sorted_terms():
        if coeff.const:
            raise StructureError("constant residue after the quadric part cancelled")
        expected = {}
        for (a, b), rel in d_relations(d):
            if (a, b) == (s0, t0):
                expected = rel
        lin = _linear_form_of(coeff)
        ledger.append({
            "monomial": f"S0^{s0}*S1^{s1}*T0^{t0}*T1^{t1}",
            "coefficient": _format_linear(lin),
            "is_relation_generator": lin == {k: 1 for k in expected},
        })
    reduced = unreduced.reduce(ctx)
    residues = [
        {"monomial": f"S0^{s0}*S1^{s1}*T0^{t0}*T1^{t1}", "coefficient": str(c)}
        for ((s0, s1), (t0, t1)), c in reduced.sorted_terms()
    ]
    passed = not reduced and not quad_pull and all(e["is_relation_generator"] for e in ledger)
    return CheckReport(
        "G vanishes",
        passed,
        {
            "d": d,
            "context": ctx.label,
            "quadric_part_cancels": not quad_pull,
            "cancellation_ledger": ledger,
            "residues": residues,
        },
    )


def _point(s) -> tuple:
    from fractions import Fraction

    s0, s1 = Fraction(s[0]), Fraction(s[1])
    if s0 == 0 and s1 == 0:
        raise PreconditionError("s = [0:0] is not a point of P^1")
    return s0, s1


def image_generators(d: int, s) -> list[dict]:
    """The two generators of the image of the fiber over ``s`` in D x V.

    Each is returned as ``{"a": {l: coeff}, "b": {(i,j): ArtinElement}, "c": ArtinElement}``.
    The vector ``a_l`` is sent to ``a_l + sum_(i,j) [X_l] phi*(Y_(i,j)) b_(i,j) + [X_l] phi*(Z) c``.
    """
    s0, s1 = _point(s)
    R = param_ring(d)
    images = phi_images(d)
    gens = []
    # fiber over s: the T0 point pulls back to s0 a0 + s1 a2, the T1 point to s0 a1 + s1 a3
    for pair in ((0, 2), (1, 3)):
        a = {pair[0]: s0, pair[1]: s1}
        b = {}
        for (i, j) in build_index_sets(d).I:
            f = images[Y(i, j)]
            coeff = ArtinElement(R)
            for l, sc in a.items():
                coeff = coeff + f.coefficient_of({X_VARS[l]: 1}).terms.get((), ArtinElement(R)).scale(sc)
            b[(i, j)] = coeff
        c = ArtinElement(R)
        for l, sc in a.items():
            c = c + images["Z"].coefficient_of({X_VARS[l]: 1}).terms.get((), ArtinElement(R)).scale(sc)
        gens.append({"a": a, "b": b, "c": c})
    return gens


def check_Ds_maximal(d: int, s=(1, 0)) -> CheckReport:
    """The b- and c-coefficients of the image generators cut out exactly I(D_s) inside D."""
    s0, s1 = _point(s)
    gens = image_generators(d, (s0, s1))
    coeff_forms = []
    for g in gens:
        for ij in build_index_sets(d).I:
            lin = _linear_form_of(g["b"][ij])
            if lin:
                coeff_forms.append(lin)
        lin = _linear_form_of(g["c"])
        if lin:
            coeff_forms.append(lin)
    ideal = ds_generators(d, (s0, s1))
    d_rels = [rel for _, rel in d_relations(d)]

    ctx = context_ds(d, (s0, s1))
    not_killed = [_format_linear(f) for f in coeff_forms if ctx.reduce_linear(f)]

    symbols = sorted({k for f in coeff_forms + ideal + d_rels for k in f}, key=symbol_key)

    def rank(forms):
        return rank_fraction([[f.get(k, 0) for k in symbols] for f in forms]) if forms else 0

    base = rank(d_rels)
    r_coeffs = rank(d_rels + coeff_forms)
    r_ideal = rank(d_rels + ideal)
    r_both = rank(d_rels + coeff_forms + ideal)
    missing = []
    if r_both != r_coeffs:
        for g in ideal:
            if rank(d_rels + coeff_forms + [g]) != r_coeffs:
                missing.append(_format_linear(g))
    passed = not not_killed and r_both == r_coeffs == r_ideal
    return CheckReport(
        "D_s maximal",
        passed,
        {
            "d": d,
            "s": f"[{s0}:{s1}]",
            "coefficients": [_format_linear(f) for f in coeff_forms],
            "coefficients_not_in_ideal": not_killed,
            "ideal_generators_not_generated": missing,
            "rank_over_D": {"coefficients": r_coeffs - base, "ideal": r_ideal - base},
        },
    )

