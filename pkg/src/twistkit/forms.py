"""Polynomials in the ambient coordinates and bihomogeneous forms on P^1 x P^1.

``Form`` is a sparse polynomial in ``X0..X3``, ``Y_(i,j)`` and ``Z`` with
ArtinElement coefficients.  Monomials are sorted tuples of
``(variable, exponent)`` pairs.  ``BiSection`` is a bihomogeneous form in
``S0, S1; T0, T1`` and ``SForm`` a homogeneous form in ``S0, S1`` alone.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Optional

from .artin import ArtinElement, QuotientContext, reduce_in_context
from .errors import PreconditionError, StructureError
from .params import ParamRing

Var = str
Mono = tuple  # tuple[tuple[Var, int], ...]

X_VARS = ("X0", "X1", "X2", "X3")


def Y(i: int, j: int) -> Var:
    return f"Y_({i},{j})"


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        out[v] = out.get(v, 0) + e
    return tuple(sorted(out.items()))


def _mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def _coerce_coeff(ring: ParamRing, c) -> ArtinElement:
    if isinstance(c, ArtinElement):
        return c
    return ArtinElement.scalar(ring, c)


class Form:
    """Sparse polynomial in X, Y, Z with ArtinElement coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: ParamRing, terms: Mapping[Mono, ArtinElement] | None = None):
        self.ring = ring
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, ring: ParamRing, name: Var) -> Form:
        return cls(ring, {((name, 1),): ArtinElement.scalar(ring, 1)})

    @classmethod
    def monomial(cls, ring: ParamRing, exps: Mapping[Var, int], coeff=1) -> Form:
        if any(e < 0 for e in exps.values()):
            raise PreconditionError(f"negative exponent in {dict(exps)}")
        mono = tuple(sorted((v, e) for v, e in exps.items() if e))
        return cls(ring, {mono: _coerce_coeff(ring, coeff)})

    @classmethod
    def x_monomial(cls, ring: ParamRing, e0: int, e1: int, e2: int, e3: int, coeff=1) -> Form:
        return cls.monomial(ring, {"X0": e0, "X1": e1, "X2": e2, "X3": e3}, coeff)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: Form) -> Form:
        if not isinstance(other, Form):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return Form(self.ring, out)

    def __neg__(self) -> Form:
        return Form(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def __mul__(self, other) -> Form:
        if isinstance(other, Form):
            out: dict[Mono, ArtinElement] = {}
            for ma, ca in self.terms.items():
                for mb, cb in other.terms.items():
                    c = ca * cb
                    if not c:
                        continue
                    m = _mono_mul(ma, mb)
                    out[m] = out[m] + c if m in out else c
            return Form(self.ring, out)
        c = _coerce_coeff(self.ring, other)
        return Form(self.ring, {m: x * c for m, x in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Form:
        out = Form(self.ring, {(): ArtinElement.scalar(self.ring, 1)})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.terms == other.terms

    def variables(self) -> set[Var]:
        return {v for m in self.terms for v, _ in m}

    def degree_set(self) -> set[int]:
        return {_mono_degree(m) for m in self.terms}

    def is_homogeneous(self, deg: Optional[int] = None) -> bool:
        degs = self.degree_set()
        if not degs:
            return True
        return len(degs) == 1 and (deg is None or degs == {deg})

    def diff(self, var: Var) -> Form:
        out: dict[Mono, ArtinElement] = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(var, 0)
            if not e:
                continue
            if e == 1:
                del d[var]
            else:
                d[var] = e - 1
            nm = tuple(sorted(d.items()))
            t = c.scale(e)
            out[nm] = out[nm] + t if nm in out else t
        return Form(self.ring, out)

    def substitute(self, images: Mapping[Var, Form]) -> Form:
        """Replace each listed variable by a Form; others are kept."""
        out = Form(self.ring)
        power_cache: dict[tuple[Var, int], Form] = {}
        for m, c in self.terms.items():
            acc = Form(self.ring, {(): c})
            kept = []
            for v, e in m:
                if v in images:
                    key = (v, e)
                    if key not in power_cache:
                        power_cache[key] = images[v] ** e
                    acc = acc * power_cache[key]
                else:
                    kept.append((v, e))
            if kept:
                acc = acc * Form(self.ring, {tuple(kept): ArtinElement.scalar(self.ring, 1)})
            out = out + acc
        return out

    def coefficient_of(self, var_part: Mapping[Var, int]) -> Form:
        """Collect the terms whose exponents on the given variables match exactly.

        The listed variables are stripped from the returned Form.
        """
        out: dict[Mono, ArtinElement] = {}
        for m, c in self.terms.items():
            d = dict(m)
            if all(d.get(v, 0) == e for v, e in var_part.items()):
                rest = tuple((v, e) for v, e in m if v not in var_part)
                out[rest] = out[rest] + c if rest in out else c
        return Form(self.ring, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m) or "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Form({self})"


def segre_monomial(e0: int, e1: int, e2: int, e3: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """``X0 -> S0T0, X1 -> S0T1, X2 -> S1T0, X3 -> S1T1`` on one monomial."""
    return (e0 + e1, e2 + e3), (e0 + e2, e1 + e3)


class BiSection:
    """Bihomogeneous form of bidegree (a, b) in (S0, S1; T0, T1)."""

    __slots__ = ("ring", "bidegree", "terms")

    def __init__(self, ring: ParamRing, bidegree: tuple[int, int],
                 terms: Mapping[tuple, ArtinElement] | None = None):
        self.ring = ring
        self.bidegree = tuple(bidegree)
        a, b = self.bidegree
        clean = {}
        for key, c in (terms or {}).items():
            if not c:
                continue
            (s0, s1), (t0, t1) = key
            if s0 + s1 != a or t0 + t1 != b or min(s0, s1, t0, t1) < 0:
                raise StructureError(f"monomial {key} does not have bidegree {self.bidegree}")
            clean[key] = c
        self.terms = clean

    @classmethod
    def monomial(cls, ring: ParamRing, s: tuple[int, int], t: tuple[int, int], coeff=1) -> BiSection:
        return cls(ring, (s[0] + s[1], t[0] + t[1]), {(tuple(s), tuple(t)): _coerce_coeff(ring, coeff)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _same(self, other: BiSection) -> None:
        if self.bidegree != other.bidegree and self.terms and other.terms:
            raise StructureError(f"bidegrees differ: {self.bidegree} vs {other.bidegree}")

    def __add__(self, other: BiSection) -> BiSection:
        self._same(other)
        bideg = self.bidegree if self.terms else other.bidegree
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return BiSection(self.ring, bideg, out)

    def __neg__(self) -> BiSection:
        return BiSection(self.ring, self.bidegree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: BiSection) -> BiSection:
        return self + (-other)

    def __mul__(self, other) -> BiSection:
        if isinstance(other, BiSection):
            out: dict = {}
            for (sa, ta), ca in self.terms.items():
                for (sb, tb), cb in other.terms.items():
                    c = ca * cb
                    if not c:
                        continue
                    k = ((sa[0] + sb[0], sa[1] + sb[1]), (ta[0] + tb[0], ta[1] + tb[1]))
                    out[k] = out[k] + c if k in out else c
            bideg = (self.bidegree[0] + other.bidegree[0], self.bidegree[1] + other.bidegree[1])
            return BiSection(self.ring, bideg, out)
        c = _coerce_coeff(self.ring, other)
        return BiSection(self.ring, self.bidegree, {k: x * c for k, x in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiSection):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.bidegree == other.bidegree and self.terms == other.terms

    def reduce(self, ctx: QuotientContext) -> BiSection:
        return BiSection(self.ring, self.bidegree,
                         {k: reduce_in_context(c, ctx) for k, c in self.terms.items()})

    def constant_part(self) -> BiSection:
        return BiSection(self.ring, self.bidegree, {k: c.constant_part() for k, c in self.terms.items()})

    def nilpotent_part(self) -> BiSection:
        return BiSection(self.ring, self.bidegree, {k: c.nilpotent_part() for k, c in self.terms.items()})

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0][0], kv[0][1][0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for ((s0, s1), (t0, t1)), c in self.sorted_terms():
            mono = _mono_str((("S0", s0), ("S1", s1), ("T0", t0), ("T1", t1)))
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"BiSection{self.bidegree}({self})"


def _mono_str(pairs: Iterable[tuple[str, int]]) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in pairs if e)


def segre_pullback(p: Form) -> BiSection:
    """Pull an X-only Form back along the Segre embedding."""
    out: dict = {}
    deg = None
    for m, c in p.terms.items():
        d = dict(m)
        if set(d) - set(X_VARS):
            raise StructureError(f"Segre pullback needs an X-only form; found {sorted(set(d) - set(X_VARS))}")
        key = segre_monomial(d.get("X0", 0), d.get("X1", 0), d.get("X2", 0), d.get("X3", 0))
        tdeg = sum(key[0])
        if deg is None:
            deg = tdeg
        elif deg != tdeg:
            raise StructureError("Segre pullback of an inhomogeneous form")
        out[key] = out[key] + c if key in out else c
    if deg is None:
        deg = 0
    return BiSection(p.ring, (deg, deg), out)


class SForm:
    """Homogeneous form of a fixed degree in S0, S1; ``terms`` maps the S0-exponent to its coefficient."""

    __slots__ = ("ring", "degree", "terms")

    def __init__(self, ring: ParamRing, degree: int, terms: Mapping[int, ArtinElement] | None = None):
        self.ring = ring
        self.degree = degree
        clean = {}
        for p, c in (terms or {}).items():
            if not c:
                continue
            if not 0 <= p <= degree:
                raise StructureError(f"S0-exponent {p} out of range for degree {degree}")
            clean[p] = c
        self.terms = clean

    @classmethod
    def zero(cls, ring: ParamRing, degree: int) -> SForm:
        return cls(ring, degree)

    @classmethod
    def monomial(cls, ring: ParamRing, p: int, q: int, coeff=1) -> SForm:
        return cls(ring, p + q, {p: _coerce_coeff(ring, coeff)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: SForm) -> SForm:
        if self.terms and other.terms and self.degree != other.degree:
            raise StructureError(f"S-degrees differ: {self.degree} vs {other.degree}")
        deg = self.degree if self.terms else other.degree
        out = dict(self.terms)
        for p, c in other.terms.items():
            out[p] = out[p] + c if p in out else c
        return SForm(self.ring, deg, out)

    def __neg__(self) -> SForm:
        return SForm(self.ring, self.degree, {p: -c for p, c in self.terms.items()})

    def __sub__(self, other: SForm) -> SForm:
        return self + (-other)

    def __mul__(self, other) -> SForm:
        if isinstance(other, SForm):
            out: dict[int, ArtinElement] = {}
            for pa, ca in self.terms.items():
                for pb, cb in other.terms.items():
                    c = ca * cb
                    if c:
                        out[pa + pb] = out[pa + pb] + c if pa + pb in out else c
            return SForm(self.ring, self.degree + other.degree, out)
        c = _coerce_coeff(self.ring, other)
        return SForm(self.ring, self.degree, {p: x * c for p, x in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SForm):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def map_coeffs(self, fn) -> SForm:
        return SForm(self.ring, self.degree, {p: fn(c) for p, c in self.terms.items()})

    def constant_part(self) -> SForm:
        return self.map_coeffs(lambda c: c.constant_part())

    def nilpotent_part(self) -> SForm:
        return self.map_coeffs(lambda c: c.nilpotent_part())

    def divide_by(self, which: str) -> SForm:
        """Exact division by S0 or S1."""
        if which not in ("S0", "S1"):
            raise PreconditionError(f"can only divide by S0 or S1, not {which}")
        out = {}
        for p, c in self.terms.items():
            if which == "S0":
                if p == 0:
                    raise StructureError(f"{self} is not divisible by S0")
                out[p - 1] = c
            else:
                if self.degree - p == 0:
                    raise StructureError(f"{self} is not divisible by S1")
                out[p] = c
        return SForm(self.ring, self.degree - 1, out)

    def set_S1_zero(self) -> SForm:
        """Restriction to the point S1 = 0 (keeps only the pure S0 power)."""
        c = self.terms.get(self.degree)
        return SForm(self.ring, self.degree, {self.degree: c} if c is not None else {})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for p in sorted(self.terms, reverse=True):
            mono = _mono_str((("S0", p), ("S1", self.degree - p)))
            c = self.terms[p]
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SForm[{self.degree}]({self})"


def bisection_from_slots(ring: ParamRing, slots: list[SForm], s_degree: int) -> BiSection:
    """Inverse of reading coefficients: ``sum_j slots[j] * T0^j T1^(len-1-j)``."""
    b = len(slots) - 1
    out = {}
    for j, f in enumerate(slots):
        for p, c in f.terms.items():
            out[((p, s_degree - p), (j, b - j))] = c
    return BiSection(ring, (s_degree, b), out)


def pushforward_minus_section(f: BiSection) -> list[SForm]:
    """Coordinates of ``f / T1`` on the basis ``T0^j T1^(b-1-j)``, j ascending.

    Twisting down by the section divisor {T1 = 0} removes one power of T1, so
    every monomial of ``f`` must contain T1.
    """
    a, b = f.bidegree
    if b < 1:
        raise PreconditionError(f"pushforward needs T-degree >= 1 (got bidegree {f.bidegree})")
    slots = [SForm(f.ring, a) for _ in range(b)]
    by_slot: list[dict] = [dict() for _ in range(b)]
    for ((s0, s1), (t0, t1)), c in f.terms.items():
        if t1 == 0:
            raise StructureError(
                f"monomial S0^{s0}*S1^{s1}*T0^{t0} is not divisible by T1; not in the twisted subspace"
            )
        by_slot[t0][s0] = c
    return [SForm(f.ring, a, d) for d in by_slot] if f.terms else slots


def reconstruct_from_pushforward(ring: ParamRing, slots: list[SForm], a: int) -> BiSection:
    """Multiply back by T1: inverse of ``pushforward_minus_section``."""
    b = len(slots)
    out = {}
    for j, f in enumerate(slots):
        for p, c in f.terms.items():
            out[((p, a - p), (j, b - j))] = c
    return BiSection(ring, (a, b), out)


def multiply_T1(f: BiSection) -> BiSection:
    return BiSection(f.ring, (f.bidegree[0], f.bidegree[1] + 1),
                     {(s, (t[0], t[1] + 1)): c for (s, t), c in f.terms.items()})


def slot_vector(f: BiSection) -> list[SForm]:
    """Read a bidegree (a, b) section as b + 1 S-forms, one per ``T0^j T1^(b-j)``."""
    return pushforward_minus_section(multiply_T1(f))

