"""The square-zero Artin algebra K[E]/m^2 and its quotients.

Nilpotent basis symbols are plain tuples:

* ``("u", i, j, l)`` for ``(i, j)`` in ``I_d`` and ``l`` in ``0..3``
* ``("v", l)`` for ``l`` in ``0..3``
* ``("w", i, j)`` for ``(i, j)`` in ``J_d`` (reduced symbols, only inside a quotient)

Ordering: ``u`` (and ``w``) lexicographically by their indices, then ``v``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import PreconditionError, StructureError
from .indices import build_index_sets
from .params import ParamPoly, ParamRing, Scalar, param_ring

Symbol = tuple


def u(i: int, j: int, l: int) -> Symbol:
    return ("u", i, j, l)


def v(l: int) -> Symbol:
    return ("v", l)


def w(i: int, j: int) -> Symbol:
    return ("w", i, j)


def symbol_key(sym: Symbol) -> tuple:
    return (1 if sym[0] == "v" else 0,) + sym[1:]


def symbol_name(sym: Symbol) -> str:
    if sym[0] == "u":
        return f"u^{sym[3]}_({sym[1]},{sym[2]})"
    if sym[0] == "v":
        return f"v^{sym[1]}"
    return f"w_({sym[1]},{sym[2]})"


def full_symbols(d: int) -> list[Symbol]:
    """The ordered basis of E: all ``u^l_(i,j)`` then ``v^0..v^3``."""
    idx = build_index_sets(d)
    return [u(i, j, l) for (i, j) in idx.I for l in range(4)] + [v(l) for l in range(4)]


def valid_full_symbol(d: int, sym: Symbol) -> bool:
    if sym[0] == "u":
        return build_index_sets(d).in_I((sym[1], sym[2])) and 0 <= sym[3] <= 3
    if sym[0] == "v":
        return 0 <= sym[1] <= 3
    return False


class ArtinElement:
    """``constant + sum(coefficient * symbol)`` with ParamPoly coefficients."""

    __slots__ = ("ring", "ctx", "const", "nil")

    def __init__(
        self,
        ring: ParamRing,
        const: ParamPoly | None = None,
        nil: Mapping[Symbol, ParamPoly] | None = None,
        ctx: Optional[str] = None,
    ):
        self.ring = ring
        self.const = const if const is not None else ring.zero()
        self.nil = {s: c for s, c in (nil or {}).items() if c}
        self.ctx = ctx if self.nil else None

    @classmethod
    def scalar(cls, ring: ParamRing, c: Union[Scalar, ParamPoly]) -> ArtinElement:
        if not isinstance(c, ParamPoly):
            c = ring.const(c)
        return cls(ring, c)

    @classmethod
    def symbol(cls, ring: ParamRing, sym: Symbol, coeff: Union[Scalar, ParamPoly] = 1,
               ctx: Optional[str] = None) -> ArtinElement:
        if not isinstance(coeff, ParamPoly):
            coeff = ring.const(coeff)
        return cls(ring, None, {sym: coeff}, ctx)

    # -- structural checks -------------------------------------------------------

    def _check(self, other: ArtinElement) -> Optional[str]:
        if other.ring is not self.ring and other.ring != self.ring:
            raise StructureError(f"mismatched d: {self.ring.d} vs {other.ring.d}")
        if self.ctx and other.ctx and self.ctx != other.ctx:
            raise StructureError(f"mismatched quotient contexts: {self.ctx} vs {other.ctx}")
        return self.ctx or other.ctx

    def _lift(self, other: object) -> ArtinElement:
        if isinstance(other, ArtinElement):
            return other
        if isinstance(other, (int, Fraction, ParamPoly)):
            return ArtinElement.scalar(self.ring, other)
        return NotImplemented

    # -- arithmetic ------------------------------------------------------------------

    def __add__(self, other: object) -> ArtinElement:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        ctx = self._check(other)
        nil = dict(self.nil)
        for s, c in other.nil.items():
            nil[s] = nil[s] + c if s in nil else c
        return _make(self.ring, self.const + other.const, nil, ctx)

    __radd__ = __add__

    def __neg__(self) -> ArtinElement:
        return _make(self.ring, -self.const, {s: -c for s, c in self.nil.items()}, self.ctx)

    def __sub__(self, other: object) -> ArtinElement:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> ArtinElement:
        return (-self) + other

    def __mul__(self, other: object) -> ArtinElement:
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return artin_mul(self, other)

    __rmul__ = __mul__

    def scale(self, c: Union[Scalar, ParamPoly]) -> ArtinElement:
        if not isinstance(c, ParamPoly):
            c = self.ring.const(c)
        if not c:
            return ArtinElement(self.ring)
        return _make(self.ring, self.const * c, {s: x * c for s, x in self.nil.items()}, self.ctx)

    # -- predicates ----------------------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.const) or bool(self.nil)

    def is_zero(self) -> bool:
        return not self

    def is_constant(self) -> bool:
        return not self.nil

    def is_nilpotent(self) -> bool:
        return not self.const

    def coefficient(self, sym: Symbol) -> ParamPoly:
        return self.nil.get(sym, self.ring.zero())

    def constant_part(self) -> ArtinElement:
        return ArtinElement(self.ring, self.const)

    def nilpotent_part(self) -> ArtinElement:
        return ArtinElement(self.ring, None, self.nil, self.ctx)

    def symbols(self) -> list[Symbol]:
        return sorted(self.nil, key=symbol_key)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, ParamPoly)):
            other = ArtinElement.scalar(self.ring, other)
        if not isinstance(other, ArtinElement):
            return NotImplemented
        return self.const == other.const and self.nil == other.nil

    def __hash__(self) -> int:
        return hash((self.const, frozenset(self.nil.items())))

    def __str__(self) -> str:
        parts = []
        if self.const:
            parts.append(str(self.const))
        for s in self.symbols():
            c = self.nil[s]
            name = symbol_name(s)
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            elif len(c) == 1:
                parts.append(f"{c}*{name}")
            else:
                parts.append(f"({c})*{name}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"ArtinElement({self})"


def _make(ring, const, nil, ctx) -> ArtinElement:
    e = ArtinElement.__new__(ArtinElement)
    e.ring = ring
    e.const = const
    e.nil = {s: c for s, c in nil.items() if c}
    e.ctx = ctx if e.nil else None
    return e


def artin_mul(a: ArtinElement, b: ArtinElement) -> ArtinElement:
    """Product in the square-zero extension: nilpotent times nilpotent is dropped."""
    ctx = a._check(b)
    ring = a.ring
    nil: dict[Symbol, ParamPoly] = {}
    if b.const:
        for s, c in a.nil.items():
            nil[s] = c * b.const
    if a.const:
        for s, c in b.nil.items():
            t = a.const * c
            nil[s] = nil[s] + t if s in nil else t
    return _make(ring, a.const * b.const, nil, ctx)


# -- quotient contexts ----------------------------------------------------------------------

LinearForm = dict  # Symbol -> Fraction


class QuotientContext:
    """A quotient of m by a span of linear relations, realised as a substitution.

    ``table`` maps every eliminated full symbol to a linear combination of
    reduced symbols (possibly empty, meaning zero).  Full symbols that survive
    are either kept as they are or renamed through ``rename``.
    """

    def __init__(
        self,
        d: int,
        label: str,
        table: Mapping[Symbol, LinearForm],
        rename: Mapping[Symbol, Symbol] | None = None,
        relations: Sequence[LinearForm] = (),
    ):
        self.d = d
        self.label = label
        self.ring = param_ring(d)
        self.rename = dict(rename or {})
        self.table = {s: {t: Fraction(c) for t, c in f.items() if c} for s, f in table.items()}
        self.relations = [dict(r) for r in relations]
        self._reduced = set(self.rename.values())
        self._cache: dict[Symbol, dict[Symbol, Fraction]] = {}

    def __repr__(self) -> str:
        return f"QuotientContext(d={self.d}, {self.label})"

    def image(self, sym: Symbol) -> dict[Symbol, Fraction]:
        """The reduced linear combination a single symbol maps to."""
        hit = self._cache.get(sym)
        if hit is not None:
            return hit
        if sym in self.table:
            out = {}
            for t, c in self.table[sym].items():
                t = self.rename.get(t, t)
                out[t] = out.get(t, 0) + c
            out = {t: c for t, c in out.items() if c}
        elif sym in self.rename:
            out = {self.rename[sym]: Fraction(1)}
        elif sym in self._reduced or valid_full_symbol(self.d, sym):
            out = {sym: Fraction(1)}
        else:
            raise StructureError(f"symbol {symbol_name(sym)} is not valid for d = {self.d}")
        self._cache[sym] = out
        return out

    def reduced_basis(self) -> list[Symbol]:
        basis = set()
        for s in full_symbols(self.d):
            basis.update(self.image(s))
        return sorted(basis, key=symbol_key)

    def reduce_linear(self, form: Mapping[Symbol, Scalar]) -> dict[Symbol, Fraction]:
        out: dict[Symbol, Fraction] = {}
        for s, c in form.items():
            for t, k in self.image(s).items():
                out[t] = out.get(t, 0) + Fraction(c) * k
        return {t: c for t, c in out.items() if c}


def reduce_in_context(a: ArtinElement, ctx: QuotientContext) -> ArtinElement:
    if a.ring.d != ctx.d:
        raise StructureError(f"element has d = {a.ring.d}, context has d = {ctx.d}")
    nil: dict[Symbol, ParamPoly] = {}
    for s, c in a.nil.items():
        for t, k in ctx.image(s).items():
            term = c.scale(k)
            nil[t] = nil[t] + term if t in nil else term
    return _make(a.ring, a.const, nil, ctx.label)


def eliminate(
    d: int,
    label: str,
    relations: Sequence[LinearForm],
    priority: Iterable[Symbol],
    rename: Mapping[Symbol, Symbol] | None = None,
) -> QuotientContext:
    """Build a context by Gaussian elimination over Q.

    ``priority`` lists symbols in the order they should preferentially be
    eliminated; symbols not listed are eliminated last.
    """
    rank = {s: k for k, s in enumerate(priority)}
    big = len(rank)

    def pick(row: dict) -> Symbol:
        return min(row, key=lambda s: (rank.get(s, big), symbol_key(s)))

    pivots: dict[Symbol, dict[Symbol, Fraction]] = {}
    for rel in relations:
        row = {s: Fraction(c) for s, c in rel.items() if c}
        for p, prow in pivots.items():
            if p in row:
                f = row.pop(p)
                for t, c in prow.items():
                    row[t] = row.get(t, 0) - f * c
                row = {t: c for t, c in row.items() if c}
        if not row:
            continue
        p = pick(row)
        lead = row.pop(p)
        # p = -(rest)/lead
        prow = {t: -c / lead for t, c in row.items()}
        for q, qrow in pivots.items():
            if p in qrow:
                f = qrow.pop(p)
                for t, c in prow.items():
                    qrow[t] = qrow.get(t, 0) + f * c
                pivots[q] = {t: c for t, c in qrow.items() if c}
        pivots[p] = prow
    return QuotientContext(d, label, pivots, rename, relations)


# -- the standard contexts --------------------------------------------------------------------


def _u_or_zero(d: int, i: int, j: int, l: int) -> dict:
    return {u(i, j, l): 1} if build_index_sets(d).in_I((i, j)) else {}


def d_relation(d: int, i: int, j: int) -> LinearForm:
    """``u^0_(i-1,j-1) + u^1_(i-1,j) + u^2_(i,j-1) + u^3_(i,j)`` with out-of-range terms dropped."""
    rel: dict[Symbol, int] = {}
    for part in (
        _u_or_zero(d, i - 1, j - 1, 0),
        _u_or_zero(d, i - 1, j, 1),
        _u_or_zero(d, i, j - 1, 2),
        _u_or_zero(d, i, j, 3),
    ):
        rel.update(part)
    return rel


def d_relations(d: int) -> list[tuple[tuple[int, int], LinearForm]]:
    """All nonzero generators of I(D), keyed by the (i, j) they come from."""
    out = []
    for i in range(d + 1):
        for j in range(d + 1):
            rel = d_relation(d, i, j)
            if rel:
                out.append(((i, j), rel))
    return out


def ds_generators(d: int, s: tuple[Scalar, Scalar]) -> list[LinearForm]:
    s0, s1 = Fraction(s[0]), Fraction(s[1])
    gens = []
    for (i, j) in build_index_sets(d).I:
        gens.append({u(i, j, 0): s0, u(i, j, 2): s1})
        gens.append({u(i, j, 1): s0, u(i, j, 3): s1})
    gens.append({v(0): s0, v(2): s1})
    gens.append({v(1): s0, v(3): s1})
    return [{k: c for k, c in g.items() if c} for g in gens]


def _d_priority(d: int) -> list[Symbol]:
    idx = build_index_sets(d)
    return [u(i, j, l) for l in (3, 2, 1, 0) for (i, j) in idx.I]


@lru_cache(maxsize=None)
def context_d_prime(d: int) -> QuotientContext:
    build_index_sets(d)
    return QuotientContext(d, "D-prime", {})


@lru_cache(maxsize=None)
def context_d(d: int, drop: Optional[tuple[int, int]] = None) -> QuotientContext:
    """Context D; ``drop`` removes one relation generator (used by mutation tests)."""
    rels = [rel for key, rel in d_relations(d) if key != drop]
    label = "D" if drop is None else f"D-minus{drop}"
    return eliminate(d, label, rels, _d_priority(d))


def _point_label(s: tuple[Scalar, Scalar]) -> str:
    return f"D_s([{Fraction(s[0])}:{Fraction(s[1])}])"


@lru_cache(maxsize=None)
def context_ds(d: int, s: tuple[Scalar, Scalar]) -> QuotientContext:
    """Context D_s by elimination; at ``s = [1:0]`` surviving ``u^3`` become ``w``."""
    s0, s1 = Fraction(s[0]), Fraction(s[1])
    if s0 == 0 and s1 == 0:
        raise PreconditionError("s = [0:0] is not a point of P^1")
    idx = build_index_sets(d)
    rels = [rel for _, rel in d_relations(d)] + ds_generators(d, (s0, s1))
    priority = (
        [u(i, j, l) for l in (0, 1) for (i, j) in idx.I]
        + [v(0), v(1)]
        + [u(i, j, 2) for (i, j) in idx.I]
        + [u(i, j, 3) for (i, j) in idx.I]
    )
    rename = None
    if s1 == 0:
        rename = {u(i, j, 3): w(i, j) for (i, j) in idx.J}
    return eliminate(d, _point_label((s0, s1)), rels, priority, rename)
