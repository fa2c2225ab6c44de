"""Sparse polynomials over Q in the generic constants.

Every degree ``d`` has a fixed parameter alphabet: ``C_(i,j)`` for
``(i, j)`` in ``I_d`` with ``i, j <= d - 2``, then ``C_j`` for
``2 <= j <= d - 1``, then ``C_1a``, ``C_1b``, ``C_za``, ``C_zb``.  Monomials
are dense exponent tuples over that enumeration, so two polynomials of the
same ring can be combined with plain tuple arithmetic.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from operator import add
from typing import Iterable, Mapping, Union

from .errors import StructureError, UnknownParameterError
from .indices import build_index_sets

Scalar = Union[int, Fraction]
Monomial = tuple[int, ...]


class ParamRing:
    """The polynomial ring Q[C] for one value of d."""

    __slots__ = ("d", "names", "index", "zero_exp")

    def __init__(self, d: int, names: Iterable[str]):
        self.d = d
        self.names = tuple(names)
        self.index = {name: k for k, name in enumerate(self.names)}
        self.zero_exp = (0,) * len(self.names)

    def __repr__(self) -> str:
        return f"ParamRing(d={self.d}, nvars={len(self.names)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ParamRing) and other.names == self.names

    def __hash__(self) -> int:
        return hash(self.names)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def zero(self) -> ParamPoly:
        return ParamPoly(self, {})

    def one(self) -> ParamPoly:
        return ParamPoly(self, {self.zero_exp: Fraction(1)})

    def const(self, c: Scalar) -> ParamPoly:
        c = Fraction(c)
        return ParamPoly(self, {self.zero_exp: c} if c else {})

    def var(self, name: str) -> ParamPoly:
        try:
            k = self.index[name]
        except KeyError:
            raise UnknownParameterError(name) from None
        exp = [0] * self.nvars
        exp[k] = 1
        return ParamPoly(self, {tuple(exp): Fraction(1)})

    def C(self, i: int, j: int) -> ParamPoly:
        """``C_(i,j)``, read as 0 for indices outside the alphabet."""
        name = f"C_({i},{j})"
        return self.var(name) if name in self.index else self.zero()

    def Cj(self, j: int) -> ParamPoly:
        name = f"C_{j}"
        return self.var(name) if name in self.index else self.zero()

    def parse(self, text: str) -> ParamPoly:
        return parse_param_poly(self, text)


@lru_cache(maxsize=None)
def param_ring(d: int) -> ParamRing:
    idx = build_index_sets(d)
    names = [f"C_({i},{j})" for (i, j) in idx.I if i <= d - 2 and j <= d - 2]
    names += [f"C_{j}" for j in range(2, d)]
    names += ["C_1a", "C_1b", "C_za", "C_zb"]
    return ParamRing(d, names)


class ParamPoly:
    """Immutable sparse polynomial; zero coefficients are never stored."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: ParamRing, terms: Mapping[Monomial, Fraction]):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c}
        self._hash = None

    # -- construction helpers -------------------------------------------------

    def _coerce(self, other: object) -> ParamPoly:
        if isinstance(other, ParamPoly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise StructureError("parameter rings differ")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: object) -> ParamPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return _raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> ParamPoly:
        return _raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: object) -> ParamPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> ParamPoly:
        return (-self) + other

    def __mul__(self, other: object) -> ParamPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return _raw(self.ring, {})
        if len(a) < len(b):
            a, b = b, a
        out: dict[Monomial, Fraction] = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(map(add, ma, mb))
                v = get(m)
                out[m] = ca * cb if v is None else v + ca * cb
        return ParamPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> ParamPoly:
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Scalar) -> ParamPoly:
        c = Fraction(c)
        if not c:
            return _raw(self.ring, {})
        return _raw(self.ring, {m: v * c for m, v in self.terms.items()})

    # -- predicates and accessors ---------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.zero_exp in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise StructureError(f"{self} is not a constant")
        return self.terms.get(self.ring.zero_exp, Fraction(0))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in the canonical order (lex on the parameter enumeration, descending)."""
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def variables(self) -> list[str]:
        used = set()
        for m in self.terms:
            used.update(k for k, e in enumerate(m) if e)
        return [self.ring.names[k] for k in sorted(used)]

    def leading_term(self) -> tuple[Monomial, Fraction]:
        m = max(self.terms)
        return m, self.terms[m]

    # -- evaluation -------------------------------------------------------------

    def specialize(self, assignment: Mapping[str, Scalar]) -> Fraction:
        """Exact evaluation; every parameter occurring in ``self`` must be assigned."""
        values = []
        for name in self.variables():
            if name not in assignment:
                raise UnknownParameterError(name, f"no value assigned to parameter {name!r}")
        for name in self.ring.names:
            values.append(Fraction(assignment[name]) if name in assignment else None)
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for k, e in enumerate(m):
                if e:
                    v *= values[k] ** e
            total += v
        return total

    def substitute(self, assignment: Mapping[str, Scalar]) -> ParamPoly:
        """Partial evaluation; unassigned parameters stay symbolic."""
        for name in assignment:
            if name not in self.ring.index:
                raise UnknownParameterError(name)
        fixed = {self.ring.index[n]: Fraction(v) for n, v in assignment.items()}
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            v = c
            mm = list(m)
            for k, val in fixed.items():
                if mm[k]:
                    v *= val ** mm[k]
                    mm[k] = 0
            if v:
                key = tuple(mm)
                out[key] = out.get(key, 0) + v
        return ParamPoly(self.ring, out)

    # -- division -----------------------------------------------------------------

    def exact_div(self, other: ParamPoly) -> ParamPoly:
        """Quotient of an exact division; raises ArithmeticError if inexact."""
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if len(other.terms) == 1:
            (mb, cb), = other.terms.items()
            out = {}
            for ma, ca in self.terms.items():
                q = tuple(x - y for x, y in zip(ma, mb))
                if min(q, default=0) < 0:
                    raise ArithmeticError("inexact division")
                out[q] = ca / cb
            return _raw(self.ring, out)
        lb, lc = other.leading_term()
        rem = dict(self.terms)
        quot: dict[Monomial, Fraction] = {}
        while rem:
            ma = max(rem)
            ca = rem[ma]
            q = tuple(x - y for x, y in zip(ma, lb))
            if min(q) < 0:
                raise ArithmeticError("inexact division")
            cq = ca / lc
            quot[q] = cq
            for mb, cb in other.terms.items():
                m = tuple(map(add, q, mb))
                v = rem.get(m, 0) - cq * cb
                if v:
                    rem[m] = v
                else:
                    rem.pop(m, None)
        return _raw(self.ring, quot)

    def monomial_content(self) -> Monomial:
        """Exponent-wise minimum over all terms (the largest monomial divisor)."""
        if not self.terms:
            return self.ring.zero_exp
        return tuple(map(min, zip(*self.terms)))

    # -- printing ---------------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = _format_monomial(self.ring, m)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"ParamPoly({self})"


def _raw(ring: ParamRing, terms: dict) -> ParamPoly:
    p = ParamPoly.__new__(ParamPoly)
    p.ring = ring
    p.terms = terms
    p._hash = None
    return p


def _format_monomial(ring: ParamRing, m: Monomial) -> str:
    bits = []
    for k, e in enumerate(m):
        if e == 1:
            bits.append(ring.names[k])
        elif e:
            bits.append(f"{ring.names[k]}^{e}")
    return "*".join(bits)


_TOKEN = re.compile(r"\s*(C_\(\d+,\d+\)|C_\w+|\d+(?:/\d+)?|[-+*^()])")


def parse_param_poly(ring: ParamRing, text: str) -> ParamPoly:
    """Parse the output format of ``str(ParamPoly)`` (and simple products/sums)."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append("$")
    it = iter(tokens)
    look = [next(it)]

    def peek() -> str:
        return look[0]

    def take() -> str:
        tok = look[0]
        look[0] = next(it)
        return tok

    def expr() -> ParamPoly:
        sign = 1
        if peek() in "+-":
            sign = -1 if take() == "-" else 1
        acc = term().scale(sign)
        while peek() in ("+", "-"):
            op = take()
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term() -> ParamPoly:
        acc = power()
        while peek() == "*":
            take()
            acc = acc * power()
        return acc

    def power() -> ParamPoly:
        base = atom()
        if peek() == "^":
            take()
            base = base ** int(take())
        return base

    def atom() -> ParamPoly:
        tok = take()
        if tok == "(":
            v = expr()
            if take() != ")":
                raise ValueError("unbalanced parentheses")
            return v
        if tok == "-":
            return -atom()
        if tok.startswith("C_"):
            return ring.var(tok)
        return ring.const(Fraction(tok))

    result = expr()
    if peek() != "$":
        raise ValueError(f"trailing input in {text!r}")
    return result


def parse_assignment(ring: ParamRing, raw: Mapping[str, object]) -> dict[str, Fraction]:
    """Validate a JSON parameter assignment (names to ``"p/q"`` strings or numbers)."""
    out = {}
    for name, value in raw.items():
        if name not in ring.index:
            raise UnknownParameterError(name)
        out[name] = Fraction(str(value))
    return out
