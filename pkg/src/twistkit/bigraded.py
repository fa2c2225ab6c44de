"""Twisted free modules on P^1_s, maps between them, and splitting types."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .artin import ArtinElement, QuotientContext, reduce_in_context
from .errors import PreconditionError, StructureError
from .forms import SForm
from .params import ParamRing


@dataclass(frozen=True)
class TwistedFreeModule:
    """``sum O(twist)`` on an ordered list of named generators."""

    basis: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [n for n, _ in self.basis]
        if len(set(names)) != len(names):
            raise StructureError("basis symbol names must be unique")

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.basis]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def twist(self, name: str) -> int:
        for n, t in self.basis:
            if n == name:
                return t
        raise StructureError(f"{name!r} is not a generator of this module")

    def h0_dimension(self, m: int) -> int:
        return sum(max(0, t + m + 1) for _, t in self.basis)


class Section:
    """A section of ``M(m)``: one S-form per generator, of degree ``twist + m``."""

    __slots__ = ("module", "m", "comps", "ring")

    def __init__(self, module: TwistedFreeModule, m: int, ring: ParamRing,
                 comps: Mapping[str, SForm] | None = None):
        self.module = module
        self.m = m
        self.ring = ring
        clean = {}
        for name, f in (comps or {}).items():
            if not f:
                continue
            need = module.twist(name) + m
            if f.degree != need:
                raise StructureError(
                    f"component {name} has S-degree {f.degree}, expected {need}"
                )
            clean[name] = f
        self.comps = clean

    def component(self, name: str) -> SForm:
        return self.comps.get(name, SForm(self.ring, self.module.twist(name) + self.m))

    def __bool__(self) -> bool:
        return bool(self.comps)

    def _check(self, other: Section) -> None:
        if other.module != self.module or other.m != self.m:
            raise StructureError("sections live in different twisted modules")

    def __add__(self, other: Section) -> Section:
        self._check(other)
        out = dict(self.comps)
        for n, f in other.comps.items():
            out[n] = out[n] + f if n in out else f
        return Section(self.module, self.m, self.ring, out)

    def __neg__(self) -> Section:
        return Section(self.module, self.m, self.ring, {n: -f for n, f in self.comps.items()})

    def __sub__(self, other: Section) -> Section:
        return self + (-other)

    def times(self, f: SForm) -> Section:
        """Multiply by an S-form of degree k, landing in ``M(m + k)``."""
        return Section(self.module, self.m + f.degree, self.ring,
                       {n: c * f for n, c in self.comps.items()})

    def scale(self, c) -> Section:
        return Section(self.module, self.m, self.ring, {n: f * c for n, f in self.comps.items()})

    def map_coeffs(self, fn: Callable[[ArtinElement], ArtinElement]) -> Section:
        return Section(self.module, self.m, self.ring, {n: f.map_coeffs(fn) for n, f in self.comps.items()})

    def reduce(self, ctx: QuotientContext) -> Section:
        return self.map_coeffs(lambda c: reduce_in_context(c, ctx))

    def constant_part(self) -> Section:
        return self.map_coeffs(lambda c: c.constant_part())

    def nilpotent_part(self) -> Section:
        return self.map_coeffs(lambda c: c.nilpotent_part())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Section):
            return NotImplemented
        return self.module == other.module and self.m == other.m and self.comps == other.comps

    def __str__(self) -> str:
        if not self.comps:
            return "0"
        return " + ".join(f"[{self.comps[n]}]*{n}" for n in self.module.names if n in self.comps)

    def __repr__(self) -> str:
        return f"Section(m={self.m}: {self})"


def basis_section(module: TwistedFreeModule, ring: ParamRing, name: str, coeff: SForm | None = None) -> Section:
    """The generator ``name`` times ``coeff`` (default 1) as a section of ``M(deg coeff)``."""
    if coeff is None:
        coeff = SForm.monomial(ring, 0, 0)
    return Section(module, coeff.degree, ring, {name: coeff})


class ModuleMapOnB:
    """A map ``source -> target`` given by the images of the source generators.

    The entry from generator ``x`` to generator ``y`` has S-degree
    ``twist(y) - twist(x)``.
    """

    def __init__(self, source: TwistedFreeModule, target: TwistedFreeModule, ring: ParamRing,
                 images: Mapping[str, Section]):
        self.source = source
        self.target = target
        self.ring = ring
        self.images: dict[str, Section] = {}
        for name in source.names:
            img = images.get(name)
            if img is None:
                img = Section(target, -source.twist(name), ring)
            if img.module != target:
                raise StructureError(f"image of {name} is not a section of the target module")
            if img.m != -source.twist(name):
                raise StructureError(
                    f"image of {name} lives in twist {img.m}, expected {-source.twist(name)}"
                )
            self.images[name] = img
        extra = set(images) - set(source.names)
        if extra:
            raise StructureError(f"images given for unknown generators {sorted(extra)}")

    def entry(self, tgt: str, src: str) -> SForm:
        return self.images[src].component(tgt)

    def apply(self, sec: Section) -> Section:
        if sec.module != self.source:
            raise StructureError("section is not in the source module")
        out = Section(self.target, sec.m, self.ring)
        for name, f in sec.comps.items():
            out = out + self.images[name].times(f)
        return out

    def map_coeffs(self, fn) -> ModuleMapOnB:
        return ModuleMapOnB(self.source, self.target, self.ring,
                            {n: s.map_coeffs(fn) for n, s in self.images.items()})

    def constant_part(self) -> ModuleMapOnB:
        return self.map_coeffs(lambda c: c.constant_part())

    def nilpotent_part(self) -> ModuleMapOnB:
        return self.map_coeffs(lambda c: c.nilpotent_part())

    def reduce(self, ctx: QuotientContext) -> ModuleMapOnB:
        return self.map_coeffs(lambda c: reduce_in_context(c, ctx))

    def is_zero(self) -> bool:
        return not any(self.images.values())

    def degree_audit(self) -> list[str]:
        """Entries whose S-degree differs from ``twist(target) - twist(source)``."""
        bad = []
        for src, img in self.images.items():
            for tgt, f in img.comps.items():
                need = self.target.twist(tgt) - self.source.twist(src)
                if f.degree != need:
                    bad.append(f"{src}->{tgt}: degree {f.degree}, expected {need}")
        return bad

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModuleMapOnB):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.images == other.images)


def identity_map(module: TwistedFreeModule, ring: ParamRing) -> ModuleMapOnB:
    return ModuleMapOnB(module, module, ring,
                        {n: Section(module, -t, ring, {n: SForm.monomial(ring, 0, 0)}) for n, t in module.basis})


def zero_map(source: TwistedFreeModule, target: TwistedFreeModule, ring: ParamRing) -> ModuleMapOnB:
    return ModuleMapOnB(source, target, ring, {})


def compose(f: ModuleMapOnB, g: ModuleMapOnB) -> ModuleMapOnB:
    """``f o g``."""
    if g.target != f.source:
        raise StructureError("cannot compose: target of the inner map is not the source of the outer map")
    return ModuleMapOnB(g.source, f.target, f.ring, {n: f.apply(img) for n, img in g.images.items()})


# -- global sections ----------------------------------------------------------------------------


def global_basis(module: TwistedFreeModule, m: int) -> list[tuple[str, int]]:
    """Basis of H^0(M(m)): pairs (generator, S0-exponent) with S1 filling the degree."""
    out = []
    for name, t in module.basis:
        deg = t + m
        for p in range(deg, -1, -1):
            out.append((name, p))
    return out


def global_matrix(fmap: ModuleMapOnB, m: int) -> tuple[list[list[ArtinElement]], list, list]:
    """Matrix of H^0(f(m)) on the monomial bases; rows = target basis, columns = source basis."""
    cols = global_basis(fmap.source, m)
    rows = global_basis(fmap.target, m)
    row_index = {key: k for k, key in enumerate(rows)}
    zero = ArtinElement(fmap.ring)
    M = [[zero for _ in cols] for _ in rows]
    for c, (name, p) in enumerate(cols):
        deg = fmap.source.twist(name) + m
        img = fmap.images[name].times(SForm.monomial(fmap.ring, p, deg - p))
        for tgt, f in img.comps.items():
            for q, coeff in f.terms.items():
                M[row_index[(tgt, q)]][c] = coeff
    return M, rows, cols


# -- splitting types ------------------------------------------------------------------------------


@dataclass(frozen=True)
class SplittingType:
    degrees: tuple[int, ...]

    def __init__(self, degrees: Iterable[int]):
        object.__setattr__(self, "degrees", tuple(sorted(int(a) for a in degrees)))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def h0(self, m: int) -> int:
        return sum(max(0, a + m + 1) for a in self.degrees)

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for a in self.degrees:
            out[a] = out.get(a, 0) + 1
        return out

    def __str__(self) -> str:
        if not self.degrees:
            return "{}"
        parts = []
        for a, k in sorted(self.counts().items()):
            parts.append(str(a) if k == 1 else f"{a}^{k}")
        return "{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class SplittingStats:
    negativity: int
    nullity: int
    positivity: int
    generated_by_global_sections: bool
    ample: bool

    def as_tuple(self) -> tuple:
        return (self.negativity, self.nullity, self.positivity,
                self.generated_by_global_sections, self.ample)


def splitting_stats(t: SplittingType) -> SplittingStats:
    n = sum(1 for a in t.degrees if a < 0)
    z = sum(1 for a in t.degrees if a == 0)
    p = t.rank - n - z
    return SplittingStats(n, z, p, n == 0, n + z == 0 and p > 0)


def splitting_from_h0(h0: Callable[[int], int] | Mapping[int, int], rank: int,
                      window: Optional[tuple[int, int]] = None) -> SplittingType:
    """Recover ``{a_i}`` from ``m -> h0(O(a_1 + m) + ... )`` on a finite window.

    ``D(m) = h0(m) - h0(m-1)`` counts the summands with ``a_i >= -m``, so the
    multiplicity of ``-m`` is ``D(m) - D(m-1)``.  The window must start where
    h0 vanishes and end where every summand is counted.
    """
    if isinstance(h0, Mapping):
        table = dict(h0)
        if window is None:
            window = (min(table), max(table))
        get = table.__getitem__
    else:
        if window is None:
            raise PreconditionError("a window is required when h0 is a function")
        get = h0
    lo, hi = window
    if hi <= lo:
        raise PreconditionError(f"empty window {window}")
    try:
        vals = {m: int(get(m)) for m in range(lo, hi + 1)}
    except KeyError as exc:
        raise PreconditionError(f"h0 table is missing twist {exc.args[0]}") from None
    if vals[lo] != 0:
        raise PreconditionError(f"h0({lo}) = {vals[lo]}; the window must start below every summand")
    degrees: list[int] = []
    prev_D = 0
    for m in range(lo + 1, hi + 1):
        D = vals[m] - vals[m - 1]
        mult = D - prev_D
        if mult < 0:
            raise PreconditionError(f"h0 data is not realizable: second difference negative at m = {m}")
        degrees.extend([-m] * mult)
        prev_D = D
    if prev_D != rank:
        raise PreconditionError(
            f"h0 data is not realizable with rank {rank}: the window covers {prev_D} summands"
        )
    t = SplittingType(degrees)
    for m, val in vals.items():
        if t.h0(m) != val:
            raise PreconditionError(f"h0 data is not realizable: reconstruction differs at m = {m}")
    return t


def splitting_window(max_twist: int) -> tuple[int, int]:
    return (-max_twist - 2, max_twist + 2)


def rational_kernel_dimension(M: Sequence[Sequence[Fraction]], ncols: int) -> int:
    from .linalg import rank_fraction

    return ncols - (rank_fraction(M) if M else 0)
