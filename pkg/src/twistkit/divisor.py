"""Divisor-class arithmetic on the space of pointed lines, the n >= d^2 necessity test,
the psi-degree scheduler, and dimension counts for conics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import PreconditionError


@dataclass(frozen=True)
class DivClass:
    """``cx * x + ch * h``; the psi-view rewrites it as ``cpsi * psi + ch' * h`` with psi = x - 2h."""

    cx: int
    ch: int

    @property
    def psi_view(self) -> tuple[int, int]:
        """``(cpsi, ch')`` with ``cx x + ch h = cpsi psi + ch' h``."""
        return self.cx, self.ch + 2 * self.cx

    @classmethod
    def from_psi_view(cls, cpsi: int, ch_prime: int) -> DivClass:
        return cls(cpsi, ch_prime - 2 * cpsi)

    def __add__(self, other: DivClass) -> DivClass:
        return DivClass(self.cx + other.cx, self.ch + other.ch)

    def __sub__(self, other: DivClass) -> DivClass:
        return DivClass(self.cx - other.cx, self.ch - other.ch)

    def degree(self, deg_x: int, deg_h: int) -> int:
        return self.cx * deg_x + self.ch * deg_h

    def __str__(self) -> str:
        return _lin(((self.cx, "x"), (self.ch, "h")))

    def psi_str(self) -> str:
        cpsi, chp = self.psi_view
        return _lin(((chp, "h"), (cpsi, "psi")))


def _lin(pairs) -> str:
    out = ""
    for c, name in pairs:
        if c == 0:
            continue
        term = name if abs(c) == 1 else f"{abs(c)}{name}"
        if not out:
            out = f"-{term}" if c < 0 else term
        else:
            out += f" - {term}" if c < 0 else f" + {term}"
    return out or "0"


def chern_tev_pn(n: int) -> DivClass:
    """First Chern class of T_ev on pointed lines in P^n: ``n x - (n-1) h``.

    In the psi-view this is ``(n+1) h + n psi``.
    """
    if n < 2:
        raise PreconditionError(f"n >= 2 required (got n = {n})")
    c = DivClass(n, -(n - 1))
    if c.psi_view != (n, n + 1):
        raise AssertionError("basis change disagrees with the closed form")
    return c


def pushforward_class(d: int) -> DivClass:
    """``d(d+1)/2 x - d h``."""
    return DivClass(d * (d + 1) // 2, -d)


def chern_tev_X(n: int, d: int) -> DivClass:
    """``(n - d(d+1)/2) x - (n-d-1) h``, equal to ``(n+1-d^2) h + (n - d(d+1)/2) psi``."""
    if n < 2 or d < 1:
        raise PreconditionError(f"n >= 2 and d >= 1 required (got n = {n}, d = {d})")
    c = chern_tev_pn(n) - pushforward_class(d)
    tri = d * (d + 1) // 2
    if (c.cx, c.ch) != (n - tri, -(n - d - 1)):
        raise AssertionError("x-form disagrees with the closed form")
    if c.psi_view != (n - tri, n + 1 - d * d):
        raise AssertionError("psi-form disagrees with the closed form")
    return c


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    reason: str
    degree: Optional[int] = None

    def __str__(self) -> str:
        return ("feasible" if self.feasible else "infeasible") + (f": {self.reason}" if self.reason else "")


def necessity_check(n: int, d: int, deg_x: Optional[int] = None, deg_h: Optional[int] = None) -> Feasibility:
    """Can the pulled-back T_ev have positive degree on a family of pointed lines?

    With explicit degrees (``deg_x >= 0``, ``deg_h >= 0``, ``deg_psi = deg_x - 2 deg_h <= 0``)
    the degree is evaluated directly.  Without them the answer is feasible
    exactly when n >= d^2.
    """
    if d < 1 or n < 1:
        raise PreconditionError(f"n, d >= 1 required (got n = {n}, d = {d})")
    tri = d * (d + 1) // 2
    if deg_x is None and deg_h is None:
        # n < 2d forces n < d^2, so the search over degrees has nothing to find
        if n + 1 - d * d > 0:
            return Feasibility(True, f"n+1-d^2 = {n + 1 - d * d} > 0")
        if 2 * d > n:
            return Feasibility(False, f"n+1-d^2 = {n + 1 - d * d} (and d > n/2)")
        return Feasibility(False, f"n+1-d^2 = {n + 1 - d * d}")
    if 2 * d > n:
        raise PreconditionError(f"hypothesis d <= n/2 violated (n = {n}, d = {d})")
    if deg_x is None or deg_h is None:
        raise PreconditionError("give both deg_x and deg_h, or neither")
    if deg_x < 0 or deg_h < 0:
        raise PreconditionError("degrees of x and h must be nonnegative")
    deg_psi = deg_x - 2 * deg_h
    if deg_psi > 0:
        raise PreconditionError(f"deg psi = {deg_psi} > 0 is not admissible")
    cls = chern_tev_X(n, d)
    degree = cls.degree(deg_x, deg_h)
    if deg_x == 0 or n + 1 <= tri:
        # the family is constant after projecting to the hypersurface
        const_deg = -(n - d - 1) * deg_h
        return Feasibility(False, f"deg = -(n-d-1)*deg_h = {const_deg} <= 0", const_deg)
    if degree > 0:
        return Feasibility(True, "", degree)
    if n + 1 - d * d <= 0:
        return Feasibility(False, f"n+1-d^2 = {n + 1 - d * d}", degree)
    return Feasibility(False, f"deg = {degree} <= 0", degree)


@dataclass(frozen=True)
class TwistSchedule:
    a0: int
    b1: int
    a: int
    a1: int
    m: int
    r_prime: int

    def check(self) -> bool:
        return (
            self.a == self.m * self.a0 + 2 * self.r_prime
            and 0 <= self.r_prime < self.a0
            and self.m * self.b1 - self.r_prime > 0
        )


def schedule_threshold(a0: int, b1: int) -> int:
    """``a1 = 2 a0 ceil((a0 + b1) / (2 b1))``."""
    return 2 * a0 * (-(-(a0 + b1) // (2 * b1)))


def psi_schedule(a0: int, b1: int, a: int) -> TwistSchedule:
    if a0 <= 0 or b1 < 1:
        raise PreconditionError(f"a0 > 0 and b1 >= 1 required (got a0 = {a0}, b1 = {b1})")
    a1 = schedule_threshold(a0, b1)
    if a < a1:
        raise PreconditionError(f"a = {a} is below a1 = {a1}")
    if a0 % 2 == 0 and a % 2 == 1:
        raise PreconditionError(f"a0 = {a0} is even, so only even a are covered (got a = {a})")
    if a % 2 == 0:
        q, rem = divmod(a, 2 * a0)
        m = 2 * q
    else:
        q, rem = divmod(a + a0, 2 * a0)
        m = 2 * q - 1
    r_prime = rem // 2
    sched = TwistSchedule(a0, b1, a, a1, m, r_prime)
    if not sched.check():
        raise AssertionError(f"schedule invariants fail for {sched}")
    return sched


def brute_force_schedules(a0: int, b1: int, a: int) -> list[tuple[int, int]]:
    """Every (m, r') with ``a = m a0 + 2 r'``, ``0 <= r' < a0``, ``m b1 - r' > 0``."""
    out = []
    for r in range(a0):
        if (a - 2 * r) % a0 == 0:
            m = (a - 2 * r) // a0
            if m * b1 - r > 0:
                out.append((m, r))
    return out


@dataclass(frozen=True)
class ConicInvariants:
    n: int
    d: int
    total_dim: int
    sing_dim_bound: int
    fiber_dim: int
    omega_twist: int
    fano: bool

    def as_tuple(self) -> tuple:
        return (self.total_dim, self.sing_dim_bound, self.fiber_dim, self.omega_twist, self.fano)


def conic_invariants(n: int, d: int) -> ConicInvariants:
    if d < 1 or d > n - 2:
        raise PreconditionError(f"d <= n - 2 required (got n = {n}, d = {d})")
    return ConicInvariants(
        n=n,
        d=d,
        total_dim=3 * n - 2 * d - 1,
        sing_dim_bound=2 * n - d - 1,
        fiber_dim=n + 1 - 2 * d,
        omega_twist=-n - 1 + d * d,
        fano=n >= d * d,
    )
