"""Exact linear algebra over the parameter ring and its specializations.

``ff_rank_det`` first peels rows and columns that carry a single nonzero
entry (an exact Laplace step), then runs fraction-free Bareiss elimination
with complete pivoting on whatever core is left.  The matrices produced by the
deformation pipeline are mostly monomial, so the core stays small.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import kernels
from .errors import PreconditionError, StructureError
from .params import ParamPoly, ParamRing

Matrix = list  # list[list[ParamPoly]]


@dataclass
class RankDet:
    rank: int
    det: Optional[ParamPoly]
    pivots: list[ParamPoly]
    # entries removed by the peeling phase, in order; the product of these and
    # ``core_det`` is the determinant up to sign
    peeled: list[ParamPoly] = field(default_factory=list)
    core_det: Optional[ParamPoly] = None
    core_size: int = 0
    # sign of the peeling expansion, so det = sign * prod(peeled) * core_det
    sign: int = 1

    def __iter__(self):
        return iter((self.rank, self.det, self.pivots))


def _shape(M: Sequence[Sequence[ParamPoly]]) -> tuple[int, int, Optional[ParamRing]]:
    n = len(M)
    m = len(M[0]) if n else 0
    ring = None
    for row in M:
        if len(row) != m:
            raise StructureError("ragged matrix")
        for x in row:
            if not isinstance(x, ParamPoly):
                raise StructureError(f"matrix entry {x!r} is not a ParamPoly")
            if ring is None:
                ring = x.ring
            elif x.ring != ring:
                raise StructureError("matrix entries come from different parameter rings")
    return n, m, ring


def ff_rank_det(M: Sequence[Sequence[ParamPoly]], expand: bool = True) -> RankDet:
    """Rank over the fraction field, exact determinant when square, and leading minors.

    With ``expand=False`` the products of peeled entries are not multiplied
    out: ``det`` and ``pivots`` are left empty and the determinant is only
    available as ``sign * prod(peeled) * core_det``.
    """
    n, m, ring = _shape(M)
    if ring is None:
        raise PreconditionError("ff_rank_det needs at least one entry to fix the parameter ring")
    square = n == m
    rows = list(range(n))
    cols = list(range(m))
    A = {(r, c): M[r][c] for r in range(n) for c in range(m) if M[r][c]}
    sign = 1
    peeled: list[ParamPoly] = []

    def drop(r: int, c: int) -> None:
        nonlocal sign
        sign *= -1 if (rows.index(r) + cols.index(c)) % 2 else 1
        rows.remove(r)
        cols.remove(c)
        for key in [k for k in A if k[0] == r or k[1] == c]:
            del A[key]

    while True:
        row_count: dict[int, list] = {}
        col_count: dict[int, list] = {}
        for (r, c) in A:
            row_count.setdefault(r, []).append(c)
            col_count.setdefault(c, []).append(r)
        hit = None
        for r in rows:
            if len(row_count.get(r, ())) == 1:
                hit = (r, row_count[r][0])
                break
        if hit is None:
            for c in cols:
                if len(col_count.get(c, ())) == 1:
                    hit = (col_count[c][0], c)
                    break
        if hit is None:
            break
        peeled.append(A[hit])
        drop(*hit)

    # zero rows/columns contribute nothing to the rank
    live_rows = sorted({r for (r, _) in A}, key=rows.index)
    live_cols = sorted({c for (_, c) in A}, key=cols.index)
    core = [[A.get((r, c), ring.zero()) for c in live_cols] for r in live_rows]
    core_rank, core_det, core_pivots, _ = _bareiss(core, ring)
    cores_square = len(live_rows) == len(live_cols) == len(rows) == len(cols)

    rank = len(peeled) + core_rank
    if not expand:
        return RankDet(rank, None, [], peeled, core_det if core else ring.one(), len(core), sign)
    prefix = ring.one()
    pivots = []
    for x in peeled:
        prefix = prefix * x
        pivots.append(prefix)
    pivots.extend(prefix * p for p in core_pivots)

    det = None
    if square:
        if rank < n:
            det = ring.zero()
        else:
            assert cores_square
            # core_det already carries the sign of the core's own pivoting
            det = prefix * core_det if core_det is not None else prefix
            if sign < 0:
                det = -det
    return RankDet(rank, det, pivots, peeled, core_det if core else ring.one(), len(core), sign)


def _bareiss(A: list[list[ParamPoly]], ring: ParamRing):
    """Fraction-free elimination with complete pivoting.

    Returns (rank, det of the square core or None, leading minors, permutation sign).
    """
    n = len(A)
    m = len(A[0]) if n else 0
    if n == 0 or m == 0:
        return 0, ring.one(), [], 1
    a = [list(row) for row in A]
    prev = ring.one()
    sign = 1
    pivots = []
    k = 0
    while k < min(n, m):
        best = None
        for i in range(k, n):
            for j in range(k, m):
                x = a[i][j]
                if x:
                    key = (len(x), x.total_degree(), i, j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, pi, pj = best
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
            sign = -sign
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, m):
                num = piv * a[i][j]
                if aik and a[k][j]:
                    num = num - aik * a[k][j]
                a[i][j] = num if prev == 1 else num.exact_div(prev)
            a[i][k] = ring.zero()
        pivots.append(piv)
        prev = piv
        k += 1
    det = None
    if n == m:
        det = pivots[-1] if k == n else ring.zero()
        if sign < 0:
            det = -det
    return k, det, pivots, sign


# -- numeric (specialized) linear algebra ----------------------------------------------------------


def rank_fraction(M: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank of a rational matrix."""
    a = [[Fraction(x) for x in row] for row in M]
    if not a:
        return 0
    n, m = len(a), len(a[0])
    rank = 0
    for col in range(m):
        piv = next((r for r in range(rank, n) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, n):
            f = a[r][col] / p
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == n:
            break
    return rank


def det_fraction(M: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in M]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def specialize_matrix(M: Sequence[Sequence[ParamPoly]], assignment) -> list[list[Fraction]]:
    return [[x.specialize(assignment) for x in row] for row in M]


def poly_mod_p(x: ParamPoly, point: Sequence[int], p: int) -> int:
    if not x:
        return 0
    exps = []
    coeffs = []
    for mono, c in x.terms.items():
        exps.append(list(mono))
        coeffs.append(c.numerator % p * pow(c.denominator % p, p - 2, p) % p)
    return kernels.eval_terms_mod_p(exps, coeffs, list(point), p)


def random_point(ring: ParamRing, seed: int, p: int = kernels.DEFAULT_PRIME) -> list[int]:
    rng = random.Random(seed)
    return [rng.randrange(1, p) for _ in range(ring.nvars)]


def matrix_mod_p(M: Sequence[Sequence[ParamPoly]], point: Sequence[int], p: int) -> list[list[int]]:
    return [[poly_mod_p(x, point, p) for x in row] for row in M]


def modular_ranks(
    M: Sequence[Sequence[ParamPoly]], seeds: Sequence[int], p: int = kernels.DEFAULT_PRIME
) -> list[int]:
    """Rank of ``M`` at one random point modulo ``p`` per seed."""
    _, _, ring = _shape(M)
    if ring is None:
        return [0 for _ in seeds]
    return [kernels.rank_mod_p(matrix_mod_p(M, random_point(ring, s, p), p), p) for s in seeds]


def modular_det_agrees(
    M: Sequence[Sequence[ParamPoly]], det: ParamPoly, seeds: Sequence[int],
    p: int = kernels.DEFAULT_PRIME,
) -> bool:
    """Compare a claimed determinant against modular elimination at random points."""
    ring = det.ring
    for s in seeds:
        pt = random_point(ring, s, p)
        if kernels.det_mod_p(matrix_mod_p(M, pt, p), p) != poly_mod_p(det, pt, p):
            return False
    return True
