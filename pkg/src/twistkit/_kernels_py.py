"""Pure-Python modular kernels (fallback for the compiled ``_kernels`` module).

All functions take plain Python ints already reduced into ``[0, p)``.
"""

from __future__ import annotations


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(m)):
            if m[r][col] % p:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        inv = pow(prow[col], p - 2, p)
        for c in range(col, ncols):
            prow[c] = prow[c] * inv % p
        for r in range(rank + 1, len(m)):
            f = m[r][col]
            if f:
                row = m[r]
                for c in range(col, ncols):
                    row[c] = (row[c] - f * prow[c]) % p
        rank += 1
        if rank == len(m):
            break
    return rank


def det_mod_p(rows: list[list[int]], p: int) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    det = 1
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col] % p:
                piv = r
                break
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        prow = m[col]
        det = det * prow[col] % p
        inv = pow(prow[col], p - 2, p)
        for r in range(col + 1, n):
            f = m[r][col] * inv % p
            if f:
                row = m[r]
                for c in range(col, n):
                    row[c] = (row[c] - f * prow[c]) % p
    return det % p


def eval_terms_mod_p(exps: list[list[int]], coeffs: list[int], point: list[int], p: int) -> int:
    """Evaluate ``sum coeffs[k] * prod(point[v] ** exps[k][v])`` modulo ``p``."""
    total = 0
    for e, c in zip(exps, coeffs):
        t = c
        for x, k in zip(point, e):
            if k:
                t = t * pow(x, k, p) % p
        total = (total + t) % p
    return total
