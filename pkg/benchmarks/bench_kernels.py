"""Compare the compiled modular kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--n 40] [--repeat 5]
"""

from __future__ import annotations

import argparse
import random
import timeit

from twistkit import _kernels_py, kernels
from twistkit.derivative import dq_matrix
from twistkit.linalg import matrix_mod_p, random_point
from twistkit.params import param_ring


def _random_matrix(n: int, p: int, seed: int) -> list[list[int]]:
    rng = random.Random(seed)
    return [[rng.randrange(p) for _ in range(n)] for _ in range(n)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=40, help="size of the random dense matrix")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--d", type=int, default=6, help="degree for the derivative-matrix workload")
    args = ap.parse_args()

    p = kernels.DEFAULT_PRIME
    try:
        from twistkit import _kernels as compiled
    except ImportError:
        compiled = None
    backends = [("python", _kernels_py)] + ([("compiled", compiled)] if compiled else [])

    M = _random_matrix(args.n, p, 0)
    D = dq_matrix(args.d)
    pt = random_point(param_ring(args.d), 0, p)
    Dp = matrix_mod_p(D.entries, pt, p)
    polys = [x for row in D.entries for x in row if x]
    exps = [list(m) for x in polys for m in x.terms]
    coeffs = [int(c) % p for x in polys for c in x.terms.values()]

    results = {}
    print(f"{'kernel':<28}{'backend':<10}{'best (ms)':>12}")
    for name, mod in backends:
        cases = {
            f"rank_mod_p {args.n}x{args.n}": lambda: mod.rank_mod_p(M, p),
            f"det_mod_p {args.n}x{args.n}": lambda: mod.det_mod_p(M, p),
            f"det_mod_p dq (d={args.d})": lambda: mod.det_mod_p(Dp, p),
            f"eval_terms {len(exps)} terms": lambda: mod.eval_terms_mod_p(exps, coeffs, pt, p),
        }
        for label, fn in cases.items():
            best = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            results.setdefault(label, {})[name] = (best, fn())
            print(f"{label:<28}{name:<10}{best * 1e3:>12.3f}")

    if compiled:
        print()
        for label, by in results.items():
            (tp, vp), (tc, vc) = by["python"], by["compiled"]
            if vp != vc:
                raise SystemExit(f"{label}: backends disagree ({vp} vs {vc})")
            print(f"{label:<28}speedup {tp / tc:6.1f}x")


if __name__ == "__main__":
    main()
