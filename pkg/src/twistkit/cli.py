"""Command-line front end: ``twistkit {verify,tables,divisor,certify}``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
precondition errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import divisor
from .errors import TwistkitError
from .report import (
    LENIENT,
    STRICT,
    TABLE_FIGURES,
    RunConfig,
    certificate_to_dict,
    cmd_certify,
    cmd_tables,
    cmd_verify,
    figure_to_dict,
    render_certificate_text,
    render_table_text,
    render_verify_text,
    to_json,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _default_seed() -> int:
    raw = os.environ.get("TWISTKIT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise TwistkitError(f"TWISTKIT_SEED must be an integer (got {raw!r})") from None


def _load_params(path: Optional[str]) -> Optional[dict]:
    if path is None:
        return None
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise TwistkitError(f"{path}: expected a JSON object mapping parameter names to values")
    return raw


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twistkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, fmt=True):
        if fmt:
            sp.add_argument("--format", choices=("json", "text"), default="text")
        return sp

    v = common(sub.add_parser("verify", help="run every check for one degree"))
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--param-file", help="JSON object of parameter values for the certificate")
    v.add_argument("--seed", type=int, default=None, help="defaults to $TWISTKIT_SEED, then 0")
    v.add_argument("--strict", action="store_true", help="treat documented print errata as failures")
    v.add_argument("--timings", action="store_true", help="include wall-clock timings (not reproducible)")

    t = common(sub.add_parser("tables", help="emit a recomputed table with per-row comparison"))
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--figure", type=int, required=True)
    t.add_argument("--strict", action="store_true")

    c = common(sub.add_parser("certify", help="genericity certificate for the derivative matrix"))
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--param-file")
    c.add_argument("--seed", type=int, default=None)

    dv = sub.add_parser("divisor", help="divisor-class arithmetic")
    dsub = dv.add_subparsers(dest="what", required=True)
    nec = common(dsub.add_parser("necessity", help="can T_ev have positive degree"))
    nec.add_argument("--n", type=int, required=True)
    nec.add_argument("--d", type=int, required=True)
    nec.add_argument("--deg-x", type=int)
    nec.add_argument("--deg-h", type=int)
    con = common(dsub.add_parser("conic", help="dimension counts for conics"))
    con.add_argument("--n", type=int, required=True)
    con.add_argument("--d", type=int, required=True)
    sch = common(dsub.add_parser("schedule", help="psi-degree schedule (m, r')"))
    sch.add_argument("--a0", type=int, required=True)
    sch.add_argument("--b1", type=int, required=True)
    sch.add_argument("--a", type=int, required=True)
    ch = common(dsub.add_parser("chern", help="first Chern class of T_ev"))
    ch.add_argument("--n", type=int, required=True)
    ch.add_argument("--d", type=int, required=True)
    return p


def _emit(fmt: str, data: dict, text: str) -> None:
    sys.stdout.write(to_json(data) if fmt == "json" else text)


def _run_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    config = RunConfig(
        d=args.d,
        assignment=_load_params(args.param_file),
        seed=seed,
        mode=STRICT if args.strict else LENIENT,
        output=args.format,
        timings=args.timings,
    )
    report = cmd_verify(config)
    _emit(args.format, report.to_dict(), render_verify_text(report))
    return report.exit_code


def _run_tables(args) -> int:
    if args.figure not in TABLE_FIGURES:
        raise argparse.ArgumentTypeError(
            f"--figure must be one of {', '.join(map(str, TABLE_FIGURES))} (got {args.figure})"
        )
    comp = cmd_tables(args.d, args.figure)
    _emit(args.format, figure_to_dict(comp), render_table_text(comp))
    if comp.status == "fail" or (args.strict and comp.status != "pass"):
        return EXIT_FAIL
    return EXIT_OK


def _run_certify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    cert = cmd_certify(args.d, _load_params(args.param_file), seed)
    _emit(args.format, certificate_to_dict(cert), render_certificate_text(cert))
    return EXIT_OK if cert.issued else EXIT_FAIL


def _run_divisor(args) -> int:
    if args.what == "necessity":
        r = divisor.necessity_check(args.n, args.d, args.deg_x, args.deg_h)
        data = {"n": args.n, "d": args.d, "feasible": r.feasible, "reason": r.reason, "degree": r.degree}
        _emit(args.format, data, f"{r}\n")
    elif args.what == "conic":
        ci = divisor.conic_invariants(args.n, args.d)
        data = {
            "n": ci.n,
            "d": ci.d,
            "total_dim": ci.total_dim,
            "sing_dim_bound": ci.sing_dim_bound,
            "fiber_dim": ci.fiber_dim,
            "omega_twist": ci.omega_twist,
            "fano": ci.fano,
        }
        text = "".join(f"{k} {str(v).lower() if isinstance(v, bool) else v}\n" for k, v in data.items())
        _emit(args.format, data, text)
    elif args.what == "schedule":
        s = divisor.psi_schedule(args.a0, args.b1, args.a)
        data = {"a0": s.a0, "b1": s.b1, "a": s.a, "a1": s.a1, "m": s.m, "r_prime": s.r_prime}
        _emit(args.format, data, f"m={s.m} r'={s.r_prime} (a1={s.a1})\n")
    else:
        cls = divisor.chern_tev_X(args.n, args.d)
        pn = divisor.chern_tev_pn(args.n)
        cpsi, chp = cls.psi_view
        data = {
            "n": args.n,
            "d": args.d,
            "x_form": {"x": cls.cx, "h": cls.ch},
            "psi_form": {"h": chp, "psi": cpsi},
            "ambient": {"x": pn.cx, "h": pn.ch},
        }
        text = f"c1(T_ev|X) = {cls} = {cls.psi_str()}\nc1(T_ev|P^n) = {pn} = {pn.psi_str()}\n"
        _emit(args.format, data, text)
    return EXIT_OK


RUNNERS = {"verify": _run_verify, "tables": _run_tables, "certify": _run_certify, "divisor": _run_divisor}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return RUNNERS[args.verb](args)
    except (TwistkitError, ValueError, KeyError, OSError, argparse.ArgumentTypeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"twistkit: error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
