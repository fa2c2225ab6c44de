"""Verification runs and their machine-readable reports.

Reports are plain dicts with a fixed key order so that JSON output is
byte-identical for identical inputs and seed.  Wall-clock timings are only
included on request because they would break that property.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Callable, Optional

from . import __version__
from .derivative import GenericityCertificate, certify_surjective, check_pipeline_identity, dq_matrix
from .family import CheckReport, check_Ds_maximal, check_G_vanishes
from .figures import ERRATUM, FACTOR2, FigureComparison, compare_figure
from .indices import build_index_sets
from .normal_bundle import check_dG_surjective, check_kernel, check_kernel_splitting
from .params import ParamPoly, param_ring, parse_assignment

STRICT = "strict"
LENIENT = "up-to-documented-constants"
TABLE_FIGURES = (1, 3, 4, 5, 6)


@dataclass
class RunConfig:
    d: int
    assignment: Optional[dict[str, Fraction]] = None
    seed: int = 0
    mode: str = LENIENT
    output: str = "json"
    timings: bool = False

    def __post_init__(self):
        build_index_sets(self.d)
        if self.mode not in (STRICT, LENIENT):
            raise ValueError(f"unknown comparison mode {self.mode!r}")
        if self.output not in ("json", "text"):
            raise ValueError(f"unknown output format {self.output!r}")
        if self.assignment is not None:
            self.assignment = parse_assignment(param_ring(self.d), self.assignment)


@dataclass
class VerificationReport:
    config: RunConfig
    checks: list[CheckReport] = field(default_factory=list)
    figures: dict[int, FigureComparison] = field(default_factory=dict)
    certificate: Optional[GenericityCertificate] = None
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_dict(self) -> dict:
        cfg = self.config
        out: dict[str, Any] = {
            "tool": "twistkit",
            "version": __version__,
            "command": "verify",
            "d": cfg.d,
            "config": {
                "seed": cfg.seed,
                "mode": cfg.mode,
                "assignment": _jsonable(cfg.assignment) if cfg.assignment is not None else None,
            },
            "status": "pass" if self.passed else "fail",
            "checks": [check_to_dict(c) for c in self.checks],
            "figures": {str(k): figure_to_dict(v) for k, v in sorted(self.figures.items())},
            "certificate": certificate_to_dict(self.certificate) if self.certificate else None,
            "errata": [f"figure {k}: {e}" for k, v in sorted(self.figures.items()) for e in v.errata()],
        }
        if cfg.timings:
            out["timings"] = {k: round(v, 4) for k, v in self.timings.items()}
        return out


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, ParamPoly):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=str) if isinstance(x, (set, frozenset)) else items
    return str(x)


def check_to_dict(c: CheckReport) -> dict:
    return {"name": c.name, "status": c.status, "details": _jsonable(c.details)}


def figure_to_dict(f: FigureComparison) -> dict:
    return {
        "figure": f.figure,
        "d": f.d,
        "status": f.status,
        "rows": [{"row": r.row, "entry": r.computed, "printed": r.printed, "status": r.status} for r in f.rows],
    }


def certificate_to_dict(cert: GenericityCertificate) -> dict:
    return {
        "d": cert.d,
        "issued": cert.issued,
        "size": cert.d * cert.d - cert.d - 2,
        "rank": cert.rank,
        "determinant": str(cert.determinant) if cert.determinant is not None else None,
        "factored": cert.factored(),
        "conditions": [str(f.poly) for f in cert.factors],
        "violated": list(cert.violated),
        "witness": _jsonable(cert.witness),
        "witness_value": _jsonable(cert.witness_value),
        "modular_checks": {k: _jsonable(v) for k, v in cert.modular_checks.items() if k != "backend"},
    }


def _figure_check(comp: FigureComparison, mode: str) -> CheckReport:
    status = comp.status
    if mode == STRICT and status == "pass-with-erratum":
        status = "fail"
    details = {
        "d": comp.d,
        "rows": len(comp.rows),
        "matching": sum(r.status == "match" for r in comp.rows),
        "errata": comp.errata(),
        "mismatches": [r.row for r in comp.rows if r.status not in ("match", FACTOR2, ERRATUM)],
    }
    return CheckReport(f"figure {comp.figure}", status != "fail", details, status)


def _certificate_check(cert: GenericityCertificate) -> CheckReport:
    details = {
        "issued": cert.issued,
        "factored": cert.factored(),
        "violated": list(cert.violated),
    }
    return CheckReport("certificate", cert.issued, details)


def cmd_verify(config: RunConfig) -> VerificationReport:
    """Run the whole pipeline for one degree; checks are run and reported in a fixed order."""
    d = config.d
    report = VerificationReport(config)

    def timed(name: str, fn: Callable[[], Any]):
        t0 = time.perf_counter()
        out = fn()
        report.timings[name] = time.perf_counter() - t0
        return out

    report.checks.append(timed("G vanishes", lambda: check_G_vanishes(d)))
    report.checks.append(timed("D_s maximal", lambda: check_Ds_maximal(d, (1, 0))))
    report.checks.append(timed("dG surjective", lambda: check_dG_surjective(d)))
    report.checks.append(timed("kernel", lambda: check_kernel(d)))
    report.checks.append(timed("kernel splitting", lambda: check_kernel_splitting(d)))
    report.checks.append(timed("pipeline identity", lambda: check_pipeline_identity(d)))
    for fig in TABLE_FIGURES:
        comp = timed(f"figure {fig}", lambda fig=fig: compare_figure(fig, d))
        report.figures[fig] = comp
        report.checks.append(_figure_check(comp, config.mode))
    cert = timed("certificate", lambda: certify_surjective(dq_matrix(d), config.assignment, seed=config.seed))
    report.certificate = cert
    report.checks.append(_certificate_check(cert))
    return report


def cmd_tables(d: int, figure: int) -> FigureComparison:
    if figure not in TABLE_FIGURES:
        raise ValueError(f"figure must be one of {', '.join(map(str, TABLE_FIGURES))} (got {figure})")
    return compare_figure(figure, d)


def cmd_certify(d: int, assignment=None, seed: int = 0) -> GenericityCertificate:
    build_index_sets(d)
    if assignment is not None:
        assignment = parse_assignment(param_ring(d), assignment)
    return certify_surjective(dq_matrix(d), assignment, seed=seed)


# -- rendering ------------------------------------------------------------------------------------


def to_json(data: dict) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def render_verify_text(report: VerificationReport) -> str:
    data = report.to_dict()
    lines = [f"twistkit verify d={data['d']} seed={data['config']['seed']} mode={data['config']['mode']}"]
    for c in data["checks"]:
        lines.append(f"  {c['name']}: {c['status']}")
    cert = data["certificate"]
    if cert:
        lines.append(f"determinant: {cert['factored']}")
        if cert["violated"]:
            lines.append("violated conditions: " + ", ".join(cert["violated"]))
    for e in data["errata"]:
        lines.append(f"erratum: {e}")
    if "timings" in data:
        for k, v in data["timings"].items():
            lines.append(f"time {k}: {v:.4f}s")
    lines.append(f"overall: {data['status']}")
    return "\n".join(lines) + "\n"


def render_table_text(comp: FigureComparison) -> str:
    lines = [f"figure {comp.figure}, d = {comp.d} ({comp.status})"]
    for r in comp.rows:
        lines.append(f"{r.row} | {r.computed} | {r.status}")
    return "\n".join(lines) + "\n"


def render_certificate_text(cert: GenericityCertificate) -> str:
    data = certificate_to_dict(cert)
    lines = [
        f"d = {data['d']}, size {data['size']}, rank {data['rank']}",
        f"determinant: {data['factored']}",
        "conditions: " + (", ".join(f"{c} != 0" for c in data["conditions"]) or "none"),
    ]
    if data["witness"] is not None:
        lines.append("witness: " + ", ".join(f"{k}={v}" for k, v in data["witness"].items())
                     + f" -> {data['witness_value']}")
    if data["violated"]:
        lines.append("violated: " + ", ".join(data["violated"]))
    lines.append("issued" if data["issued"] else "refused")
    return "\n".join(lines) + "\n"


def load_schema() -> dict:
    text = resources.files("twistkit").joinpath("data/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
