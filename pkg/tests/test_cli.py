from __future__ import annotations

import json
import subprocess
import sys
from collections import Counter

import jsonschema
import pytest

from twistkit.cli import main
from twistkit.report import load_schema


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(scope="module")
def schema():
    return load_schema()


def test_verify_d3_json(capsys, schema):
    code, out, _ = run(capsys, "verify", "--d", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, schema)
    assert data["status"] == "pass"
    assert sum(c["status"] == "pass" for c in data["checks"]) >= 6
    assert data["certificate"]["factored"] == "4*C_1a*C_1b*C_za^2"


def test_verify_zeroed_parameter(capsys, tmp_path, schema):
    pf = tmp_path / "zeroed_C1b.json"
    pf.write_text(json.dumps({"C_1b": "0"}))
    code, out, _ = run(capsys, "verify", "--d", "3", "--param-file", str(pf), "--format", "json")
    assert code == 1
    data = json.loads(out)
    jsonschema.validate(data, schema)
    assert data["certificate"]["violated"] == ["C_1b"]


def test_verify_small_d(capsys):
    code, _, err = run(capsys, "verify", "--d", "2")
    assert code == 2
    assert "d ≥ 3 required" in err


def test_strict_mode_fails_on_errata(capsys):
    code, out, _ = run(capsys, "verify", "--d", "3", "--strict", "--format", "json")
    assert code == 1
    data = json.loads(out)
    failing = {c["name"] for c in data["checks"] if c["status"] == "fail"}
    assert failing == {"figure 1", "figure 4", "figure 5", "figure 6"}


def test_byte_identical(capsys):
    outs = [run(capsys, "verify", "--d", "3", "--format", "json", "--seed", "7")[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("TWISTKIT_SEED", "5")
    _, out, _ = run(capsys, "verify", "--d", "3", "--format", "json")
    assert json.loads(out)["config"]["seed"] == 5
    _, out, _ = run(capsys, "verify", "--d", "3", "--format", "json", "--seed", "2")
    assert json.loads(out)["config"]["seed"] == 2


def test_timings_opt_in(capsys, schema):
    _, out, _ = run(capsys, "verify", "--d", "3", "--format", "json")
    assert "timings" not in json.loads(out)
    _, out, _ = run(capsys, "verify", "--d", "3", "--format", "json", "--timings")
    data = json.loads(out)
    jsonschema.validate(data, schema)
    assert "certificate" in data["timings"]


@pytest.mark.parametrize("fig", [1, 3, 4, 5, 6])
def test_tables_text_and_json_agree(capsys, fig, schema):
    _, js, _ = run(capsys, "tables", "--d", "4", "--figure", str(fig), "--format", "json")
    _, txt, _ = run(capsys, "tables", "--d", "4", "--figure", str(fig), "--format", "text")
    data = json.loads(js)
    jsonschema.validate(data, {"$ref": "#/$defs/figure", "$defs": schema["$defs"]})
    from_json = Counter((r["row"], r["entry"]) for r in data["rows"])
    from_text = Counter(tuple(line.split(" | ")[:2]) for line in txt.splitlines()[1:])
    assert from_json == from_text


def test_tables_spot(capsys):
    _, txt, _ = run(capsys, "tables", "--d", "3", "--figure", "1")
    assert "b_(2,1) | S0^2 S1^0 · T0 T1 | match" in txt.splitlines()
    _, js, _ = run(capsys, "tables", "--d", "3", "--figure", "6", "--format", "json")
    assert len(json.loads(js)["rows"]) == 4


@pytest.mark.parametrize("fig", ["2", "7", "0"])
def test_tables_bad_figure(capsys, fig):
    code, _, err = run(capsys, "tables", "--d", "3", "--figure", fig)
    assert code == 2 and "figure" in err


def test_divisor_commands(capsys):
    assert run(capsys, "divisor", "necessity", "--n", "8", "--d", "3")[1] == "infeasible: n+1-d^2 = 0\n"
    _, out, _ = run(capsys, "divisor", "conic", "--n", "9", "--d", "3", "--format", "json")
    data = json.loads(out)
    assert data["fiber_dim"] == 4 and data["omega_twist"] == -1 and data["fano"] is True
    assert run(capsys, "divisor", "schedule", "--a0", "3", "--b1", "1", "--a", "13")[1].startswith("m=3 r'=2")
    assert "h + 3psi" in run(capsys, "divisor", "chern", "--n", "9", "--d", "3")[1]


def test_divisor_precondition_exit_code(capsys):
    assert run(capsys, "divisor", "schedule", "--a0", "3", "--b1", "1", "--a", "2")[0] == 2
    assert run(capsys, "divisor", "conic", "--n", "3", "--d", "3")[0] == 2


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert run(capsys, "certify", "--d", "3", "--param-file", str(bad))[0] == 2
    bad.write_text('{"C_99": 1}')
    code, _, err = run(capsys, "certify", "--d", "3", "--param-file", str(bad))
    assert code == 2 and "C_99" in err
    assert run(capsys, "certify", "--d", "3", "--param-file", str(tmp_path / "missing.json"))[0] == 2


def test_certify(capsys, tmp_path):
    code, out, _ = run(capsys, "certify", "--d", "3", "--format", "json")
    assert code == 0 and json.loads(out)["issued"]
    pf = tmp_path / "p.json"
    pf.write_text(json.dumps({"C_za": "0"}))
    code, out, _ = run(capsys, "certify", "--d", "3", "--param-file", str(pf))
    assert code == 1 and "violated: C_za" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "twistkit", "divisor", "necessity", "--n", "9", "--d", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("feasible")


def test_schema_copies_identical():
    from pathlib import Path

    root = Path(__file__).resolve().parents[1]
    assert (root / "docs" / "report.schema.json").read_text() == \
        (root / "src" / "twistkit" / "data" / "report.schema.json").read_text()
