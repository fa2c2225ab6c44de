from __future__ import annotations

import pytest

from twistkit.errors import PreconditionError
from twistkit.figures import (
    ERRATUM,
    FACTOR2,
    MATCH,
    compare_figure,
    format_bisection,
    printed_dG_rows,
)


@pytest.mark.parametrize("d", range(3, 7))
def test_figure1(d):
    comp = compare_figure(1, d)
    statuses = {r.row: r.status for r in comp.rows}
    assert statuses.pop("e0") == ERRATUM
    assert set(statuses.values()) == {MATCH}
    assert comp.status == "pass-with-erratum"


@pytest.mark.parametrize("d", range(3, 7))
def test_figure1_e0_derived_value(d):
    e0 = next(r for r in compare_figure(1, d).rows if r.row == "e0")
    assert e0.computed == f"S0^0 S1^{d - 2} · T1^{d - 1}"
    assert e0.printed.endswith(f"T1^{d - 2}" if d > 3 else "T1")


def test_b_row_spot():
    assert format_bisection(printed_dG_rows(3)["b_(2,1)"]) == "S0^2 S1^0 · T0 T1"
    row = next(r for r in compare_figure(1, 3).rows if r.row == "b_(2,1)")
    assert row.computed == "S0^2 S1^0 · T0 T1"


@pytest.mark.parametrize("d", range(3, 7))
def test_figure2_and_3_exact(d):
    assert compare_figure(2, d).status == "pass"
    assert compare_figure(3, d).status == "pass"


@pytest.mark.parametrize("fig", [4, 5, 6])
@pytest.mark.parametrize("d", [3, 4, 5])
def test_figures_4_to_6(fig, d):
    comp = compare_figure(fig, d)
    for r in comp.rows:
        if r.row.startswith("w"):
            assert r.status == MATCH, r
        else:
            assert r.status == FACTOR2, r
    assert len(comp.rows) == d * d - d - 2


def test_figure6_d3_has_four_rows():
    assert [r.row for r in compare_figure(6, 3).rows] == ["w_(2,1)", "w_(2,2)", "v^2", "v^3"]


def test_figure3_d4_basis():
    from twistkit.derivative import ms_basis

    assert len(ms_basis(4)) == 10


def test_unknown_figure():
    with pytest.raises(PreconditionError):
        compare_figure(7, 3)
