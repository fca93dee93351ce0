import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundcount import BUILTIN_KINDS, Kind, LimitName, PotentialError, compute_bounds, make_builtin
from boundcount.report import (STIS_REFERENCE, compare_stis_row, coupling_window,
                               default_rel_tol, stis_row, sweep, threshold_coupling)


def test_hulthen_report():
    rep = compute_bounds(make_builtin("hulthen", 2.5))
    assert rep.n == 2 and rep.ok
    assert rep.limit("CC").bound == 5
    assert rep.limit("BS").bound == 10
    assert rep.limit(LimitName.FIRST_UPPER).bound == 3
    assert rep.limit(LimitName.FIRST_LOWER_SINGULAR).bound == 1
    assert any("CC" in w for w in rep.warnings)  # boundary case 2g = 5


def test_short_circuit_report():
    rep = compute_bounds(make_builtin("squarewell", 0.5))
    assert rep.n == 0 and rep.ok
    assert rep.radii.p is None
    assert rep.bracket([LimitName.FIRST_UPPER, LimitName.LADDER_UP]) == (0, 0)


def test_report_dict_is_deterministic_json():
    a = compute_bounds(make_builtin("stis", 10.0, 1.0, 1.0)).as_dict()
    b = compute_bounds(make_builtin("stis", 10.0, 1.0, 1.0)).as_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert "timings" not in a


def test_stis_row_matches_reference():
    row = stis_row(100.0, 10.0)
    assert compare_stis_row(row) == []
    assert row["N"] == STIS_REFERENCE[(100.0, 10.0)][0]


def test_compare_flags_mismatches():
    row = stis_row(1.0, 10.0)
    row["CC"] += 1
    row["nu_plus"] += 1  # 3 -> 4 still within one of the reference 4
    problems = compare_stis_row(row)
    assert len(problems) == 1 and problems[0].startswith("CC")


def test_sweep_rows_ordered_and_monotone():
    rows = sweep(make_builtin("poschlteller", 1.0), [9.0, 0.5, 3.0, 20.0, 6.0])
    gs = [r.g for r in rows]
    assert gs == sorted(gs)
    ns = [r.n for r in rows]
    assert ns == sorted(ns)
    # Poschl-Teller: N = floor((sqrt(1 + 4 g^2) + 1) / 4)
    assert ns == [int((np.sqrt(1 + 4 * g * g) + 1) // 4) for g in gs]
    assert rows[0].header()[:2] == ["g", "N"]
    assert len(rows[0].header()) == len(rows[0].cells())


def test_sweep_below_threshold_is_all_zero():
    rows = sweep(make_builtin("exponential", 1.0), [0.2, 0.4, 0.6])
    assert [r.n for r in rows] == [0, 0, 0]


def test_sweep_rejects_nonpositive():
    with pytest.raises(PotentialError):
        sweep(make_builtin("exponential", 1.0), [0.0, 1.0])


def test_threshold_coupling_square_well():
    # the third state appears at g = 5 pi / 2
    g = threshold_coupling(make_builtin("squarewell", 1.0), 3)
    assert g == pytest.approx(2.5 * np.pi, rel=1e-8)
    lo, hi = coupling_window(make_builtin("squarewell", 1.0), 3)
    assert hi == pytest.approx(3.5 * np.pi, rel=1e-8)


def test_env_tolerance(monkeypatch):
    monkeypatch.setenv("BOUNDCOUNT_RTOL", "1e-8")
    assert default_rel_tol() == 1e-8
    monkeypatch.setenv("BOUNDCOUNT_RTOL", "abc")
    with pytest.raises(PotentialError):
        default_rel_tol()


@settings(max_examples=15, deadline=None)
@given(kind=st.sampled_from(BUILTIN_KINDS), g=st.floats(0.6, 60.0),
       alpha=st.floats(0.5, 1e4))
def test_sandwich_property(kind, g, alpha):
    pot = make_builtin(kind, g, 1.0, alpha if kind is Kind.STIS else None)
    rep = compute_bounds(pot, nudge_marginal=True)
    assert rep.ok, [(lim.name.value, lim.bound, rep.n) for lim in rep.violations]
