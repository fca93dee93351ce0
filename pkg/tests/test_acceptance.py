"""End-to-end acceptance checks; each test prints one PASS/FAIL line."""

import math
import time

import numpy as np
import pytest
from scipy.special import jn_zeros

from boundcount import (BUILTIN_KINDS, KgPotential, Kind, LimitName, compute_bounds,
                        count_nodes, kg_reduce, make_builtin)
from boundcount.analytic import Quantity, analytic_limit, analytic_nu, numeric_counterpart, \
    supported_pairs
from boundcount.ladder import check_ladder_sandwich, ladder_lower, ladder_upper
from boundcount.report import compare_stis_row, stis_table, sweep, threshold_coupling

pytestmark = pytest.mark.acceptance

FIRST_TYPE = (
    LimitName.FIRST_UPPER, LimitName.FIRST_UPPER_REGULAR,
    LimitName.FIRST_LOWER_REGULAR, LimitName.FIRST_LOWER_REGULAR_Q,
    LimitName.FIRST_LOWER_SINGULAR, LimitName.FIRST_LOWER_TS, LimitName.FIRST_LOWER_TQ,
)
LADDERS = (LimitName.LADDER_UP, LimitName.LADDER_DOWN)


def _alphas(kind):
    return (1.0, 100.0) if kind is Kind.STIS else (None,)


def test_criterion_1_stis_grid(record_criterion):
    t0 = time.perf_counter()
    rows = stis_table()
    elapsed = time.perf_counter() - t0
    problems = [f"({r['alpha']:g},{r['g']:g}) {p}" for r in rows for p in compare_stis_row(r)]
    ok = not problems and elapsed < 30.0 and len(rows) == 9
    record_criterion(1, "STIS benchmark grid", ok,
                     f"{len(rows)} rows, {len(problems)} mismatches, {elapsed:.1f}s"
                     + (f"; {problems[:3]}" if problems else ""))
    assert not problems
    assert elapsed < 30.0


def _threshold_free(kind, g, alpha, delta=1e-6):
    lo = math.floor(analytic_nu(kind, g * (1 - delta), alpha))
    hi = math.floor(analytic_nu(kind, g * (1 + delta), alpha))
    return lo == hi


def test_criterion_2_exact_count_formulas(record_criterion):
    t0 = time.perf_counter()
    gs = (0.6, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0)
    cases = [(k, a) for k in (Kind.SQUARE_WELL, Kind.POSCHL_TELLER, Kind.HULTHEN)
             for a in (None,)] + [(Kind.STIS, 1.0), (Kind.STIS, 100.0)]
    bad, checked = [], 0
    for kind, alpha in cases:
        for g in gs:
            if not _threshold_free(kind, g, alpha):
                continue
            want = max(0, math.floor(analytic_nu(kind, g, alpha)))
            got = count_nodes(make_builtin(kind, g, 1.0, alpha)).n
            checked += 1
            if got != want:
                bad.append((kind.value, alpha, g, got, want))
    zeros = jn_zeros(0, 200)
    for g in gs:
        want = int(np.sum(zeros <= 2.0 * g))
        got = count_nodes(make_builtin(Kind.EXPONENTIAL, g)).n
        checked += 1
        if got != want:
            bad.append(("exponential", None, g, got, want))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 10.0
    record_criterion(2, "exact counts vs closed forms", ok,
                     f"{checked} cases, {len(bad)} mismatches, {elapsed:.1f}s"
                     + (f"; {bad[:3]}" if bad else ""))
    assert not bad
    assert elapsed < 10.0


def test_criterion_3_sandwich_all_builtins(record_criterion):
    t0 = time.perf_counter()
    gs = (1.0, 2.0, 5.0, 10.0, 30.0, 100.0)
    violations, rows = [], 0
    for kind in BUILTIN_KINDS:
        for alpha in _alphas(kind):
            for row in sweep(make_builtin(kind, 1.0, 1.0, alpha), gs):
                rows += 1
                for lim in row.limits:
                    if lim.applicable and not lim.holds_for(row.n):
                        violations.append((kind.value, alpha, row.g, lim.name.value,
                                           lim.bound, row.n))
    elapsed = time.perf_counter() - t0
    ok = not violations and elapsed < 60.0
    record_criterion(3, "lower <= N <= upper for every built-in", ok,
                     f"{rows} reports, {len(violations)} violations, {elapsed:.1f}s"
                     + (f"; {violations[:3]}" if violations else ""))
    assert not violations
    assert elapsed < 60.0


def _claim(kind, n):
    """Report at the smallest coupling binding ``n`` states."""
    g = threshold_coupling(make_builtin(kind, 1.0), n)
    return g, compute_bounds(make_builtin(kind, g))


def test_criterion_4_quoted_intervals(record_criterion):
    t0 = time.perf_counter()
    results = []

    def within(bracket, lo, hi):
        return lo <= bracket[0] and bracket[1] <= hi

    g, rep = _claim(Kind.HULTHEN, 5000)
    first, ladder = rep.bracket(FIRST_TYPE), rep.bracket(LADDERS)
    results.append(("hulthen", rep.n == 5000 and within(first, 4996, 5003) and ladder[0] >= 4994,
                    f"g={g:.6f} N={rep.n} first={first} ladder_lower={ladder[0]}"))

    g, rep = _claim(Kind.POSCHL_TELLER, 5000)
    first, ladder = rep.bracket(FIRST_TYPE), rep.bracket(LADDERS)
    results.append(("poschlteller",
                    rep.n == 5000 and within(first, 4998, 5001) and within(ladder, 4996, 5002),
                    f"g={g:.6f} N={rep.n} first={first} ladder={ladder}"))

    g, rep = _claim(Kind.YUKAWA, 50)
    first, ladder = rep.bracket(FIRST_TYPE), rep.bracket(LADDERS)
    results.append(("yukawa", rep.n == 50 and within(first, 49, 53) and ladder[0] >= 48,
                    f"g={g:.6f} N={rep.n} first={first} ladder_lower={ladder[0]}"))

    elapsed = time.perf_counter() - t0
    ok = all(r[1] for r in results) and elapsed < 300.0
    detail = "; ".join(f"{name} {'ok' if good else 'FAIL'} ({info})" for name, good, info in results)
    record_criterion(4, "quoted brackets at large N", ok, f"{detail}; {elapsed:.1f}s")
    for name, good, info in results:
        assert good, f"{name}: {info}"
    assert elapsed < 300.0


def test_criterion_5_oracle_agreement(record_criterion):
    worst, bad, cache = 0.0, [], {}
    for g in (2.5, 10.0, 50.0):
        for kind, quantity in supported_pairs():
            if quantity is Quantity.EXACT_NU:
                continue
            for alpha in _alphas(kind):
                key = (kind, g, alpha)
                if key not in cache:
                    cache[key] = compute_bounds(make_builtin(kind, g, 1.0, alpha))
                lim = cache[key].limit(numeric_counterpart(kind, quantity))
                closed = analytic_limit(kind, quantity, g, alpha)
                if quantity in (Quantity.LADDER_NU_PLUS, Quantity.LADDER_NU_MINUS):
                    if math.isnan(closed.value):
                        continue
                    want = closed.params.get("recursion_bound", closed.value)
                    if lim.bound != want:
                        bad.append((kind.value, quantity.value, g, alpha, lim.bound, want))
                    continue
                tol = 1e-4 if (kind is Kind.YUKAWA and quantity in
                               (Quantity.FIRST_UPPER, Quantity.FIRST_LOWER)) else 1e-6
                rel = abs(lim.raw - closed.value) / abs(closed.value)
                worst = max(worst, rel)
                if rel > tol:
                    bad.append((kind.value, quantity.value, g, alpha, lim.raw, closed.value))
    record_criterion(5, "numeric pipeline vs closed forms", not bad,
                     f"{len(cache)} potentials, worst rel. error {worst:.2e}"
                     + (f"; {bad[:3]}" if bad else ""))
    assert not bad


def test_criterion_6_semiclassical_limit(record_criterion):
    out, bad = [], []
    for kind in BUILTIN_KINDS:
        for alpha in _alphas(kind):
            rep = compute_bounds(make_builtin(kind, 300.0, 1.0, alpha), ladders=False)
            ratio = rep.n * math.pi / rep.phase_integral
            cc = rep.limit(LimitName.CC).raw / rep.n
            out.append(f"{kind.value}{'' if alpha is None else f'({alpha:g})'}:"
                       f"{ratio:.4f}/{cc:.4f}")
            if not (0.95 <= ratio <= 1.05 and 1.9 <= cc <= 2.1):
                bad.append(kind.value)
    record_criterion(6, "N*pi/Phi and CC/N at g=300", not bad, ", ".join(out))
    assert not bad


def test_criterion_7_klein_gordon_growth(record_criterion):
    gs = np.array([4.0, 8.0, 16.0, 32.0])
    ns = np.array([count_nodes(kg_reduce(KgPotential(make_builtin("exponential", g), 1.0))).n
                   for g in gs])
    slope = float(np.polyfit(np.log(gs), np.log(ns), 1)[0])
    ok = 1.8 <= slope <= 2.1
    record_criterion(7, "Klein-Gordon log-log slope", ok,
                     f"N={ns.tolist()}, slope={slope:.4f}")
    assert ok


def test_criterion_8_ladder_potential_sandwich(record_criterion):
    details, bad = [], []
    for kind, alpha in ((Kind.SQUARE_WELL, None), (Kind.POSCHL_TELLER, None), (Kind.STIS, 1.0),
                        (Kind.STIS, 100.0)):
        pot = make_builtin(kind, 10.0, 1.0, alpha)
        for builder in (ladder_upper, ladder_lower):
            trace, _ = builder(pot)
            chk = check_ladder_sandwich(pot, trace, points=1000, slack=1e-12)
            details.append(f"{kind.value}/{trace.direction.value}:{chk.violations}")
            if not chk.ok:
                bad.append((kind.value, trace.direction.value, chk.violations, chk.worst))
    record_criterion(8, "V+ <= V <= V- on 1000 points", not bad, ", ".join(details))
    assert not bad
