"""Aggregated reports: one potential, coupling sweeps, and the STIS grid."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .counter import NodeCountResult, count_nodes
from .errors import PotentialError
from .ladder import LadderTrace, ladder_lower, ladder_upper
from .limits_classic import Direction, LimitName, LimitValue, classic_limits
from .limits_first import first_limits
from .potentials import Kind, Potential, make_builtin
from .quadrature import DEFAULT_RTOL
from .rootfind import AuxiliaryRadii, auxiliary_radii, bound_state_possible, phase_integral

__all__ = [
    "BoundsReport",
    "LIMIT_ORDER",
    "STIS_GRID",
    "STIS_REFERENCE",
    "STIS_COLUMNS",
    "SweepRow",
    "compare_stis_row",
    "compute_bounds",
    "coupling_window",
    "default_rel_tol",
    "stis_table",
    "threshold_coupling",
    "sweep",
]

RTOL_ENV = "BOUNDCOUNT_RTOL"
MARGINAL_NUDGE = 1e-9

LIMIT_ORDER = (
    LimitName.BS, LimitName.CC, LimitName.M, LimitName.C, LimitName.C0,
    LimitName.FIRST_UPPER, LimitName.FIRST_UPPER_REGULAR,
    LimitName.FIRST_LOWER_REGULAR, LimitName.FIRST_LOWER_REGULAR_Q,
    LimitName.FIRST_LOWER_SINGULAR, LimitName.FIRST_LOWER_TS, LimitName.FIRST_LOWER_TQ,
    LimitName.LADDER_UP, LimitName.LADDER_DOWN,
)


def default_rel_tol() -> float:
    """Quadrature tolerance, overridable through ``BOUNDCOUNT_RTOL``."""
    text = os.environ.get(RTOL_ENV)
    if not text:
        return DEFAULT_RTOL
    try:
        value = float(text)
    except ValueError:
        raise PotentialError(f"{RTOL_ENV}={text!r} is not a number") from None
    if not 1e-14 < value < 1e-2:
        raise PotentialError(f"{RTOL_ENV} must lie in (1e-14, 1e-2), got {value:g}")
    return value


@dataclass
class BoundsReport:
    """Exact count plus every limit for one potential.

    ``violations`` lists applicable limits contradicted by the exact count;
    a non-empty list always indicates a bug.
    """

    potential: Potential
    exact: NodeCountResult
    limits: list[LimitValue]
    radii: AuxiliaryRadii
    phase_integral: float
    traces: dict[str, LadderTrace | None] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    nudged_g: float | None = None

    @property
    def n(self) -> int:
        return self.exact.n

    @property
    def violations(self) -> list[LimitValue]:
        return [lim for lim in self.limits if not lim.holds_for(self.exact.n)]

    @property
    def ok(self) -> bool:
        return not self.violations

    def limit(self, name: LimitName | str) -> LimitValue:
        name = LimitName(name)
        for lim in self.limits:
            if lim.name is name:
                return lim
        raise KeyError(name)

    def bracket(self, names) -> tuple[int, int]:
        """Tightest ``(lower, upper)`` from the applicable limits in ``names``."""
        lows, highs = [0], [math.inf]
        for name in names:
            lim = self.limit(name)
            if not lim.applicable or lim.bound is None:
                continue
            (highs if lim.direction is Direction.UPPER else lows).append(lim.bound)
        return max(lows), min(highs)

    def as_dict(self, timings: bool = False) -> dict:
        pot = self.potential
        out = {
            "potential": pot.describe(),
            "kind": pot.kind.value,
            "g": pot.g if pot.kind is not Kind.TABULATED else None,
            "R": pot.R if pot.kind is not Kind.TABULATED else None,
            "alpha": pot.alpha,
            "exact": {
                "n": self.exact.n,
                "r_max": self.exact.r_max,
                "method": self.exact.method,
                "marginal": self.exact.marginal_flag,
                "log_derivative": self.exact.log_derivative,
                "nodes": [float(x) for x in self.exact.nodes],
            },
            "phase_integral": self.phase_integral,
            "radii": self.radii.as_dict(),
            "limits": [lim.as_dict() for lim in self.limits],
            "warnings": list(self.warnings),
            "violations": [lim.name.value for lim in self.violations],
        }
        if self.nudged_g is not None:
            out["nudged_g"] = self.nudged_g
        if timings:
            out["timings"] = dict(self.timings)
        return out


def _timed(timings: dict, key: str, fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    timings[key] = time.perf_counter() - t0
    return out


def compute_bounds(pot: Potential, rel_tol: float | None = None, nudge_marginal: bool = False,
                   ladders: bool = True) -> BoundsReport:
    """Exact count, auxiliary radii and all limits for ``pot``.

    Args:
        pot: the potential.
        rel_tol: quadrature tolerance (default from :func:`default_rel_tol`).
        nudge_marginal: if the zero-energy solution is (nearly) a threshold
            resonance, raise g by a relative 1e-9 and recompute, so the count
            is deterministic.  Only possible for potentials with a coupling.
        ladders: include the two ladder limits.
    """
    rel_tol = default_rel_tol() if rel_tol is None else rel_tol
    timings: dict[str, float] = {}
    warnings: list[str] = []
    exact = _timed(timings, "exact", count_nodes, pot, rel_tol)
    nudged = None
    if exact.marginal_flag:
        if nudge_marginal and pot.kind is not Kind.TABULATED:
            nudged = pot.g * (1.0 + MARGINAL_NUDGE)
            pot = pot.with_coupling(nudged)
            exact = _timed(timings, "exact", count_nodes, pot, rel_tol)
            warnings.append(f"threshold resonance: coupling nudged to g={nudged:.12g}")
        else:
            warnings.append("zero-energy solution is marginal (threshold resonance)")

    phi = phase_integral(pot, rel_tol)
    possible = bound_state_possible(phi)
    if not possible:
        radii = AuxiliaryRadii(p=None, q=None, rho=None)
        warnings.append("phase integral at most pi/2: no bound state, new limits short-circuit to 0")
    else:
        radii = _timed(timings, "radii", auxiliary_radii, pot, rel_tol=rel_tol)
    limits = _timed(timings, "classic", classic_limits, pot, rel_tol, radii.rho)
    limits += _timed(timings, "first", first_limits, pot, radii, rel_tol)
    traces: dict[str, LadderTrace | None] = {}
    if ladders:
        t0 = time.perf_counter()
        trace_up, up = ladder_upper(pot, radii.q if possible else None, rel_tol)
        trace_down, down = ladder_lower(pot, radii.q if possible else None, rel_tol)
        timings["ladder"] = time.perf_counter() - t0
        traces = {"up": trace_up, "down": trace_down}
        limits += [up, down]
    for lim in limits:
        if lim.boundary:
            warnings.append(f"{lim.name.value}: raw value {lim.raw:.12g} is within 1e-9 of an "
                            "integer; the less stringent side was taken")
    report = BoundsReport(pot, exact, limits, radii, phi, traces, timings, warnings, nudged)
    for lim in report.violations:
        report.warnings.append(f"VIOLATION: {lim.name.value} bound {lim.bound} vs exact {exact.n}")
    return report


# -- sweeps --------------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    g: float
    n: int
    limits: tuple[LimitValue, ...]

    def header(self) -> list[str]:
        cols = ["g", "N"]
        for lim in self.limits:
            cols += [f"{lim.name.value}_raw", f"{lim.name.value}"]
        return cols

    def cells(self) -> list[str]:
        out = [f"{self.g:.10g}", str(self.n)]
        for lim in self.limits:
            if lim.applicable:
                out += [f"{lim.raw:.6g}", str(lim.bound)]
            else:
                out += ["", ""]
        return out


def _sweep_row(pot: Potential, rel_tol: float) -> SweepRow:
    rep = compute_bounds(pot, rel_tol, nudge_marginal=True)
    by_name = {lim.name: lim for lim in rep.limits}
    return SweepRow(pot.g, rep.n, tuple(by_name[name] for name in LIMIT_ORDER))


def sweep(base: Potential, g_values, rel_tol: float | None = None,
          workers: int | None = None) -> list[SweepRow]:
    """Reports for ``base`` at each coupling in ``g_values`` (sorted ascending)."""
    rel_tol = default_rel_tol() if rel_tol is None else rel_tol
    gs = sorted(float(g) for g in g_values)
    if any(not (g > 0) for g in gs):
        raise PotentialError("couplings must be positive")
    pots = [base.with_coupling(g) for g in gs]
    workers = workers or min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: _sweep_row(p, rel_tol), pots))


# -- STIS benchmark grid -------------------------------------------------------------------

STIS_GRID = (
    (1.0, 10.0), (1.0, 100.0), (1.0, 1000.0),
    (1e2, 10.0), (1e2, 100.0),
    (1e4, 10.0), (1e4, 100.0),
    (1e6, 10.0), (1e6, 100.0),
)

STIS_COLUMNS = ("N", "nu_lo", "nu_up", "nu_minus", "nu_plus", "BS", "CC", "M", "C", "C0")

# reference integers for the grid above; None marks a cell known only as "> 1e5"
STIS_REFERENCE = {
    (1.0, 10.0): (2, 2, 2, 2, 4, 19, 4, 4, 2, 2),
    (1.0, 100.0): (22, 21, 22, 22, 24, 1931, 44, 48, 19, 16),
    (1.0, 1000.0): (221, 220, 221, 220, 222, None, 441, 488, 186, 159),
    (1e2, 10.0): (15, 13, 15, 13, 17, 362, 29, 30, 6, 3),
    (1e2, 100.0): (147, 146, 148, 146, 150, 36250, 293, 308, 57, 32),
    (1e4, 10.0): (29, 27, 31, 27, 33, 821, 58, 99, 6, 3),
    (1e4, 100.0): (293, 291, 295, 291, 297, 82105, 586, 999, 63, 32),
    (1e6, 10.0): (44, 41, 46, 40, 49, 1281, 87, 316, 6, 3),
    (1e6, 100.0): (440, 437, 442, 436, 445, None, 879, 3162, 64, 32),
}
STIS_LOWER_BOUND_CELLS = {"BS": 1e5}


def stis_row(alpha: float, g: float, rel_tol: float | None = None) -> dict:
    """Integer cells of one STIS grid row, keyed by :data:`STIS_COLUMNS`."""
    rep = compute_bounds(make_builtin(Kind.STIS, g, 1.0, alpha), rel_tol)
    b = {lim.name: lim.bound for lim in rep.limits}
    return {
        "alpha": alpha, "g": g,
        "N": rep.n,
        "nu_lo": b[LimitName.FIRST_LOWER_REGULAR_Q],
        "nu_up": b[LimitName.FIRST_UPPER_REGULAR],
        "nu_minus": b[LimitName.LADDER_DOWN],
        "nu_plus": b[LimitName.LADDER_UP],
        "BS": b[LimitName.BS], "CC": b[LimitName.CC], "M": b[LimitName.M],
        "C": b[LimitName.C], "C0": b[LimitName.C0],
        "ok": rep.ok,
    }


def stis_table(rel_tol: float | None = None, workers: int | None = None) -> list[dict]:
    workers = workers or min(8, os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ag: stis_row(ag[0], ag[1], rel_tol), STIS_GRID))


def compare_stis_row(row: dict, ladder_slack: int = 1) -> list[str]:
    """Mismatches of a computed row against :data:`STIS_REFERENCE`.

    Ladder columns may differ by ``ladder_slack``; cells without a reference
    integer are checked as lower bounds.
    """
    ref = STIS_REFERENCE.get((row["alpha"], row["g"]))
    if ref is None:
        return []
    problems = []
    for col, want in zip(STIS_COLUMNS, ref):
        got = row[col]
        if want is None:
            floor_value = STIS_LOWER_BOUND_CELLS[col]
            if not got > floor_value:
                problems.append(f"{col}: {got} not > {floor_value:g}")
        elif col in ("nu_minus", "nu_plus"):
            if abs(got - want) > ladder_slack:
                problems.append(f"{col}: {got} vs {want} (allowed +-{ladder_slack})")
        elif got != want:
            problems.append(f"{col}: {got} vs {want}")
    return problems


# -- coupling search -----------------------------------------------------------------------

def _count_at(base: Potential, g: float, rel_tol: float) -> int:
    return count_nodes(base.with_coupling(g), rel_tol).n


def threshold_coupling(base: Potential, n: int, rel_tol: float | None = None,
                       xtol: float = 1e-9) -> float:
    """Smallest coupling (to relative ``xtol``) at which ``base`` binds ``n`` states.

    Bisection on the exact counter, started from the semiclassical estimate
    ``N ~ Phi/pi``.  The returned value is on the bound side: the count there
    is at least ``n``.
    """
    rel_tol = default_rel_tol() if rel_tol is None else rel_tol
    if n < 1:
        raise ValueError("n must be at least 1")
    phi1 = phase_integral(base.with_coupling(1.0), rel_tol)  # Phi is linear in g
    lo = hi = n * math.pi / phi1
    while _count_at(base, lo, rel_tol) >= n:
        lo *= 0.9
    while _count_at(base, hi, rel_tol) < n:
        hi *= 1.1
    while hi - lo > xtol * hi:
        mid = 0.5 * (lo + hi)
        if _count_at(base, mid, rel_tol) >= n:
            hi = mid
        else:
            lo = mid
    return hi


def coupling_window(base: Potential, n: int, rel_tol: float | None = None,
                    xtol: float = 1e-9) -> tuple[float, float]:
    """Interval ``[g_lo, g_hi)`` of couplings with exactly ``n`` bound states."""
    return (threshold_coupling(base, n, rel_tol, xtol),
            threshold_coupling(base, n + 1, rel_tol, xtol))
