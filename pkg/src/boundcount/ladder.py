"""Ladder limits from explicit half-wavelength radius recursions.

Starting at the origin, the increasing ladder steps outward by a local
quarter period ``(pi/2) |V(r_j)|^(-1/2)`` until it reaches ``q``; starting at
``q`` the decreasing ladder steps inward until the radius becomes
nonpositive.  Each ladder is equivalent to a piecewise-constant potential
that minorizes (increasing) or majorizes (decreasing) the potential cut off
at ``q``, whose bound states are counted exactly by the number of steps.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .counter import count_piecewise_constant
from .errors import NoBoundStatesError
from .limits_classic import Direction, LimitName, LimitValue, inapplicable, make_limit
from .potentials import Potential
from .quadrature import DEFAULT_RTOL, Moment, integrate
from .rootfind import HALF_PI, bound_state_possible, phase_integral, solve_q

__all__ = [
    "LadderDirection",
    "LadderTrace",
    "SandwichCheck",
    "check_ladder_sandwich",
    "ladder_lower",
    "ladder_potential",
    "ladder_upper",
    "trace_down",
    "trace_up",
]

TIE_EPS = 1e-12


class LadderDirection(str, enum.Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class LadderTrace:
    """Radii of one ladder recursion.

    Attributes:
        direction: ``up`` (from 0 towards q) or ``down`` (from q towards 0).
        q: the anchor radius.
        radii: ``r_0, r_1, ...`` including the first radius past the end
            condition (``>= q`` going up, ``<= 0`` going down).
        J: last index before the end condition.
        bound: the implied integer limit on N.
        raw_steps: the step lengths ``(pi/2) |V(r_j)|^(-1/2)``.
    """

    direction: LadderDirection
    q: float
    radii: np.ndarray = field(repr=False)
    J: int
    bound: int
    raw_steps: np.ndarray = field(repr=False)

    def rows(self):
        """``(j, r_j, step_j)`` tuples for export."""
        steps = np.append(self.raw_steps, math.nan)
        return [(j, float(r), float(s)) for j, (r, s) in enumerate(zip(self.radii, steps))]


def _step(pot: Potential, r: float) -> float:
    v = abs(pot(r))
    if v == 0.0:
        raise NoBoundStatesError(f"V vanishes at r={r:g} inside the ladder range")
    return HALF_PI / math.sqrt(v)


def _max_steps(pot: Potential, q: float, rel_tol: float) -> int:
    phase = integrate(pot, Moment.SqrtAbsV, 0.0, q, rel_tol) if q > 0 else 0.0
    return int(4.0 * (2.0 / math.pi) * phase) + 8


def trace_up(pot: Potential, q: float, rel_tol: float = DEFAULT_RTOL) -> LadderTrace:
    """Increasing ladder from ``r_0 = 0``; ``J`` is the last index with ``r_J < q``.

    A radius within ``1e-12 R`` of ``q`` counts as having reached it.
    """
    if pot.origin_singular:
        raise ValueError("the increasing ladder needs a potential finite at the origin")
    tie = TIE_EPS * pot.scale
    cap = _max_steps(pot, q, rel_tol)
    radii, steps = [0.0], []
    while radii[-1] < q - tie:
        if len(steps) > cap:
            raise RuntimeError("increasing ladder failed to reach q")
        h = _step(pot, radii[-1])
        steps.append(h)
        radii.append(radii[-1] + h)
    J = len(radii) - 2
    return LadderTrace(LadderDirection.UP, q, np.array(radii), J, (J + 1) // 2 + 1,
                       np.array(steps))


def trace_down(pot: Potential, q: float, rel_tol: float = DEFAULT_RTOL) -> LadderTrace:
    """Decreasing ladder from ``r_0 = q``; ``J`` is the last index with ``r_J > 0``."""
    if q <= 0.0:
        return LadderTrace(LadderDirection.DOWN, q, np.array([q]), 0, 0, np.array([]))
    cap = _max_steps(pot, q, rel_tol)
    radii, steps = [q], []
    while radii[-1] > 0.0:
        if len(steps) > cap:
            raise RuntimeError("decreasing ladder failed to reach the origin")
        h = _step(pot, radii[-1])
        steps.append(h)
        radii.append(radii[-1] - h)
    J = len(radii) - 2
    return LadderTrace(LadderDirection.DOWN, q, np.array(radii), J, J // 2, np.array(steps))


def _anchor(pot: Potential, q: float | None, rel_tol: float) -> float | None:
    if q is not None:
        return q
    if not bound_state_possible(phase_integral(pot, rel_tol)):
        return None
    return solve_q(pot, rel_tol=rel_tol)


def _exact_limit(name: LimitName, trace: LadderTrace, direction: Direction) -> LimitValue:
    # ladder bounds are integers by construction, never a rounding boundary case
    lim = make_limit(name, float(trace.bound), direction, reason=f"J={trace.J}")
    return replace(lim, boundary=False)


def _no_states(name: LimitName, direction: Direction) -> LimitValue:
    lim = make_limit(name, 0.0, direction, reason="no bound state possible")
    return replace(lim, boundary=False)


def ladder_upper(pot: Potential, q: float | None = None, rel_tol: float = DEFAULT_RTOL
                 ) -> tuple[LadderTrace | None, LimitValue]:
    """Upper limit ``N <= floor((J + 1) / 2) + 1`` from the increasing ladder."""
    name = LimitName.LADDER_UP
    if pot.origin_singular:
        return None, inapplicable(name, Direction.UPPER, "needs a potential finite at the origin")
    q = _anchor(pot, q, rel_tol)
    if q is None:
        return None, _no_states(name, Direction.UPPER)
    trace = trace_up(pot, q, rel_tol)
    return trace, _exact_limit(name, trace, Direction.UPPER)


def ladder_lower(pot: Potential, q: float | None = None, rel_tol: float = DEFAULT_RTOL
                 ) -> tuple[LadderTrace | None, LimitValue]:
    """Lower limit ``N >= floor(J / 2)`` from the decreasing ladder."""
    name = LimitName.LADDER_DOWN
    q = _anchor(pot, q, rel_tol)
    if q is None:
        return None, _no_states(name, Direction.LOWER)
    trace = trace_down(pot, q, rel_tol)
    return trace, _exact_limit(name, trace, Direction.LOWER)


# -- the equivalent piecewise-constant potentials ----------------------------------

def ladder_potential(pot: Potential, trace: LadderTrace) -> tuple[np.ndarray, np.ndarray]:
    """Cell edges and values of the ladder potential, zero beyond ``q``.

    Up: ``V(r_j)`` on ``[r_j, r_{j+1})`` and ``V(r_J)`` on ``[r_J, q)``.
    Down: ``V(r_J)`` on ``[0, r_J]`` and ``V(r_{j-1})`` on ``(r_j, r_{j-1}]``.
    """
    J, q = trace.J, trace.q
    r = trace.radii
    if trace.direction is LadderDirection.UP:
        edges = np.append(r[: J + 1], q)
        values = np.asarray(pot(r[: J + 1]), dtype=float)
    else:
        inner = r[: J + 1][::-1]  # r_J, ..., r_0 = q
        edges = np.concatenate(([0.0], inner))
        values = np.asarray(pot(inner), dtype=float)
    return edges, values


def _ladder_eval(edges: np.ndarray, values: np.ndarray, x: np.ndarray, right_closed: bool):
    if right_closed:
        idx = np.searchsorted(edges, x, side="left") - 1
        idx = np.where(x == edges[0], 0, idx)
    else:
        idx = np.searchsorted(edges, x, side="right") - 1
    inside = (idx >= 0) & (idx < values.size)
    out = np.zeros_like(x)
    out[inside] = values[idx[inside]]
    return out


@dataclass(frozen=True)
class SandwichCheck:
    """Pointwise comparison of a ladder potential with V on ``[0, q)``."""

    direction: LadderDirection
    points: int
    violations: int
    worst: float
    ladder_count: int
    expected_count: int

    @property
    def ok(self) -> bool:
        return self.violations == 0


def check_ladder_sandwich(pot: Potential, trace: LadderTrace, points: int = 1000,
                          slack: float = 1e-12) -> SandwichCheck:
    """Check ``V_up <= V`` (up) or ``V <= V_down`` (down) on a dense grid below ``q``.

    Also counts the bound states of the ladder potential itself; for the
    increasing ladder it must equal ``floor((J + 1) / 2)`` and for the
    decreasing one it must be at least ``floor(J / 2)``.
    """
    edges, values = ladder_potential(pot, trace)
    lo = 1e-9 * trace.q if pot.origin_singular else 0.0
    x = np.linspace(lo, trace.q, points, endpoint=False)
    v = np.asarray(pot(x), dtype=float)
    up = trace.direction is LadderDirection.UP
    lad = _ladder_eval(edges, values, x, right_closed=not up)
    gap = (lad - v) if up else (v - lad)  # must be <= 0
    tol = slack * np.maximum(np.abs(v), 1.0)
    bad = gap > tol
    count = count_piecewise_constant(edges, values)
    expected = (trace.J + 1) // 2 if up else trace.J // 2
    return SandwichCheck(trace.direction, points, int(bad.sum()),
                         float(gap.max()) if gap.size else 0.0, count, expected)
