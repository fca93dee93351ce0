"""Classical upper and lower limits on the number of S-wave bound states.

Upper limits: ``BS`` (``int r|V|``), ``CC`` (``(2/pi) int |V|^(1/2)``) and
``M`` (``(int r^2|V| int |V|)^(1/4)``).
Lower limits: ``C`` (``(2/pi) rho |V(rho)|^(1/2) - 1/2``) and its
origin-value variant ``C0``.  Also provides the one-state sufficient
conditions.

Every limit is returned as a :class:`LimitValue` carrying both the raw
right-hand side and the integer it implies for N.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import BoundCountError, NotIntegrableError, RootNotFoundError
from .potentials import Potential
from .quadrature import DEFAULT_RTOL, Moment, integrate, integrate_function
from .rootfind import (
    scan_grid,
    solve_a_saturated,
    solve_a_moment_split,
    solve_rho,
)

__all__ = [
    "BOUNDARY_EPS",
    "Direction",
    "LimitName",
    "LimitValue",
    "OneStateFlags",
    "bs_upper",
    "c0_lower",
    "c_lower",
    "cc_upper",
    "classic_limits",
    "inapplicable",
    "integerize",
    "make_limit",
    "martin_upper",
    "sufficient_one_state",
]

BOUNDARY_EPS = 1e-9


class Direction(str, enum.Enum):
    UPPER = "upper"
    LOWER = "lower"


class LimitName(str, enum.Enum):
    BS = "BS"
    CC = "CC"
    M = "M"
    C = "C"
    C0 = "C0"
    FIRST_UPPER = "first_upper"
    FIRST_UPPER_REGULAR = "first_upper_regular"
    FIRST_LOWER_REGULAR = "first_lower_regular"
    FIRST_LOWER_REGULAR_Q = "first_lower_regular_q"
    FIRST_LOWER_SINGULAR = "first_lower_singular"
    FIRST_LOWER_TS = "first_lower_ts"
    FIRST_LOWER_TQ = "first_lower_tq"
    LADDER_UP = "ladder_up"
    LADDER_DOWN = "ladder_down"


@dataclass(frozen=True)
class LimitValue:
    """One limit on N.

    Attributes:
        name: which limit.
        raw: the real right-hand side before integerization.
        bound: the implied integer limit (``None`` when inapplicable).
        direction: upper (``N <= bound``) or lower (``N >= bound``).
        applicable: False when the formula does not apply to this potential.
        reason: why the limit is inapplicable, or a note on how it was obtained.
        boundary: raw lay within :data:`BOUNDARY_EPS` of an integer; the less
            stringent integer was chosen.
        strict: the underlying inequality is strict (``N > raw``).
    """

    name: LimitName
    raw: float
    bound: int | None
    direction: Direction
    applicable: bool = True
    reason: str = ""
    boundary: bool = False
    strict: bool = False

    def holds_for(self, n: int) -> bool:
        """True if the exact count ``n`` is consistent with this limit."""
        if not self.applicable or self.bound is None:
            return True
        return n <= self.bound if self.direction is Direction.UPPER else n >= self.bound

    def as_dict(self) -> dict:
        return {
            "name": self.name.value,
            "raw": self.raw,
            "bound": self.bound,
            "direction": self.direction.value,
            "applicable": self.applicable,
            "reason": self.reason,
            "boundary": self.boundary,
            "strict": self.strict,
        }


def integerize(raw: float, direction: Direction, eps: float = BOUNDARY_EPS) -> tuple[int, bool]:
    """Integer implied by a real limit, plus a boundary-case flag.

    Upper limits floor, lower limits ceil (``N > x`` with non-integer ``x``
    also gives ``N >= ceil(x)``).  Within ``eps`` of an integer the nearest
    integer is returned, which is the less stringent side in both directions.
    Both directions are clamped at zero: N is never negative, and an upper
    limit derived under the premise N >= 1 still implies ``N <= max(U, 0)``.
    """
    nearest = round(raw)
    if abs(raw - nearest) < eps:
        value, boundary = int(nearest), True
    elif direction is Direction.UPPER:
        value, boundary = math.floor(raw), False
    else:
        value, boundary = math.ceil(raw), False
    return max(value, 0), boundary


def make_limit(name: LimitName, raw: float, direction: Direction, *, strict: bool = False,
               reason: str = "") -> LimitValue:
    bound, boundary = integerize(raw, direction)
    return LimitValue(name, float(raw), bound, direction, True, reason, boundary, strict)


def inapplicable(name: LimitName, direction: Direction, reason: str) -> LimitValue:
    return LimitValue(name, math.nan, None, direction, False, reason)


# -- upper limits -----------------------------------------------------------------

def bs_upper(pot: Potential, rel_tol: float = DEFAULT_RTOL) -> LimitValue:
    try:
        raw = integrate(pot, Moment.R_AbsV, rel_tol=rel_tol)
    except NotIntegrableError as exc:
        return inapplicable(LimitName.BS, Direction.UPPER, str(exc))
    return make_limit(LimitName.BS, raw, Direction.UPPER)


def cc_upper(pot: Potential, rel_tol: float = DEFAULT_RTOL) -> LimitValue:
    raw = 2.0 / math.pi * integrate(pot, Moment.SqrtAbsV, rel_tol=rel_tol)
    return make_limit(LimitName.CC, raw, Direction.UPPER)


def martin_upper(pot: Potential, rel_tol: float = DEFAULT_RTOL) -> LimitValue:
    """The ``M`` limit; inapplicable when ``int |V|`` diverges at the origin."""
    try:
        second = integrate(pot, Moment.R2_AbsV, rel_tol=rel_tol)
        zeroth = integrate(pot, Moment.AbsV, rel_tol=rel_tol)
    except NotIntegrableError as exc:
        return inapplicable(LimitName.M, Direction.UPPER, str(exc))
    return make_limit(LimitName.M, (second * zeroth) ** 0.25, Direction.UPPER)


# -- lower limits -----------------------------------------------------------------

def c_lower(pot: Potential, rel_tol: float = DEFAULT_RTOL, rho: float | None = None) -> LimitValue:
    if rho is None:
        try:
            rho = solve_rho(pot, rel_tol=rel_tol)
        except RootNotFoundError as exc:
            return inapplicable(LimitName.C, Direction.LOWER, str(exc))
    raw = 2.0 / math.pi * rho * math.sqrt(abs(pot(rho))) - 0.5
    return make_limit(LimitName.C, raw, Direction.LOWER, reason=f"rho={rho:.10g}")


def c0_lower(pot: Potential, rel_tol: float = DEFAULT_RTOL) -> LimitValue:
    if pot.origin_singular:
        return inapplicable(LimitName.C0, Direction.LOWER, "potential is singular at the origin")
    v0 = abs(pot(0.0))
    raw = integrate(pot, Moment.AbsV, rel_tol=rel_tol) / (math.pi * math.sqrt(v0)) - 0.5
    return make_limit(LimitName.C0, raw, Direction.LOWER)


# -- one-state sufficient conditions -------------------------------------------------

@dataclass(frozen=True)
class OneStateFlags:
    """Sufficient conditions for at least one bound state.

    Each ``*_value`` is the left-hand side at its optimal parameter and the
    flag is the comparison against the threshold (``3 pi / 2``,
    ``3 pi / 4``, ``(3 pi / 2) |V(0)|^(1/2)``, 1 and 1 respectively).
    """

    split_min: bool
    split_min_value: float
    rho_form: bool
    rho_form_value: float
    origin_form: bool | None
    origin_form_value: float | None
    moment_split: bool
    moment_split_value: float
    saturated: bool
    saturated_value: float

    @property
    def any(self) -> bool:
        return bool(self.split_min or self.rho_form or self.origin_form
                    or self.moment_split or self.saturated)

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _split_radius(pot: Potential, level: float, rel_tol: float) -> float:
    """Radius where |V| falls to ``level`` (0 if already below at the origin)."""
    grid = scan_grid(pot, 256, rel_tol)
    absv = np.abs(pot(grid))
    if absv[0] <= level:
        return 0.0 if not pot.origin_singular else float(grid[0])
    below = np.nonzero(absv <= level)[0]
    if not below.size:
        return float(grid[-1]) if pot.support_end is None else float(pot.support_end)
    i = int(below[0])
    if pot.has_jump and i == grid.size - 1 and absv[i] > level:
        return float(pot.support_end)
    return brentq(lambda r: abs(pot(r)) - level, float(grid[i - 1]), float(grid[i]),
                  xtol=1e-14 * float(grid[i]), rtol=1e-13)


def _split_min_integral(pot: Potential, a: float, rel_tol: float) -> float:
    """``int min(1/a, a|V|) dr`` for a nondecreasing potential."""
    r_a = _split_radius(pot, 1.0 / (a * a), rel_tol)
    outer = integrate(pot, Moment.AbsV, r_a, np.inf, rel_tol) if r_a > 0 else \
        integrate(pot, Moment.AbsV, rel_tol=rel_tol)
    return r_a / a + a * outer


def _moment_split_lhs(pot: Potential, a: float, rel_tol: float) -> float:
    return (integrate(pot, Moment.R2_AbsV, 0.0, a, rel_tol) / a
            + a * integrate(pot, Moment.AbsV, a, np.inf, rel_tol))


def _saturated_lhs(pot: Potential, a: float, rel_tol: float) -> float:
    a2 = a * a

    def f(r: float) -> float:
        v = abs(float(pot._value(np.asarray(r))))
        return v / (1.0 + a2 * v)

    return a * integrate_function(pot, f, rel_tol)


def sufficient_one_state(pot: Potential, rel_tol: float = 1e-8) -> OneStateFlags:
    """Evaluate the five one-state sufficient conditions at their optimal parameters.

    The split-minimum form is maximized numerically over ``a`` (a log grid
    followed by a bounded scalar search) rather than through ``rho``, so it
    cross-checks the ``rho`` form.
    """
    try:
        rho = solve_rho(pot, rel_tol=rel_tol)
        rho_val = rho * math.sqrt(abs(pot(rho)))
    except RootNotFoundError:
        rho_val = 0.0
    ref = 1.0 / math.sqrt(abs(pot(float(scan_grid(pot, 3, rel_tol)[1]))))
    try:
        log_a = np.linspace(math.log(ref) - 8.0, math.log(ref) + 8.0, 65)
        vals = [_split_min_integral(pot, math.exp(x), rel_tol) for x in log_a]
        i = int(np.argmax(vals))
        lo, hi = log_a[max(i - 1, 0)], log_a[min(i + 1, log_a.size - 1)]
        res = minimize_scalar(lambda x: -_split_min_integral(pot, math.exp(x), rel_tol),
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-10})
        split_val = max(-float(res.fun), vals[i])
    except (NotIntegrableError, BoundCountError):
        split_val = 0.0
    if pot.origin_singular:
        origin_ok, origin_val = None, None
    else:
        origin_val = integrate(pot, Moment.AbsV, rel_tol=rel_tol)
        origin_ok = origin_val > 1.5 * math.pi * math.sqrt(abs(pot(0.0)))
    try:
        a = solve_a_moment_split(pot, rel_tol=rel_tol)
        moment_split_val = _moment_split_lhs(pot, a, rel_tol)
    except RootNotFoundError:
        moment_split_val = 0.0
    try:
        a = solve_a_saturated(pot, rel_tol=rel_tol)
        cal_val = _saturated_lhs(pot, a, rel_tol)
    except RootNotFoundError:
        cal_val = 0.0
    return OneStateFlags(
        split_min=split_val > 1.5 * math.pi, split_min_value=split_val,
        rho_form=rho_val > 0.75 * math.pi, rho_form_value=rho_val,
        origin_form=origin_ok, origin_form_value=origin_val,
        moment_split=moment_split_val > 1.0, moment_split_value=moment_split_val,
        saturated=cal_val > 1.0, saturated_value=cal_val,
    )


def classic_limits(pot: Potential, rel_tol: float = DEFAULT_RTOL,
                   rho: float | None = None) -> list[LimitValue]:
    """BS, CC, M, C and C0 in that order."""
    return [
        bs_upper(pot, rel_tol),
        cc_upper(pot, rel_tol),
        martin_upper(pot, rel_tol),
        c_lower(pot, rel_tol, rho),
        c0_lower(pot, rel_tol),
    ]
