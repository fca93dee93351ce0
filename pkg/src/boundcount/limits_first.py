"""WKB-type limits built from the phase integral and log corrections.

All of them start from ``Phi = int_0^inf |V|^(1/2) dr`` and the radii
``p`` and ``q`` where the accumulated phase from the origin, respectively
towards infinity, equals pi/2:

* ``first_upper``            N <= Phi/pi + log|V(p)/V(q)|/(4 pi) + 1/2
* ``first_upper_regular``    N <= Phi/pi + log|V(0)/V(q)|/(4 pi) + 1/2
* ``first_lower_regular``    N >  int_0^s |V|^(1/2)/pi - log|V(0)/V(s)|/(4 pi) - 1/2
* ``first_lower_regular_q``  the previous one at s = q
* ``first_lower_singular``   N >= Phi/pi - log|V(p)/V(q)|/(4 pi) - 3/2   (needs p <= q)
* ``first_lower_ts``         N >  int_t^s |V|^(1/2)/pi - log|V(p)/V(s)|/(4 pi)
* ``first_lower_tq``         the previous one at s = q

When ``Phi <= pi/2`` there is no bound state and every limit here returns 0.
"""

from __future__ import annotations

import math
from dataclasses import replace

from .errors import NoBoundStatesError
from .limits_classic import Direction, LimitName, LimitValue, inapplicable, make_limit
from .potentials import Potential
from .quadrature import DEFAULT_RTOL, Moment, integrate
from .rootfind import AuxiliaryRadii, auxiliary_radii, bound_state_possible, phase_integral

__all__ = [
    "first_limits",
    "first_lower_regular",
    "first_lower_regular_q",
    "first_lower_singular",
    "first_lower_tq",
    "first_lower_ts",
    "first_upper",
    "first_upper_regular",
    "lower_regular_at",
    "lower_ts_at",
]

_INV_PI = 1.0 / math.pi
_INV_4PI = 0.25 / math.pi

_NAMES_DIRECTIONS = {
    LimitName.FIRST_UPPER: Direction.UPPER,
    LimitName.FIRST_UPPER_REGULAR: Direction.UPPER,
    LimitName.FIRST_LOWER_REGULAR: Direction.LOWER,
    LimitName.FIRST_LOWER_REGULAR_Q: Direction.LOWER,
    LimitName.FIRST_LOWER_SINGULAR: Direction.LOWER,
    LimitName.FIRST_LOWER_TS: Direction.LOWER,
    LimitName.FIRST_LOWER_TQ: Direction.LOWER,
}


class _Ctx:
    """Lazily shared quantities for one potential."""

    def __init__(self, pot: Potential, radii: AuxiliaryRadii | None, rel_tol: float):
        self.pot = pot
        self.rel_tol = rel_tol
        self.phi = phase_integral(pot, rel_tol)
        self.bound_possible = bound_state_possible(self.phi)
        self._radii = radii

    @property
    def radii(self) -> AuxiliaryRadii:
        if self._radii is None:
            self._radii = auxiliary_radii(self.pot, rel_tol=self.rel_tol)
        return self._radii

    def absv(self, r: float) -> float:
        return abs(self.pot(r))

    def phase(self, lo: float, hi: float) -> float:
        if hi <= lo:
            return 0.0
        return integrate(self.pot, Moment.SqrtAbsV, lo, hi, self.rel_tol)


def _none_possible(name: LimitName, phi: float) -> LimitValue:
    lim = make_limit(name, 0.0, _NAMES_DIRECTIONS[name],
                     reason=f"phase integral {phi:.6g} <= pi/2: no bound state")
    return replace(lim, boundary=False)  # an exact zero, not a rounding case


def _ctx(pot, radii, rel_tol) -> _Ctx:
    return pot if isinstance(pot, _Ctx) else _Ctx(pot, radii, rel_tol)


def first_upper(pot: Potential, radii: AuxiliaryRadii | None = None,
                rel_tol: float = DEFAULT_RTOL) -> LimitValue:
    c = _ctx(pot, radii, rel_tol)
    if not c.bound_possible:
        return _none_possible(LimitName.FIRST_UPPER, c.phi)
    p, q = c.radii.p, c.radii.q
    raw = c.phi * _INV_PI + _INV_4PI * math.log(c.absv(p) / c.absv(q)) + 0.5
    return make_limit(LimitName.FIRST_UPPER, raw, Direction.UPPER)


def first_upper_regular(pot: Potential, radii: AuxiliaryRadii | None = None,
                        rel_tol: float = DEFAULT_RTOL) -> LimitValue:
    c = _ctx(pot, radii, rel_tol)
    if c.pot.origin_singular:
        return inapplicable(LimitName.FIRST_UPPER_REGULAR, Direction.UPPER,
                            "needs a potential finite at the origin")
    if not c.bound_possible:
        return _none_possible(LimitName.FIRST_UPPER_REGULAR, c.phi)
    raw = c.phi * _INV_PI + _INV_4PI * math.log(c.absv(0.0) / c.absv(c.radii.q)) + 0.5
    return make_limit(LimitName.FIRST_UPPER_REGULAR, raw, Direction.UPPER)


def lower_regular_at(pot: Potential, s: float, rel_tol: float = DEFAULT_RTOL) -> float:
    """Raw regular lower limit for an arbitrary radius ``s > 0``."""
    c = _ctx(pot, None, rel_tol)
    vs = c.absv(s)
    if vs == 0.0:
        return -math.inf
    return c.phase(0.0, s) * _INV_PI - _INV_4PI * math.log(c.absv(0.0) / vs) - 0.5


def _s_candidates(c: _Ctx, t: float | None = None) -> list[float]:
    cands = list(c.radii.s_roots) + [c.radii.q]
    end = c.pot.support_end
    if end is not None:
        cands.append(end)
        cands = [s for s in cands if s <= end]
    if t is not None:
        cands = [s for s in cands if s >= t]
    return [s for s in cands if s > 0.0 and c.absv(s) > 0.0]


def first_lower_regular(pot: Potential, s: float | None = None,
                        radii: AuxiliaryRadii | None = None,
                        rel_tol: float = DEFAULT_RTOL) -> LimitValue:
    """Regular lower limit at radius ``s``.

    Without ``s`` the limit is evaluated at every stationary radius, at ``q``
    and at the support end, and the most stringent value is kept.
    """
    c = _ctx(pot, radii, rel_tol)
    name = LimitName.FIRST_LOWER_REGULAR
    if c.pot.origin_singular:
        return inapplicable(name, Direction.LOWER, "needs a potential finite at the origin")
    if s is not None:
        if not s > 0:
            raise ValueError("s must be positive")
        return make_limit(name, lower_regular_at(c, s), Direction.LOWER, strict=True,
                          reason=f"s={s:.10g}")
    if not c.bound_possible:
        return _none_possible(name, c.phi)
    best = max(_s_candidates(c), key=lambda x: lower_regular_at(c, x))
    return make_limit(name, lower_regular_at(c, best), Direction.LOWER, strict=True,
                      reason=f"s={best:.10g}")


def first_lower_regular_q(pot: Potential, radii: AuxiliaryRadii | None = None,
                          rel_tol: float = DEFAULT_RTOL) -> LimitValue:
    c = _ctx(pot, radii, rel_tol)
    name = LimitName.FIRST_LOWER_REGULAR_Q
    if c.pot.origin_singular:
        return inapplicable(name, Direction.LOWER, "needs a potential finite at the origin")
    if not c.bound_possible:
        return _none_possible(name, c.phi)
    raw = c.phi * _INV_PI - _INV_4PI * math.log(c.absv(0.0) / c.absv(c.radii.q)) - 1.0
    return make_limit(name, raw, Direction.LOWER, strict=True)


def first_lower_singular(pot: Potential, radii: AuxiliaryRadii | None = None,
                         rel_tol: float = DEFAULT_RTOL) -> LimitValue:
    c = _ctx(pot, radii, rel_tol)
    name = LimitName.FIRST_LOWER_SINGULAR
    if not c.bound_possible:
        return _none_possible(name, c.phi)
    p, q = c.radii.p, c.radii.q
    if q < p:
        # the estimate integrates the phase equation from p out to q
        return inapplicable(name, Direction.LOWER, f"q={q:.6g} lies below p={p:.6g}")
    raw = c.phi * _INV_PI - _INV_4PI * math.log(c.absv(p) / c.absv(q)) - 1.5
    return make_limit(name, raw, Direction.LOWER)


def lower_ts_at(pot: Potential, s: float, radii: AuxiliaryRadii | None = None,
                rel_tol: float = DEFAULT_RTOL) -> float:
    """Raw t-s lower limit for an arbitrary ``s >= t``."""
    c = _ctx(pot, radii, rel_tol)
    t, p = c.radii.t, c.radii.p
    if t is None:
        raise NoBoundStatesError("t is undefined for this potential")
    if s < t:
        raise ValueError(f"s={s:g} must not be below t={t:g}")
    vs = c.absv(s)
    if vs == 0.0:
        return -math.inf
    return c.phase(t, s) * _INV_PI - _INV_4PI * math.log(c.absv(p) / vs)


def first_lower_ts(pot: Potential, s: float | None = None,
                   radii: AuxiliaryRadii | None = None,
                   rel_tol: float = DEFAULT_RTOL) -> LimitValue:
    """Lower limit integrating the phase from ``t`` to ``s``.

    Without ``s``, candidates at or beyond ``t`` (stationary radii, ``q``, the
    support end) are tried and the most stringent kept.
    """
    c = _ctx(pot, radii, rel_tol)
    name = LimitName.FIRST_LOWER_TS
    if not c.bound_possible:
        return _none_possible(name, c.phi)
    t = c.radii.t
    if t is None:
        return inapplicable(name, Direction.LOWER, "t = int_0^t r^2|V| has no positive root")
    if s is not None:
        return make_limit(name, lower_ts_at(c, s), Direction.LOWER, strict=True,
                          reason=f"t={t:.10g}, s={s:.10g}")
    cands = _s_candidates(c, t)
    if not cands:
        return inapplicable(name, Direction.LOWER, f"no admissible s >= t={t:.6g}")
    best = max(cands, key=lambda x: lower_ts_at(c, x))
    return make_limit(name, lower_ts_at(c, best), Direction.LOWER, strict=True,
                      reason=f"t={t:.10g}, s={best:.10g}")


def first_lower_tq(pot: Potential, radii: AuxiliaryRadii | None = None,
                   rel_tol: float = DEFAULT_RTOL) -> LimitValue:
    c = _ctx(pot, radii, rel_tol)
    name = LimitName.FIRST_LOWER_TQ
    if not c.bound_possible:
        return _none_possible(name, c.phi)
    t, p, q = c.radii.t, c.radii.p, c.radii.q
    if t is None:
        return inapplicable(name, Direction.LOWER, "t = int_0^t r^2|V| has no positive root")
    if q < t:
        return inapplicable(name, Direction.LOWER, f"q={q:.6g} lies below t={t:.6g}")
    raw = (c.phase(t, math.inf) * _INV_PI
           - _INV_4PI * math.log(c.absv(p) / c.absv(q)) - 0.5)
    return make_limit(name, raw, Direction.LOWER, strict=True, reason=f"t={t:.10g}")


def first_limits(pot: Potential, radii: AuxiliaryRadii | None = None,
                 rel_tol: float = DEFAULT_RTOL) -> list[LimitValue]:
    """Every first-type limit, regular forms included (possibly inapplicable)."""
    c = _Ctx(pot, radii, rel_tol)
    return [
        first_upper(c),
        first_upper_regular(c),
        first_lower_regular(c),
        first_lower_regular_q(c),
        first_lower_singular(c),
        first_lower_ts(c),
        first_lower_tq(c),
    ]
