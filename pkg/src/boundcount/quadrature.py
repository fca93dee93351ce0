"""Weighted moments of |V| with endpoint-singularity handling.

Every limit formula consumes one of four integrals::

    SqrtAbsV   int |V|^(1/2) dr
    AbsV       int |V| dr
    R_AbsV     int r |V| dr
    R2_AbsV    int r^2 |V| dr

The adaptive core is QUADPACK (``scipy.integrate.quad``); this module adds
splitting at breakpoints, a ``r = u**2`` substitution next to a singular
origin, and truncation of infinite ranges at a certified tail radius.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate as _si

from .errors import NotIntegrableError, QuadratureError
from .potentials import Potential

__all__ = [
    "Moment",
    "IntegralSpec",
    "integrate",
    "integrate_spec",
    "integrate_function",
    "tail_radius",
    "origin_exponent",
    "DEFAULT_RTOL",
]

DEFAULT_RTOL = 1e-10


class Moment(enum.Enum):
    SqrtAbsV = (0, 0.5)
    AbsV = (0, 1.0)
    R_AbsV = (1, 1.0)
    R2_AbsV = (2, 1.0)

    @property
    def r_power(self) -> int:
        return self.value[0]

    @property
    def v_power(self) -> float:
        return self.value[1]


@dataclass(frozen=True)
class IntegralSpec:
    moment: Moment
    lower: float = 0.0
    upper: float = math.inf

    def __post_init__(self):
        if not (self.lower >= 0 and self.lower < self.upper):
            raise ValueError(f"need 0 <= lower < upper, got {self.lower}, {self.upper}")


def _integrand(pot: Potential, moment: Moment):
    a, b = moment.value

    def f(r):
        v = abs(pot._value(np.asarray(r, dtype=float)))
        return float(r**a * v**b)

    return f


def origin_exponent(pot: Potential) -> float:
    """Estimate p in |V| ~ r^-p as r -> 0 (0 for potentials finite at the origin)."""
    if not pot.origin_singular:
        return 0.0
    r1, r2 = 1e-12 * pot.scale, 1e-11 * pot.scale
    v1, v2 = abs(pot(r1)), abs(pot(r2))
    return math.log(v1 / v2) / math.log(r2 / r1)


def _quad(f, a: float, b: float, rel_tol: float) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", _si.IntegrationWarning)
        try:
            val, _ = _si.quad(f, a, b, epsabs=0.0, epsrel=rel_tol, limit=400)
        except _si.IntegrationWarning as exc:
            # retry with an absolute floor; tiny tails rarely meet a pure relative target
            warnings.simplefilter("ignore", _si.IntegrationWarning)
            val, err = _si.quad(f, a, b, epsabs=1e-300, epsrel=rel_tol, limit=2000)
            if not math.isfinite(val) or err > 1e3 * rel_tol * abs(val) + 1e-280:
                raise QuadratureError(f"no convergence on [{a:g}, {b:g}]: {exc}") from None
    return val


def _split_points(lower: float, upper: float, extra, scale: float) -> list[float]:
    """Subdivision points: breakpoints plus decades so wide ranges stay well-resolved."""
    pts = {lower, upper}
    pts.update(b for b in extra if lower < b < upper)
    start = max(lower, 1e-3 * scale)
    x = 10.0 ** math.ceil(math.log10(start / scale)) * scale
    while x < upper:
        if x > lower:
            pts.add(x)
        x *= 10.0
    return sorted(pts)


def _finite_integral(pot: Potential, moment: Moment, lower: float, upper: float,
                     rel_tol: float) -> float:
    f = _integrand(pot, moment)
    a, b = moment.value
    total = 0.0
    if pot.origin_singular and lower == 0.0:
        p = origin_exponent(pot)
        if a - b * p <= -1.0 + 1e-3:
            raise NotIntegrableError(
                f"{moment.name} diverges at the origin for {pot.describe()}"
            )
        cut = min(0.01 * pot.scale, upper, *[x for x in pot.breakpoints if x > 0])
        # r = u^2 turns r^-1/2 type integrands into smooth ones
        total += _quad(lambda u: f(u * u) * 2.0 * u, 0.0, math.sqrt(cut), rel_tol)
        lower = cut
        if lower >= upper:
            return total
    pts = _split_points(lower, upper, pot.breakpoints, pot.scale)
    for lo, hi in zip(pts[:-1], pts[1:]):
        total += _quad(f, lo, hi, rel_tol)
    return total


def integrate(pot: Potential, moment: Moment, lower: float = 0.0,
              upper: float = math.inf, rel_tol: float = DEFAULT_RTOL) -> float:
    """Integrate a weighted moment of |V| over [lower, upper].

    Raises:
        NotIntegrableError: the moment diverges at the origin (e.g. AbsV for
            a Coulomb-like singularity).
        QuadratureError: adaptive refinement did not converge.
    """
    IntegralSpec(moment, lower, upper)
    if not (1e-14 < rel_tol < 1e-2):
        raise ValueError("rel_tol must lie in (1e-14, 1e-2)")
    end = pot.support_end
    if end is not None:
        upper = min(upper, end)
        if lower >= upper:
            return 0.0
        return _finite_integral(pot, moment, lower, upper, rel_tol)
    if math.isinf(upper):
        r_t = max(tail_radius(pot, rel_tol), lower)
        head = _finite_integral(pot, moment, lower, r_t, rel_tol) if r_t > lower else 0.0
        tail = _quad(_integrand(pot, moment), r_t, math.inf, 1e-8)
        return head + tail
    return _finite_integral(pot, moment, lower, upper, rel_tol)


def integrate_spec(pot: Potential, spec: IntegralSpec, rel_tol: float = DEFAULT_RTOL) -> float:
    return integrate(pot, spec.moment, spec.lower, spec.upper, rel_tol)


@lru_cache(maxsize=512)
def tail_radius(pot: Potential, rel_tol: float = DEFAULT_RTOL) -> float:
    """Radius beyond which the r|V| and r^2|V| moments are negligible.

    Returns ``r_max`` with ``int_{r_max}^inf r^n |V| < rel_tol * int_0^{r_max} r^n |V|``
    for n = 1 and n = 2; for compactly supported potentials the support end.
    """
    if pot.support_end is not None:
        return pot.support_end
    scale = pot.scale

    def excess(r: float) -> float:
        worst = 0.0
        for m in (Moment.R_AbsV, Moment.R2_AbsV):
            f = _integrand(pot, m)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", _si.IntegrationWarning)
                tail = _si.quad(f, r, math.inf, epsabs=0.0, epsrel=1e-6, limit=200)[0]
            head = _finite_integral(pot, m, 0.0, r, 1e-6)
            worst = max(worst, tail / head if head > 0 else math.inf)
        return worst

    lo = hi = scale
    if excess(hi) < rel_tol:
        while excess(lo) < rel_tol and lo > 1e-6 * scale:
            hi, lo = lo, lo / 2.0
    else:
        while excess(hi) >= rel_tol:
            lo, hi = hi, hi * 2.0
            if hi > 1e8 * scale:
                raise QuadratureError("potential tail decays too slowly")
    # bisection in log r down to 0.1% relative width
    while hi / lo > 1.001:
        mid = math.sqrt(lo * hi)
        if excess(mid) < rel_tol:
            hi = mid
        else:
            lo = mid
    return hi


def integrate_function(pot: Potential, f, rel_tol: float = DEFAULT_RTOL) -> float:
    """Integrate an arbitrary scalar function ``f(r)`` over the range of ``pot``.

    Uses the same origin substitution and range splitting as :func:`integrate`;
    meant for integrands built from V that are not one of the four moments.
    """
    end = pot.support_end if pot.support_end is not None else tail_radius(pot, rel_tol)
    pts = [0.0] + [float(x) for x in np.geomspace(1e-8 * pot.scale, end, 25)]
    if pot.origin_singular:
        pts[0] = 0.0
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _si.IntegrationWarning)
        for lo, hi in zip(pts[:-1], pts[1:]):
            if lo == 0.0 and pot.origin_singular:
                total += _si.quad(lambda u: f(u * u) * 2.0 * u, 0.0, math.sqrt(hi),
                                  epsabs=0.0, epsrel=rel_tol, limit=200)[0]
            else:
                total += _si.quad(f, lo, hi, epsabs=0.0, epsrel=rel_tol, limit=200)[0]
        if pot.support_end is None:
            total += _si.quad(f, end, math.inf, epsabs=0.0, epsrel=1e-8, limit=200)[0]
    return total
