"""Closed-form counts and limits for the six built-in potentials.

These values depend on ``g`` (and ``alpha`` for STIS) only, never on
quadrature, so they serve as independent oracles for the numeric pipeline.
The only numeric steps are scalar root solves (the Poschl-Teller and Yukawa
C radii) and inverse error functions (the Yukawa p and q).

Conventions: ``FIRST_UPPER`` is the origin-value form for regular potentials
and the p-value form for singular ones; ``FIRST_LOWER`` is the ``s = q``
form for regular potentials and the ``-3/2`` form for singular ones.  For
STIS the returned first-type values are the raw right-hand sides; the
tabulated ``nu_lo`` (which is one more than the raw lower limit) is in
``params``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import erfinv, exp1, j0

from .limits_classic import LimitName
from .potentials import BUILTIN_KINDS, Kind, parse_kind

__all__ = [
    "numeric_counterpart",
    "ClosedForm",
    "Quantity",
    "UnsupportedClosedForm",
    "analytic_asymptotic",
    "analytic_limit",
    "analytic_nu",
    "bessel_zero_count",
    "supported_pairs",
]


class Quantity(str, enum.Enum):
    EXACT_NU = "nu"
    FIRST_UPPER = "first_upper"
    FIRST_LOWER = "first_lower"
    BS = "BS"
    CC = "CC"
    M = "M"
    C = "C"
    C0 = "C0"
    LADDER_NU_PLUS = "ladder_nu_plus"
    LADDER_NU_MINUS = "ladder_nu_minus"


class UnsupportedClosedForm(KeyError):
    """No closed form is known for the requested (kind, quantity) pair."""


@dataclass(frozen=True)
class ClosedForm:
    kind: Kind
    quantity: Quantity
    value: float
    params: dict = field(default_factory=dict)


# -- auxiliary roots ------------------------------------------------------------------

def _pt_c_root() -> float:
    """Root of ``2x = 1 + exp(-2x)``."""
    return brentq(lambda x: 2.0 * x - 1.0 - math.exp(-2.0 * x), 0.1, 2.0, xtol=1e-15)


def _yukawa_c_root() -> float:
    """Root of ``exp(-x) = E1(x)``."""
    return brentq(lambda x: math.exp(-x) - exp1(x), 0.05, 3.0, xtol=1e-15)


def _yukawa_erf_roots(g: float) -> tuple[float, float, float]:
    """``(x, y, a)`` with ``erf(y) = a``, ``erf(x) = 1 - a``, ``a = sqrt(pi/8)/g``."""
    a = math.sqrt(math.pi / 8.0) / g
    if not 0.0 < a < 0.5:
        raise ValueError(f"Yukawa p and q need g > sqrt(pi/2)/2, got g={g:g}")
    return float(erfinv(1.0 - a)), float(erfinv(a)), a


def bessel_zero_count(x_max: float) -> int:
    """Number of zeros of J0 in ``(0, x_max]`` by sign-change counting."""
    if x_max <= 0.0:
        return 0
    n = int(x_max / 0.05) + 2
    x = np.linspace(0.0, x_max, n)
    y = j0(x)
    count = int(np.count_nonzero(np.signbit(y[1:]) != np.signbit(y[:-1])))
    if y[-1] == 0.0:
        count += 1
    return count


def _stis_lambda(g: float) -> float:
    return math.sqrt(4.0 * g * g - 1.0)


# -- exact nu ---------------------------------------------------------------------------

def analytic_nu(kind, g: float, alpha: float | None = None) -> float:
    """Real ``nu`` whose integer part is the exact number of bound states.

    Exponential returns the integer count of J0 zeros up to ``2g``; STIS with
    ``g <= 1/2`` returns 0.  Yukawa has no closed form.
    """
    kind = parse_kind(kind)
    if kind is Kind.SQUARE_WELL:
        return g / math.pi + 0.5
    if kind is Kind.POSCHL_TELLER:
        return (math.sqrt(1.0 + 4.0 * g * g) + 1.0) / 4.0
    if kind is Kind.EXPONENTIAL:
        return float(bessel_zero_count(2.0 * g))
    if kind is Kind.HULTHEN:
        return float(g)
    if kind is Kind.STIS:
        if alpha is None:
            raise ValueError("STIS needs alpha")
        if g <= 0.5:
            return 0.0
        lam = _stis_lambda(g)
        return (lam * math.log1p(alpha) + 2.0 * math.atan(lam)) / (2.0 * math.pi)
    raise UnsupportedClosedForm((kind, Quantity.EXACT_NU))


# -- limits -------------------------------------------------------------------------------

def _square_well(q: Quantity, g: float, alpha) -> tuple[float, dict]:
    nu = g / math.pi + 0.5
    # recursion ladders: constant step pi/(2g) and q = 1 - pi/(2g)
    x = 2.0 * g / math.pi - 1.0
    J = math.ceil(x) - 1
    table = {
        Quantity.FIRST_UPPER: nu,
        Quantity.FIRST_LOWER: nu - 1.5,
        Quantity.BS: g * g / 2.0,
        Quantity.CC: 2.0 * g / math.pi,
        Quantity.M: 3.0 ** -0.25 * g,
        Quantity.C: g / math.pi - 0.5,
        Quantity.C0: g / math.pi - 0.5,
        Quantity.LADDER_NU_PLUS: float((J + 1) // 2 + 1),
        Quantity.LADDER_NU_MINUS: float(J // 2),
    }
    return table[q], {"nu": nu, "J": J, "first_lower_at_R": nu - 1.0}


def _poschl_teller(q: Quantity, g: float, alpha) -> tuple[float, dict]:
    if q is Quantity.C:
        x = _pt_c_root()
        return 2.0 / math.pi * math.exp(-x) * g - 0.5, {"x": x}
    if q in (Quantity.FIRST_UPPER, Quantity.FIRST_LOWER):
        lg = math.log(math.sin(math.pi / (2.0 * g))) / (2.0 * math.pi)
        if q is Quantity.FIRST_UPPER:
            return g / 2.0 - lg + 0.5, {}
        return g / 2.0 + lg - 1.0, {}
    table = {
        Quantity.BS: math.log(2.0) * g * g,
        Quantity.CC: g,
        Quantity.M: (math.pi**2 / 12.0) ** 0.25 * g,
        Quantity.C0: g / math.pi - 0.5,
    }
    return table[q], {}


def _exponential(q: Quantity, g: float, alpha) -> tuple[float, dict]:
    lg = math.log(4.0 * g / math.pi) / (2.0 * math.pi)
    table = {
        Quantity.FIRST_UPPER: 2.0 * g / math.pi + lg + 0.5,
        Quantity.FIRST_LOWER: 2.0 * g / math.pi - lg - 1.0,
        Quantity.BS: g * g,
        Quantity.CC: 4.0 * g / math.pi,
        Quantity.M: 2.0**0.25 * g,
        Quantity.C: 2.0 / (math.pi * math.sqrt(math.e)) * g - 0.5,
        Quantity.C0: g / math.pi - 0.5,
    }
    return table[q], {}


def _hulthen(q: Quantity, g: float, alpha) -> tuple[float, dict]:
    lt = math.log(math.tan(math.pi / (4.0 * g))) / math.pi if g > 0.5 else math.nan
    table = {
        Quantity.FIRST_UPPER: g - lt + 0.5,
        Quantity.FIRST_LOWER: g + lt - 1.5,
        Quantity.BS: math.pi**2 / 6.0 * g * g,
        Quantity.CC: 2.0 * g,
        Quantity.C: 2.0 / math.pi * math.log(2.0) * g - 0.5,
    }
    return table[q], {}


def _yukawa(q: Quantity, g: float, alpha) -> tuple[float, dict]:
    lead = math.sqrt(2.0 / math.pi) * g
    if q in (Quantity.FIRST_UPPER, Quantity.FIRST_LOWER):
        x, y, a = _yukawa_erf_roots(g)
        corr = (x * x - y * y) / (2.0 * math.pi) + math.log(x / y) / (2.0 * math.pi)
        params = {"x": x, "y": y, "alpha": a, "p": 2.0 * y * y, "q": 2.0 * x * x}
        if q is Quantity.FIRST_UPPER:
            return lead + corr + 0.5, params
        return lead - corr - 1.5, params
    if q is Quantity.C:
        x = _yukawa_c_root()
        return 2.0 / math.pi * math.sqrt(x) * math.exp(-x / 2.0) * g - 0.5, {"x": x}
    table = {Quantity.BS: g * g, Quantity.CC: 2.0 * lead}
    return table[q], {}


def _stis(q: Quantity, g: float, alpha) -> tuple[float, dict]:
    if alpha is None:
        raise ValueError("STIS needs alpha")
    L = math.log1p(alpha)
    if q is Quantity.FIRST_UPPER:
        return (g + 0.5) * L / math.pi - 0.25 / g + 0.5, {}
    if q is Quantity.FIRST_LOWER:
        nu_lo = (g - 0.5) * L / math.pi + 0.25 / g
        return nu_lo - 1.0, {"nu_lo": nu_lo}
    if q in (Quantity.LADDER_NU_PLUS, Quantity.LADDER_NU_MINUS):
        sign = 1.0 if q is Quantity.LADDER_NU_PLUS else -1.0
        h = math.pi / (2.0 * g)
        if sign < 0 and h >= 1.0:
            return math.nan, {"reason": "needs g > pi/2"}
        g_pm = sign * (math.pi / 2.0) / math.log1p(sign * h)
        x = 2.0 / math.pi * g_pm * L - g_pm / g
        # value as transcribed: one half of x plus (3 +- 3)/4
        value = 0.5 * x + (3.0 + 3.0 * sign) / 4.0
        # the integer produced by the recursion itself: x counts ladder steps
        J = math.ceil(x) - 1
        rec = (J + 1) // 2 + 1 if sign > 0 else J // 2
        return value, {"g_pm": g_pm, "x": x, "J": J, "recursion_bound": rec}
    table = {
        Quantity.BS: g * g * (L - alpha / (1.0 + alpha)),
        Quantity.CC: 2.0 / math.pi * g * L,
        Quantity.M: g * ((alpha - 2.0 * L + alpha / (1.0 + alpha)) * alpha / (1.0 + alpha)) ** 0.25,
        Quantity.C: 2.0 / math.pi * g * (1.0 - 1.0 / math.sqrt(1.0 + alpha)) - 0.5,
        Quantity.C0: g * alpha / (math.pi * (1.0 + alpha)) - 0.5,
    }
    return table[q], {}


_HANDLERS = {
    Kind.SQUARE_WELL: _square_well,
    Kind.POSCHL_TELLER: _poschl_teller,
    Kind.EXPONENTIAL: _exponential,
    Kind.HULTHEN: _hulthen,
    Kind.YUKAWA: _yukawa,
    Kind.STIS: _stis,
}

_SUPPORTED = {
    Kind.SQUARE_WELL: set(Quantity),
    Kind.POSCHL_TELLER: {Quantity.EXACT_NU, Quantity.FIRST_UPPER, Quantity.FIRST_LOWER,
                         Quantity.BS, Quantity.CC, Quantity.M, Quantity.C, Quantity.C0},
    Kind.EXPONENTIAL: {Quantity.EXACT_NU, Quantity.FIRST_UPPER, Quantity.FIRST_LOWER,
                       Quantity.BS, Quantity.CC, Quantity.M, Quantity.C, Quantity.C0},
    Kind.HULTHEN: {Quantity.EXACT_NU, Quantity.FIRST_UPPER, Quantity.FIRST_LOWER,
                   Quantity.BS, Quantity.CC, Quantity.C},
    Kind.YUKAWA: {Quantity.FIRST_UPPER, Quantity.FIRST_LOWER, Quantity.BS, Quantity.CC,
                  Quantity.C},
    Kind.STIS: set(Quantity),
}


def supported_pairs() -> list[tuple[Kind, Quantity]]:
    return [(k, q) for k in BUILTIN_KINDS for q in Quantity if q in _SUPPORTED[k]]


_SINGULAR_KINDS = (Kind.HULTHEN, Kind.YUKAWA)


def numeric_counterpart(kind, quantity) -> LimitName | None:
    """The numerically computed limit whose raw value a closed form reproduces.

    Regular potentials use the ``V(0)`` forms of the first-type limits,
    singular ones the forms built on ``p``.  Returns None for the exact
    ``nu``, which is compared with the node count instead.
    """
    kind, quantity = parse_kind(kind), Quantity(quantity)
    singular = kind in _SINGULAR_KINDS
    return {
        Quantity.EXACT_NU: None,
        Quantity.FIRST_UPPER: LimitName.FIRST_UPPER if singular else LimitName.FIRST_UPPER_REGULAR,
        Quantity.FIRST_LOWER: (LimitName.FIRST_LOWER_SINGULAR if singular
                               else LimitName.FIRST_LOWER_REGULAR_Q),
        Quantity.BS: LimitName.BS,
        Quantity.CC: LimitName.CC,
        Quantity.M: LimitName.M,
        Quantity.C: LimitName.C,
        Quantity.C0: LimitName.C0,
        Quantity.LADDER_NU_PLUS: LimitName.LADDER_UP,
        Quantity.LADDER_NU_MINUS: LimitName.LADDER_DOWN,
    }[quantity]


def analytic_limit(kind, quantity, g: float, alpha: float | None = None) -> ClosedForm:
    """Closed-form value of a limit (or of nu) for a built-in potential.

    Raises:
        UnsupportedClosedForm: no closed form exists for the pair.
    """
    kind = parse_kind(kind)
    quantity = Quantity(quantity)
    if kind not in _SUPPORTED or quantity not in _SUPPORTED[kind]:
        raise UnsupportedClosedForm((kind, quantity))
    if quantity is Quantity.EXACT_NU:
        return ClosedForm(kind, quantity, analytic_nu(kind, g, alpha), {"g": g, "alpha": alpha})
    value, params = _HANDLERS[kind](quantity, g, alpha)
    params = {"g": g, "alpha": alpha, **params}
    return ClosedForm(kind, quantity, float(value), params)


def analytic_asymptotic(kind, quantity, g: float, alpha: float | None = None) -> float:
    """Large-``g`` expansions of the first-type limits (and of the STIS nu)."""
    kind = parse_kind(kind)
    quantity = Quantity(quantity)
    up = quantity is Quantity.FIRST_UPPER
    if kind is Kind.POSCHL_TELLER and quantity in (Quantity.FIRST_UPPER, Quantity.FIRST_LOWER):
        lg = math.log(2.0 * g / math.pi) / (2.0 * math.pi)
        c = (math.pi / (2.0 * g)) ** 2 / (12.0 * math.pi)
        return g / 2.0 + lg + 0.5 + c if up else g / 2.0 - lg - 1.0 - c
    if kind is Kind.HULTHEN and quantity in (Quantity.FIRST_UPPER, Quantity.FIRST_LOWER):
        lg = math.log(math.pi / (4.0 * g)) / math.pi
        c = math.pi / (48.0 * g * g)
        return g - lg + 0.5 - c if up else g + lg - 1.5 + c
    if kind is Kind.YUKAWA and quantity in (Quantity.FIRST_UPPER, Quantity.FIRST_LOWER):
        lead = math.sqrt(2.0 / math.pi) * g
        return lead + math.log(g) / math.pi if up else lead - math.log(g) / math.pi
    if kind is Kind.STIS and quantity is Quantity.EXACT_NU:
        L = math.log1p(alpha)
        return (g - 1.0 / (8.0 * g)) * L / math.pi - 1.0 / (2.0 * math.pi * g) + 0.5
    if kind is Kind.POSCHL_TELLER and quantity is Quantity.EXACT_NU:
        return g / 2.0 + 0.25 + 1.0 / (16.0 * g)
    raise UnsupportedClosedForm((kind, quantity))
