"""Auxiliary radii entering the bound formulas.

Each radius is the root of a scalar equation built from the potential and
its moments:

=========  ==============================================================
``p``      ``int_0^p |V|^(1/2) dr = pi/2``
``q``      ``int_q^inf |V|^(1/2) dr = pi/2``
``rho``    ``rho V(rho) = int_rho^inf V dr``
``s``      ``V'(s) = 4 |V(s)|^(3/2)``
``t``      ``t = int_0^t r^2 |V| dr`` (smallest positive root)
``a``      stationary points of the two one-parameter sufficient conditions
=========  ==============================================================

Roots are bracketed on a log-spaced scan (256 points, doubled up to 4096 when
no sign change shows up) and polished with Brent's method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import NoBoundStatesError, RootNotFoundError
from .potentials import Potential
from .quadrature import DEFAULT_RTOL, Moment, integrate, integrate_function, tail_radius

__all__ = [
    "AuxiliaryRadii",
    "HALF_PI",
    "THRESHOLD_RTOL",
    "auxiliary_radii",
    "bound_state_possible",
    "saturated_residual",
    "phase_integral",
    "scan_grid",
    "solve_a_saturated",
    "solve_a_moment_split",
    "solve_p",
    "solve_q",
    "solve_rho",
    "solve_s",
    "solve_s_roots",
    "solve_t",
]

HALF_PI = 0.5 * math.pi
# a phase integral this close to pi/2 is treated as exactly pi/2 (still no bound state)
THRESHOLD_RTOL = 1e-12
SCAN_POINTS = 256
MAX_SCAN_POINTS = 4096


@dataclass(frozen=True)
class AuxiliaryRadii:
    """All auxiliary radii of one potential; ``None`` marks an absent root."""

    p: float | None
    q: float | None
    rho: float | None
    s: float | None = None
    t: float | None = None
    a_moment_split: float | None = None
    a_saturated: float | None = None
    s_roots: tuple[float, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "p": self.p, "q": self.q, "rho": self.rho, "s": self.s, "t": self.t,
            "a_moment_split": self.a_moment_split, "a_saturated": self.a_saturated,
            "s_roots": list(self.s_roots),
        }


# -- helpers ------------------------------------------------------------------

def _outer_radius(pot: Potential, rel_tol: float) -> float:
    end = pot.support_end
    return end if end is not None else tail_radius(pot, rel_tol)


def scan_grid(pot: Potential, n: int = SCAN_POINTS, rel_tol: float = DEFAULT_RTOL,
              lo: float | None = None) -> np.ndarray:
    """Log-spaced radii on ``[1e-6 R, r_out]``, excluding a jump radius itself."""
    hi = _outer_radius(pot, rel_tol)
    if pot.has_jump:
        hi = hi * (1.0 - 1e-12)
    lo = 1e-6 * pot.scale if lo is None else lo
    lo = min(lo, 1e-3 * hi)
    return np.geomspace(lo, hi, n)


def _pieces(pot: Potential, moment: Moment, grid: np.ndarray, rel_tol: float) -> np.ndarray:
    return np.array([integrate(pot, moment, a, b, rel_tol)
                     for a, b in zip(grid[:-1], grid[1:])])


def _head(pot, moment, grid, rel_tol) -> np.ndarray:
    """``int_0^{grid[i]}`` of the moment for every grid point."""
    first = integrate(pot, moment, 0.0, float(grid[0]), rel_tol)
    return first + np.concatenate(([0.0], np.cumsum(_pieces(pot, moment, grid, rel_tol))))


def _tail(pot, moment, grid, rel_tol) -> np.ndarray:
    """``int_{grid[i]}^inf`` of the moment for every grid point."""
    last = integrate(pot, moment, float(grid[-1]), math.inf, rel_tol)
    pieces = _pieces(pot, moment, grid, rel_tol)
    return last + np.concatenate((np.cumsum(pieces[::-1])[::-1], [0.0]))


def _polish(f, a: float, b: float, tol: float) -> float:
    span = abs(b - a)
    return brentq(f, a, b, xtol=max(tol * 1e-3 * span, 1e-300), rtol=1e-14, maxiter=400)


def phase_integral(pot: Potential, rel_tol: float = DEFAULT_RTOL) -> float:
    """``int_0^inf |V|^(1/2) dr``."""
    return integrate(pot, Moment.SqrtAbsV, rel_tol=rel_tol)


def bound_state_possible(phi: float) -> bool:
    """False when ``phi = int |V|^(1/2) <= pi/2``, which rules out any bound state.

    At ``phi = pi/2`` itself p and q degenerate (p -> end, q -> 0), so the
    equality case is excluded as well, up to rounding.
    """
    return phi > HALF_PI * (1.0 + THRESHOLD_RTOL)


def _require_bound_state(pot: Potential, rel_tol: float) -> float:
    total = phase_integral(pot, rel_tol)
    if not bound_state_possible(total):
        raise NoBoundStatesError(
            f"int |V|^1/2 = {total:.6g} <= pi/2 for {pot.describe()}: no bound state, "
            "p and q undefined"
        )
    return total


# -- p, q ---------------------------------------------------------------------

def solve_p(pot: Potential, tol: float = 1e-10, rel_tol: float = DEFAULT_RTOL) -> float:
    """Inner radius where the accumulated WKB phase reaches pi/2.

    Raises:
        NoBoundStatesError: the total phase integral is below pi/2.
    """
    _require_bound_state(pot, rel_tol)

    def f(x: float) -> float:
        return (integrate(pot, Moment.SqrtAbsV, 0.0, x, rel_tol) if x > 0 else 0.0) - HALF_PI

    hi = _outer_radius(pot, rel_tol)
    while f(hi) < 0.0:
        # only when almost all of the phase sits in a slowly decaying tail
        if pot.support_end is not None:
            return hi
        hi *= 2.0
    grid = scan_grid(pot, rel_tol=rel_tol)
    grid = grid[grid < hi]
    head = _head(pot, Moment.SqrtAbsV, grid, rel_tol) - HALF_PI
    idx = int(np.searchsorted(head >= 0.0, True))
    a = 0.0 if idx == 0 else float(grid[idx - 1])
    b = float(grid[idx]) if idx < grid.size else hi
    return _polish(f, a, b, tol)


def solve_q(pot: Potential, tol: float = 1e-10, rel_tol: float = DEFAULT_RTOL) -> float:
    """Outer radius beyond which the remaining WKB phase equals pi/2.

    Raises:
        NoBoundStatesError: the total phase integral is below pi/2.
    """
    total = _require_bound_state(pot, rel_tol)
    if total - HALF_PI < 1e-14 * total:
        return 0.0

    def f(x: float) -> float:
        return integrate(pot, Moment.SqrtAbsV, x, math.inf, rel_tol) - HALF_PI

    hi = _outer_radius(pot, rel_tol)
    while f(hi) > 0.0:
        hi *= 2.0
    grid = scan_grid(pot, rel_tol=rel_tol)
    grid = grid[grid < hi]
    tail = _tail(pot, Moment.SqrtAbsV, grid, rel_tol) - HALF_PI
    below = np.nonzero(tail <= 0.0)[0]
    idx = int(below[0]) if below.size else grid.size
    a = 0.0 if idx == 0 else float(grid[idx - 1])
    b = float(grid[idx]) if idx < grid.size else hi
    f0 = (lambda x: total - HALF_PI - (integrate(pot, Moment.SqrtAbsV, 0.0, x, rel_tol)
                                       if x > 0 else 0.0))
    # the head integral is the cheaper and better conditioned form near the origin
    return _polish(f0 if a == 0.0 else f, a, b, tol)


# -- rho ----------------------------------------------------------------------

def _rho_residual(pot: Potential, x: float, rel_tol: float) -> float:
    # rho V(rho) - int_rho^inf V  ==  int_rho^inf |V| - rho |V(rho)|
    return integrate(pot, Moment.AbsV, x, math.inf, rel_tol) - x * abs(pot(x))


def solve_rho(pot: Potential, tol: float = 1e-10, rel_tol: float = DEFAULT_RTOL) -> float:
    """Radius solving ``rho V(rho) = int_rho^inf V``.

    Among several roots the one maximizing ``rho |V(rho)|^(1/2)`` is returned.

    Raises:
        RootNotFoundError: no sign change on the scan, even at 4096 points.
    """
    n = SCAN_POINTS
    while n <= MAX_SCAN_POINTS:
        grid = scan_grid(pot, n, rel_tol)
        tail = _tail(pot, Moment.AbsV, grid, rel_tol)
        res = tail - grid * np.abs(pot(grid))
        flips = np.nonzero((res[:-1] > 0.0) & (res[1:] <= 0.0))[0]
        if flips.size:
            roots = []
            for i in flips:
                if res[i + 1] == 0.0:
                    roots.append(float(grid[i + 1]))
                    continue
                roots.append(_polish(lambda x: _rho_residual(pot, x, rel_tol),
                                     float(grid[i]), float(grid[i + 1]), tol))
            return max(roots, key=lambda x: x * math.sqrt(abs(pot(x))))
        n *= 2
    raise RootNotFoundError(f"no root of the rho equation for {pot.describe()}")


# -- s ------------------------------------------------------------------------

def _s_residual(pot: Potential, x):
    v = np.abs(pot._value(np.asarray(x, dtype=float)))
    return pot._deriv(np.asarray(x, dtype=float)) - 4.0 * v**1.5


def solve_s_roots(pot: Potential, tol: float = 1e-10, rel_tol: float = DEFAULT_RTOL
                  ) -> tuple[float, ...]:
    """All roots of ``V'(s) = 4|V(s)|^(3/2)`` detected on the scan, increasing."""
    n = SCAN_POINTS
    while True:
        grid = scan_grid(pot, n, rel_tol)
        grid = grid[np.abs(pot._value(grid)) > 0.0]
        with np.errstate(over="ignore", invalid="ignore"):
            h = _s_residual(pot, grid)
        ok = np.isfinite(h)
        grid, h = grid[ok], h[ok]
        sign = np.sign(h)
        flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        exact = [float(x) for x, v in zip(grid, h) if v == 0.0]
        if flips.size or exact or n >= MAX_SCAN_POINTS:
            break
        n *= 2
    scale = max(abs(h).max(), 1e-300) if h.size else 1.0
    roots = exact + [
        _polish(lambda x: float(_s_residual(pot, x)) / scale, float(grid[i]), float(grid[i + 1]), tol)
        for i in flips
    ]
    return tuple(sorted(roots))


def solve_s(pot: Potential, tol: float = 1e-10, rel_tol: float = DEFAULT_RTOL) -> float | None:
    """Largest root of ``V'(s) = 4|V(s)|^(3/2)``, or ``None`` when there is none."""
    roots = solve_s_roots(pot, tol, rel_tol)
    return roots[-1] if roots else None


# -- t ------------------------------------------------------------------------

def solve_t(pot: Potential, tol: float = 1e-10, rel_tol: float = DEFAULT_RTOL) -> float | None:
    """Smallest positive root of ``t = int_0^t r^2 |V| dr``, or ``None``.

    ``h(t) = t - int_0^t r^2 |V|`` is positive just above zero for any
    admissible potential; the root is its first sign change.
    """
    def h(x: float) -> float:
        return x - integrate(pot, Moment.R2_AbsV, 0.0, x, rel_tol)

    lo = 1e-6 * pot.scale
    while h(lo) <= 0.0 and lo > 1e-300:
        lo *= 1e-3
    n = SCAN_POINTS
    while n <= MAX_SCAN_POINTS:
        grid = scan_grid(pot, n, rel_tol, lo=lo)
        head = _head(pot, Moment.R2_AbsV, grid, rel_tol)
        res = grid - head
        neg = np.nonzero(res <= 0.0)[0]
        if neg.size:
            i = int(neg[0])
            if i == 0:
                return None if h(lo) > 0 else lo
            return _polish(h, float(grid[i - 1]), float(grid[i]), tol)
        if pot.support_end is not None:
            # beyond the support the integral is constant and h only grows
            return None
        if res[-1] > 0.0 and res[-1] > res[-2]:
            return None
        n *= 2
    return None


# -- optimal a of the one-state sufficient conditions -----------------------------

def _moment_split_residual(pot: Potential, a: float, rel_tol: float) -> float:
    inner = integrate(pot, Moment.R2_AbsV, 0.0, a, rel_tol)
    outer = integrate(pot, Moment.AbsV, a, math.inf, rel_tol)
    return inner - a * a * outer


def solve_a_moment_split(pot: Potential, tol: float = 1e-10, rel_tol: float = DEFAULT_RTOL) -> float:
    """Root of ``int_0^a r^2|V| = a^2 int_a^inf |V|``.

    Raises:
        RootNotFoundError: no bracket on the scan.
    """
    n = SCAN_POINTS
    while n <= MAX_SCAN_POINTS:
        grid = scan_grid(pot, n, rel_tol)
        inner = _head(pot, Moment.R2_AbsV, grid, rel_tol)
        outer = _tail(pot, Moment.AbsV, grid, rel_tol)
        res = inner - grid**2 * outer
        flips = np.nonzero((res[:-1] < 0.0) & (res[1:] >= 0.0))[0]
        if flips.size:
            i = int(flips[0])
            return _polish(lambda a: _moment_split_residual(pot, a, rel_tol),
                           float(grid[i]), float(grid[i + 1]), tol)
        if pot.support_end is not None and res[-1] < 0.0:
            break
        n *= 2
    if pot.support_end is not None:
        # the outer integral vanishes at the support end, so a root sits below it
        end = pot.support_end
        a0 = float(scan_grid(pot, SCAN_POINTS, rel_tol)[0])
        return _polish(lambda a: _moment_split_residual(pot, a, rel_tol), a0, end, tol)
    raise RootNotFoundError(f"no root of the moment-split a-equation for {pot.describe()}")


def _saturated_integrand(pot: Potential, a: float):
    a2 = a * a

    def f(r: float) -> float:
        v = abs(float(pot._value(np.asarray(r))))
        w = a2 * v
        return v * (1.0 - w) / (1.0 + w) ** 2

    return f


def saturated_residual(pot: Potential, a: float, rel_tol: float = DEFAULT_RTOL) -> float:
    """``int |V| (1 - a^2|V|) / (1 + a^2|V|)^2 dr``; decreasing through zero at the optimum."""
    return integrate_function(pot, _saturated_integrand(pot, a), rel_tol)


def solve_a_saturated(pot: Potential, tol: float = 1e-10, rel_tol: float = DEFAULT_RTOL) -> float:
    """Root in ``a`` of ``int |V| (1 - a^2|V|)(1 + a^2|V|)^-2 dr = 0``.

    The residual is positive for small ``a`` and negative for large ``a``.

    Raises:
        RootNotFoundError: no bracket between ``1e-6`` and ``1e6`` times the
            natural length ``|V(r_ref)|^(-1/2)``.
    """
    ref = float(scan_grid(pot, 3, rel_tol)[1])
    a0 = 1.0 / math.sqrt(abs(pot(ref)))
    grid = np.geomspace(1e-6 * a0, 1e6 * a0, 49)
    res = np.array([saturated_residual(pot, a, rel_tol) for a in grid])
    flips = np.nonzero((res[:-1] > 0.0) & (res[1:] <= 0.0))[0]
    if not flips.size:
        raise RootNotFoundError(f"no root of the saturated a-equation for {pot.describe()}")
    i = int(flips[0])
    return _polish(lambda a: saturated_residual(pot, a, rel_tol), float(grid[i]),
                   float(grid[i + 1]), tol)


# -- everything at once -----------------------------------------------------------

def _maybe(fn, *args):
    try:
        return fn(*args)
    except (NoBoundStatesError, RootNotFoundError):
        return None


def auxiliary_radii(pot: Potential, tol: float = 1e-10,
                    rel_tol: float = DEFAULT_RTOL) -> AuxiliaryRadii:
    """Solve every defining equation; radii without a root are ``None``.

    When the phase integral is below pi/2 (no bound state possible) all radii
    are reported absent.
    """
    if not bound_state_possible(phase_integral(pot, rel_tol)):
        return AuxiliaryRadii(p=None, q=None, rho=None)
    roots = solve_s_roots(pot, tol, rel_tol)
    return AuxiliaryRadii(
        p=solve_p(pot, tol, rel_tol),
        q=solve_q(pot, tol, rel_tol),
        rho=_maybe(solve_rho, pot, tol, rel_tol),
        s=roots[-1] if roots else None,
        t=solve_t(pot, tol, rel_tol),
        a_moment_split=_maybe(solve_a_moment_split, pot, tol, rel_tol),
        a_saturated=_maybe(solve_a_saturated, pot, tol, rel_tol),
        s_roots=roots,
    )
