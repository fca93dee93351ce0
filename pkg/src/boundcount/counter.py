"""Exact number of S-wave bound states from the zero-energy wave function.

Two independent routes are provided:

* :func:`count_nodes` propagates the zero-energy solution of ``u'' = V u``
  through a graded mesh of cells on which V is replaced by its cell average.
  Inside a cell the solution is an exact sinusoid, so the state is carried as
  a scale-free Pruefer angle ``theta`` with ``tan(theta) = k u / u'``
  (``k = |V|^(1/2)``) plus a log-amplitude.  Across a cell boundary ``u`` and
  ``u'`` are continuous, which fixes the new angle inside the same quadrant.
  Deep wells therefore never overflow and thousands of nodes cost only a
  fine mesh.
* :func:`phase_profile` integrates the nonlinear first-order equation for the
  same angle, ``eta' = |V|^(1/2) - V'/(4|V|) sin(2 eta)``, with an explicit
  high-order Runge-Kutta scheme on the true potential.

The node count equals ``round(eta(inf) / pi)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy import integrate as _si

from .potentials import Potential
from .quadrature import DEFAULT_RTOL, Moment, tail_radius

__all__ = [
    "NodeCountResult",
    "PhaseProfile",
    "count_nodes",
    "count_piecewise_constant",
    "phase_profile",
    "wavefunction_samples",
]

# phase advance per cell and relative potential change per cell
PHASE_STEP = 0.02
VARIATION_STEP = 0.02
MARGINAL_THRESHOLD = 1e-6


@dataclass(frozen=True)
class NodeCountResult:
    n: int
    nodes: np.ndarray
    extrema: np.ndarray
    r_max: float
    method: str = "node-count"
    marginal_flag: bool = False
    log_derivative: float = math.nan  # r_max * u'/u at the horizon
    tail_moment: float = 0.0  # int_{r_max}^inf r|V| dr
    cells: int = 0
    extras: dict = field(default_factory=dict, repr=False, compare=False)


@numba.njit(cache=True)
def _propagate(edges, k, theta0, logrho0, cap, want_profile):
    n = k.size
    m = 0
    theta = theta0
    logrho = logrho0
    nodes = np.empty(cap)
    extrema = np.empty(cap)
    nn = 0
    ne = 0
    size = n if want_profile else 1
    prof_theta = np.empty(size)
    prof_m = np.empty(size, dtype=np.int64)
    prof_logrho = np.empty(size)
    pi = math.pi
    for i in range(n):
        if i > 0 and k[i] != k[i - 1]:
            s = math.sin(theta)
            c = math.cos(theta)
            # u, u' continuous: (u', k u) rescales its second component only
            new = math.atan2(k[i] * s, k[i - 1] * c)
            logrho += math.log(math.hypot(c, (k[i] / k[i - 1]) * s))
            theta = new
        h = edges[i + 1] - edges[i]
        d = k[i] * h
        t_end = theta + d
        j_lo = math.floor(theta / pi) + 1
        j_hi = math.floor(t_end / pi)
        for j in range(j_lo, j_hi + 1):
            if nn < cap:
                nodes[nn] = edges[i] + (j * pi - theta) / k[i]
                nn += 1
        j_lo = math.floor(theta / pi - 0.5) + 1
        j_hi = math.floor(t_end / pi - 0.5)
        for j in range(j_lo, j_hi + 1):
            if ne < cap:
                extrema[ne] = edges[i] + ((j + 0.5) * pi - theta) / k[i]
                ne += 1
        w = math.floor((t_end + 0.5 * pi) / pi)
        m += w
        theta = t_end - w * pi
        if want_profile:
            prof_theta[i] = theta
            prof_m[i] = m
            prof_logrho[i] = logrho
    return m, theta, logrho, nodes[:nn], extrema[:ne], prof_theta, prof_m, prof_logrho


def _origin_start(pot: Potential) -> float:
    """First mesh radius for a potential that diverges at the origin."""
    r0 = 1e-8 * pot.scale
    while r0 * r0 * abs(pot(r0)) > 1e-10 and r0 > 1e-200:
        r0 /= 10.0
    return r0


def _picard_start(pot: Potential, r0: float) -> tuple[float, float]:
    """(u, u') at r0 from one Picard iterate of u(r) = r + int_0^r (r-s) V(s) u(s) ds."""
    f = lambda s: s * pot(s)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _si.IntegrationWarning)
        du = _si.quad(f, 0.0, r0, epsrel=1e-12, epsabs=0.0)[0]
        u = r0 + _si.quad(lambda s: (r0 - s) * f(s), 0.0, r0, epsrel=1e-12, epsabs=0.0)[0]
    return u, 1.0 + du


def _density(pot: Potential, r: np.ndarray, phase_step: float, var_step: float,
             seg_len: float) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        v = np.abs(pot._value(r))
        dv = np.abs(pot._deriv(r))
        ratio = np.where(v > 0, dv / v, np.inf)
    # caps the log-divergent density where V -> 0 at a finite radius
    with np.errstate(divide="ignore"):
        cap = np.where(r > 0, 1e3 / r, np.inf)
    ratio = np.where(np.isfinite(ratio), ratio, 0.0 * r + 1e3 / pot.scale)
    ratio = np.minimum(ratio, cap)
    return np.sqrt(v) / phase_step + ratio / var_step + 8.0 / seg_len


def build_mesh(pot: Potential, r_start: float, r_end: float,
               phase_step: float = PHASE_STEP, var_step: float = VARIATION_STEP) -> np.ndarray:
    """Cell edges on [r_start, r_end], graded by local wavenumber and potential variation.

    Breakpoints of the potential are always cell edges.
    """
    cuts = [r_start] + [b for b in pot.breakpoints if r_start < b < r_end] + [r_end]
    pieces = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        seg = hi - lo
        lo_eff = lo if lo > 0 else 1e-12 * seg
        pre = np.union1d(np.linspace(lo, hi, 2001), np.geomspace(lo_eff, hi, 2001))
        pre = pre[(pre >= lo) & (pre <= hi)]
        rho = _density(pot, pre, phase_step, var_step, seg)
        cum = np.concatenate(([0.0], np.cumsum(0.5 * (rho[1:] + rho[:-1]) * np.diff(pre))))
        n = max(int(math.ceil(cum[-1])), 8)
        edges = np.interp(np.linspace(0.0, cum[-1], n + 1), cum, pre)
        edges[0], edges[-1] = lo, hi
        pieces.append(edges if not pieces else edges[1:])
    return np.concatenate(pieces)


def _cell_wavenumbers(pot: Potential, edges: np.ndarray) -> np.ndarray:
    mids = 0.5 * (edges[1:] + edges[:-1])
    ka = np.sqrt(np.abs(pot._value(edges[:-1])))
    kb = np.sqrt(np.abs(pot._value(edges[1:])))
    km = np.sqrt(np.abs(pot._value(mids)))
    k = (ka + 4.0 * km + kb) / 6.0
    floor = 1e-150 / pot.scale
    return np.maximum(k, floor)


def _run(pot: Potential, rel_tol: float, phase_step: float, var_step: float,
         want_profile: bool):
    r_end = tail_radius(pot, rel_tol) if pot.support_end is None else pot.support_end
    if pot.origin_singular:
        r0 = _origin_start(pot)
        u0, du0 = _picard_start(pot, r0)
    else:
        r0, u0, du0 = 0.0, 0.0, 1.0
    edges = build_mesh(pot, r0, r_end, phase_step, var_step)
    k = _cell_wavenumbers(pot, edges)
    theta0 = math.atan2(k[0] * u0, du0)
    logrho0 = math.log(math.hypot(du0, k[0] * u0))
    cap = int(np.dot(k, np.diff(edges)) / math.pi) + 4
    out = _propagate(edges, k, theta0, logrho0, cap, want_profile)
    return edges, k, out


def count_nodes(pot: Potential, rel_tol: float = DEFAULT_RTOL,
                phase_step: float = PHASE_STEP, var_step: float = VARIATION_STEP) -> NodeCountResult:
    """Count the zeros of the zero-energy S-wave solution with u(0) = 0.

    The horizon is :func:`~boundcount.quadrature.tail_radius` (or the support
    end).  Beyond it V is treated as zero, so the solution is a straight line
    which crosses the axis once more exactly when u and u' have opposite signs.
    """
    _, _, coarse = _run(pot, rel_tol, phase_step, var_step, False)
    edges, k, (m, theta, logrho, nodes, extrema, *_rest) = _run(
        pot, rel_tol, 0.5 * phase_step, 0.5 * var_step, False)
    # cell-averaging error is O(h^2) in the total phase; one Richardson step
    # removes it, which matters for couplings just next to a threshold
    phi = (4.0 * (m * math.pi + theta) - (coarse[0] * math.pi + coarse[1])) / 3.0
    m = int(math.floor((phi + 0.5 * math.pi) / math.pi))
    theta = phi - m * math.pi
    r_max = float(edges[-1])
    k_last = float(k[-1])
    nodes = np.asarray(nodes, dtype=float)
    if theta < 0.0 and nodes.size < m:
        # the straight-line continuation still has a zero ahead
        nodes = np.append(nodes, r_max - math.tan(theta) / k_last)
    s, c = math.sin(theta), math.cos(theta)
    log_derivative = r_max * k_last * c / s if s != 0.0 else math.inf
    marginal = abs(log_derivative) < MARGINAL_THRESHOLD
    tail = 0.0
    if pot.support_end is None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", _si.IntegrationWarning)
            tail = _si.quad(lambda r: r * abs(pot(r)), r_max, math.inf)[0]
    return NodeCountResult(
        n=int(m),
        nodes=nodes,
        extrema=np.asarray(extrema, dtype=float),
        r_max=r_max,
        method="node-count",
        marginal_flag=bool(marginal),
        log_derivative=float(log_derivative),
        tail_moment=float(tail),
        cells=int(k.size),
    )


def count_piecewise_constant(edges, values) -> int:
    """Exact bound-state count of a piecewise-constant well.

    ``values[i]`` (nonpositive) holds on ``[edges[i], edges[i+1])`` with
    ``edges[0] == 0``; the potential vanishes beyond ``edges[-1]``.  Each cell
    is propagated analytically, so the result is exact up to rounding.  A
    zero-energy resonance exactly at threshold is counted as bound.
    """
    edges = np.asarray(edges, dtype=float)
    k = np.sqrt(np.abs(np.asarray(values, dtype=float)))
    scale = edges[-1] - edges[0]
    k = np.maximum(k, 1e-150 / scale)
    cap = int(np.dot(k, np.diff(edges)) / math.pi) + 4
    m, theta, *_ = _propagate(edges, k, 0.0, 0.0, cap, False)
    if abs(theta + 0.5 * math.pi) < 1e-12:
        return int(m) + 1
    return int(m)


def wavefunction_samples(pot: Potential, rel_tol: float = DEFAULT_RTOL,
                         phase_step: float = PHASE_STEP) -> dict[str, np.ndarray]:
    """Mesh samples of r, u (scaled), u' (scaled) and the continuous phase eta.

    Amplitudes are normalised so that ``max |u'| = 1`` on the mesh.
    """
    edges, k, (m, theta, logrho, _n, _e, p_theta, p_m, p_logrho) = _run(
        pot, rel_tol, phase_step, VARIATION_STEP, True)
    r = edges[1:]
    eta = p_m * math.pi + p_theta
    sign = np.where(p_m % 2 == 0, 1.0, -1.0)
    shift = p_logrho.max()
    amp = np.exp(p_logrho - shift)
    return {
        "r": r,
        "u": sign * amp * np.sin(p_theta) / k,
        "du": sign * amp * np.cos(p_theta),
        "eta": eta,
    }


@dataclass(frozen=True)
class PhaseProfile:
    r: np.ndarray
    eta: np.ndarray
    n: int
    r_max: float
    fallback: bool = False
    message: str = ""


def phase_profile(pot: Potential, rel_tol: float = DEFAULT_RTOL,
                  ode_rtol: float = 1e-10) -> PhaseProfile:
    """Integrate the phase equation with DOP853 and read N off ``eta(r_max)``.

    At a jump of V the phase is continued by matching ``tan(eta)/|V|^(1/2)``
    (i.e. u/u') inside the same quadrant.  If |V| collapses towards zero inside
    the support the equation turns stiff; the node-counting route is then used
    and ``fallback`` is set.
    """
    r_end = tail_radius(pot, rel_tol) if pot.support_end is None else pot.support_end
    if pot.origin_singular:
        r0 = _origin_start(pot)
        u0, du0 = _picard_start(pot, r0)
        eta0 = math.atan2(math.sqrt(abs(pot(r0))) * u0, du0)
    else:
        r0, eta0 = 0.0, 0.0

    vmax = float(np.max(np.abs(pot._value(np.geomspace(max(r0, 1e-9 * pot.scale), r_end, 512)))))

    def rhs(r, y):
        v = abs(float(pot._value(np.asarray(r))))
        if v == 0.0:
            return [0.0]
        dv = float(pot._deriv(np.asarray(r)))
        return [math.sqrt(v) - dv / (4.0 * v) * math.sin(2.0 * y[0])]

    cuts = [r0] + [b for b in pot.breakpoints if r0 < b < r_end] + [r_end]
    rs, etas = [np.array([r0])], [np.array([eta0])]
    eta = eta0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        v_hi = abs(float(pot._value(np.asarray(hi))))
        if v_hi < 1e-12 * vmax and pot.support_end is not None and hi == r_end:
            res = count_nodes(pot, rel_tol)
            return PhaseProfile(np.concatenate(rs), np.concatenate(etas), res.n, res.r_max,
                                fallback=True, message="|V| vanishes inside the support")
        k_lo = math.sqrt(abs(float(pot._value(np.asarray(lo)))))
        max_step = 0.5 / max(k_lo, 1.0 / pot.scale)
        sol = _si.solve_ivp(rhs, (lo, hi), [eta], method="DOP853", rtol=ode_rtol,
                            atol=ode_rtol, max_step=max(max_step, (hi - lo) * 1e-4),
                            dense_output=False)
        if not sol.success:
            res = count_nodes(pot, rel_tol)
            return PhaseProfile(np.concatenate(rs), np.concatenate(etas), res.n, res.r_max,
                                fallback=True, message=sol.message)
        rs.append(sol.t[1:])
        etas.append(sol.y[0, 1:])
        eta = float(sol.y[0, -1])
    r_all = np.concatenate(rs)
    eta_all = np.concatenate(etas)
    # beyond the horizon (or a jump to zero) tan(eta) -> 0 within the current quadrant
    n = int(math.floor(eta / math.pi + 0.5))
    return PhaseProfile(r_all, eta_all, n, r_end)
