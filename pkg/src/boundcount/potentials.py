"""Attractive monotone central potentials.

Units are fixed to hbar^2/(2m) = 1, so every potential is an inverse squared
length and couplings are dimensionless.  All built-in shapes carry the
coupling as ``V(r) = g**2 * v(r)``.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import PotentialError, SingularityError

__all__ = [
    "Kind",
    "Potential",
    "KgPotential",
    "Diagnostics",
    "Violation",
    "make_builtin",
    "from_table",
    "kg_reduce",
    "validate",
    "parse_kind",
]


class Kind(str, enum.Enum):
    SQUARE_WELL = "squarewell"
    POSCHL_TELLER = "poschlteller"
    EXPONENTIAL = "exponential"
    HULTHEN = "hulthen"
    YUKAWA = "yukawa"
    STIS = "stis"
    TABULATED = "tabulated"
    KLEIN_GORDON = "kleingordon"


BUILTIN_KINDS = (
    Kind.SQUARE_WELL,
    Kind.POSCHL_TELLER,
    Kind.EXPONENTIAL,
    Kind.HULTHEN,
    Kind.YUKAWA,
    Kind.STIS,
)

_ALIASES = {
    "sw": Kind.SQUARE_WELL,
    "square": Kind.SQUARE_WELL,
    "square-well": Kind.SQUARE_WELL,
    "pt": Kind.POSCHL_TELLER,
    "poschl-teller": Kind.POSCHL_TELLER,
    "e": Kind.EXPONENTIAL,
    "exp": Kind.EXPONENTIAL,
    "h": Kind.HULTHEN,
    "y": Kind.YUKAWA,
    "table": Kind.TABULATED,
    "kg": Kind.KLEIN_GORDON,
}


def parse_kind(name: str | Kind) -> Kind:
    """Resolve a kind from its canonical name or a short alias (``"pt"``, ``"sw"``...)."""
    if isinstance(name, Kind):
        return name
    key = name.strip().lower().replace("_", "")
    if key in _ALIASES:
        return _ALIASES[key]
    try:
        return Kind(key)
    except ValueError:
        raise PotentialError(f"unknown potential kind {name!r}") from None


@dataclass(frozen=True, eq=False)
class Potential:
    """An attractive, nondecreasing central potential.

    Instances are immutable; build them with :func:`make_builtin`,
    :func:`from_table` or :func:`kg_reduce` rather than directly.  Equality and
    hashing are by identity, which lets downstream caches key on the object.
    """

    kind: Kind
    g: float = 1.0
    R: float = 1.0
    alpha: float | None = None
    samples: tuple[tuple[float, float], ...] = ()
    base: "Potential | None" = None
    mass: float | None = None
    _interp: PchipInterpolator | None = field(default=None, repr=False)
    _jump_at_end: bool = field(default=False, repr=False)

    # -- metadata -----------------------------------------------------------

    @property
    def origin_singular(self) -> bool:
        if self.kind in (Kind.HULTHEN, Kind.YUKAWA):
            return True
        if self.kind is Kind.KLEIN_GORDON:
            return self.base.origin_singular
        return False

    @property
    def support_end(self) -> float | None:
        """Smallest radius beyond which V vanishes identically, if finite."""
        if self.kind is Kind.SQUARE_WELL:
            return self.R
        if self.kind is Kind.STIS:
            return self.alpha * self.R
        if self.kind is Kind.TABULATED:
            return self.samples[-1][0]
        if self.kind is Kind.KLEIN_GORDON:
            return self.base.support_end
        return None

    @property
    def has_jump(self) -> bool:
        """True when V jumps to zero at ``support_end``."""
        if self.kind in (Kind.SQUARE_WELL, Kind.STIS):
            return True
        if self.kind is Kind.TABULATED:
            return self._jump_at_end
        if self.kind is Kind.KLEIN_GORDON:
            return self.base.has_jump
        return False

    @property
    def scale(self) -> float:
        """A characteristic length used to size grids and scans."""
        if self.kind is Kind.TABULATED:
            return self.samples[-1][0]
        if self.kind is Kind.KLEIN_GORDON:
            return self.base.scale
        return self.R

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Radii where the potential or its derivative may be non-smooth."""
        if self.kind is Kind.TABULATED:
            return tuple(sorted({r for r, _ in self.samples if r > 0}))
        if self.kind is Kind.KLEIN_GORDON:
            return self.base.breakpoints
        end = self.support_end
        return (end,) if end is not None else ()

    def describe(self) -> str:
        if self.kind is Kind.TABULATED:
            return f"tabulated({len(self.samples)} samples)"
        if self.kind is Kind.KLEIN_GORDON:
            return f"kleingordon(m={self.mass:g}, W={self.base.describe()})"
        text = f"{self.kind.value}(g={self.g:g}, R={self.R:g}"
        if self.alpha is not None:
            text += f", alpha={self.alpha:g}"
        return text + ")"

    def with_coupling(self, g: float) -> "Potential":
        """Same shape with a different coupling constant.

        For a Klein-Gordon reduction the coupling of the 4-vector potential is
        replaced and the reduction is redone.
        """
        if self.kind is Kind.KLEIN_GORDON:
            return kg_reduce(KgPotential(self.base.with_coupling(g), self.mass))
        if self.kind is Kind.TABULATED:
            raise PotentialError("tabulated potentials carry no coupling constant")
        return make_builtin(self.kind, g, self.R, self.alpha)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, r):
        """Evaluate V(r); accepts scalars or arrays, returns the same shape."""
        r_arr = self._check_radius(r)
        out = self._value(r_arr)
        return out if r_arr.ndim else float(out)

    value = __call__

    def deriv(self, r):
        """Evaluate dV/dr.  Undefined exactly at a jump discontinuity."""
        r_arr = self._check_radius(r)
        if self.has_jump and np.any(r_arr == self.support_end):
            raise PotentialError(
                f"derivative undefined at discontinuity r={self.support_end:g}"
            )
        out = self._deriv(r_arr)
        return out if r_arr.ndim else float(out)

    def _check_radius(self, r) -> np.ndarray:
        r_arr = np.asarray(r, dtype=float)
        if np.any(r_arr < 0) or np.any(np.isnan(r_arr)):
            raise PotentialError("radius must be nonnegative")
        if self.origin_singular and np.any(r_arr == 0):
            raise SingularityError(f"{self.describe()} is singular at origin")
        return r_arr

    def _value(self, r: np.ndarray) -> np.ndarray:
        g2 = self.g * self.g
        R = self.R
        x = r / R
        k = self.kind
        with np.errstate(over="ignore", under="ignore"):
            if k is Kind.SQUARE_WELL:
                return np.where(r <= R, -g2 / R**2, 0.0)
            if k is Kind.POSCHL_TELLER:
                # sech written via exp(-x) to stay finite for large x
                e = np.exp(-x)
                return -g2 / R**2 * (2.0 * e / (1.0 + e * e)) ** 2
            if k is Kind.EXPONENTIAL:
                return -g2 / R**2 * np.exp(-x)
            if k is Kind.HULTHEN:
                return -g2 / R**2 * np.exp(-x) / -np.expm1(-x)
            if k is Kind.YUKAWA:
                return -g2 * np.exp(-x) / (r * R)
            if k is Kind.STIS:
                return np.where(r <= self.alpha * R, -g2 / (R + r) ** 2, 0.0)
            if k is Kind.TABULATED:
                return self._table_value(r)
            if k is Kind.KLEIN_GORDON:
                w = self.base._value(r)
                return 2.0 * self.mass * w - w * w
        raise AssertionError(k)

    def _deriv(self, r: np.ndarray) -> np.ndarray:
        g2 = self.g * self.g
        R = self.R
        x = r / R
        k = self.kind
        with np.errstate(over="ignore", under="ignore"):
            if k is Kind.SQUARE_WELL:
                return np.zeros_like(r)
            if k is Kind.POSCHL_TELLER:
                e = np.exp(-x)
                sech = 2.0 * e / (1.0 + e * e)
                tanh = (1.0 - e * e) / (1.0 + e * e)
                return 2.0 * g2 / R**3 * sech**2 * tanh
            if k is Kind.EXPONENTIAL:
                return g2 / R**3 * np.exp(-x)
            if k is Kind.HULTHEN:
                e = np.exp(-x)
                return g2 / R**3 * e / np.expm1(-x) ** 2
            if k is Kind.YUKAWA:
                return g2 * np.exp(-x) * (1.0 / (r * r * R) + 1.0 / (r * R * R))
            if k is Kind.STIS:
                return np.where(r <= self.alpha * R, 2.0 * g2 / (R + r) ** 3, 0.0)
            if k is Kind.TABULATED:
                return self._table_deriv(r)
            if k is Kind.KLEIN_GORDON:
                w = self.base._value(r)
                return 2.0 * self.base._deriv(r) * (self.mass - w)
        raise AssertionError(k)

    def _table_value(self, r: np.ndarray) -> np.ndarray:
        r0, v0 = self.samples[0]
        r_end = self.samples[-1][0]
        inside = np.clip(r, r0, r_end)
        out = np.where(r > r_end, 0.0, self._interp(inside))
        return np.where(r < r0, v0, out)

    def _table_deriv(self, r: np.ndarray) -> np.ndarray:
        r0 = self.samples[0][0]
        r_end = self.samples[-1][0]
        d = self._interp.derivative()(np.clip(r, r0, r_end))
        return np.where((r < r0) | (r > r_end), 0.0, d)


def make_builtin(kind, g: float, R: float = 1.0, alpha: float | None = None) -> Potential:
    """Build one of the six analytic test potentials.

    Args:
        kind: a :class:`Kind` among the built-ins, or its name/alias.
        g: dimensionless coupling, ``V = g**2 v``.
        R: length scale.
        alpha: truncation parameter, required for (and only for) STIS.
    """
    kind = parse_kind(kind)
    if kind not in BUILTIN_KINDS:
        raise PotentialError(f"{kind.value} is not a built-in potential")
    if not (g > 0 and math.isfinite(g)):
        raise PotentialError(f"coupling g must be positive, got {g!r}")
    if not (R > 0 and math.isfinite(R)):
        raise PotentialError(f"length scale R must be positive, got {R!r}")
    if kind is Kind.STIS:
        if alpha is None:
            raise PotentialError("STIS requires alpha")
        if not (alpha > 0 and math.isfinite(alpha)):
            raise PotentialError(f"alpha must be positive, got {alpha!r}")
    elif alpha is not None:
        raise PotentialError(f"alpha is only meaningful for STIS, not {kind.value}")
    return Potential(kind=kind, g=float(g), R=float(R),
                     alpha=None if alpha is None else float(alpha))


def from_table(samples: Iterable[Sequence[float]], strict: bool = True) -> Potential:
    """Build a potential from ordered ``(radius, value)`` samples.

    Between samples the potential follows a monotone piecewise-cubic (PCHIP)
    interpolant; below the first radius it is held at the first value and it
    vanishes beyond the last radius.  Repeating the last radius with value 0
    marks an explicit jump to zero, e.g. ``[(0, -100), (1, -100), (1, 0)]``
    is a square well of depth 100 and width 1.

    With ``strict=False`` nonmonotone data is accepted (useful for feeding
    :func:`validate`), but radii must still be increasing.
    """
    pts = [(float(r), float(v)) for r, v in samples]
    jump = False
    if len(pts) >= 2 and pts[-1][0] == pts[-2][0]:
        if pts[-1][1] != 0.0:
            raise PotentialError("a repeated final radius must mark a jump to 0")
        pts = pts[:-1]
        jump = True
    if len(pts) < 2:
        raise PotentialError("need at least two distinct samples")
    radii = np.array([p[0] for p in pts])
    values = np.array([p[1] for p in pts])
    if radii[0] < 0:
        raise PotentialError("radii must be nonnegative")
    if np.any(np.diff(radii) <= 0):
        raise PotentialError("duplicate or decreasing radii")
    if not np.all(np.isfinite(values)):
        raise PotentialError("values must be finite")
    if strict:
        if np.any(values > 0):
            raise PotentialError("positive values: potential must be attractive")
        if np.any(np.diff(values) < 0):
            raise PotentialError("nonmonotone values: potential must be nondecreasing")
    if values[-1] != 0.0:
        jump = True
    interp = PchipInterpolator(radii, values, extrapolate=False)
    return Potential(
        kind=Kind.TABULATED,
        samples=tuple(zip(radii.tolist(), values.tolist())),
        _interp=interp,
        _jump_at_end=jump,
    )


@dataclass(frozen=True)
class KgPotential:
    """Time component W(r) of a 4-vector potential acting on a spin-0 particle."""

    W: Potential
    m: float

    def __post_init__(self):
        if not (self.m > 0 and math.isfinite(self.m)):
            raise PotentialError(f"mass must be positive, got {self.m!r}")


def kg_reduce(kg: KgPotential) -> Potential:
    """Effective zero-kinetic-energy Schroedinger potential ``2mW - W**2``."""
    W = kg.W
    if W.kind is Kind.TABULATED and any(v > 0 for _, v in W.samples):
        raise PotentialError("W must be nonpositive")
    diag = validate(W, grid_size=256)
    bad = [v for v in diag.violations if v.check in ("positive", "monotone")]
    if bad:
        raise PotentialError(f"W rejected: {bad[0].check} at r={bad[0].r:.6g}")
    if W.origin_singular and not _vanishes_toward_origin(W, 1.0 - diag.eps):
        raise PotentialError("W too singular at the origin for the reduction")
    return Potential(kind=Kind.KLEIN_GORDON, g=W.g, R=W.R, base=W, mass=float(kg.m))


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    r: float
    check: str  # "positive" | "monotone" | "origin-decay" | "tail-decay"
    value: float


@dataclass(frozen=True)
class Diagnostics:
    passed: bool
    violations: tuple[Violation, ...]
    origin_singular: bool
    eps: float
    grid: tuple[float, float, int]

    def summary(self) -> str:
        if self.passed:
            note = " (singular at origin)" if self.origin_singular else ""
            return f"pass{note}"
        first = self.violations[0]
        return f"fail: {len(self.violations)} violation(s), first {first.check} at r={first.r:.6g}"


def _envelope(pot, power: float, radii: np.ndarray) -> np.ndarray:
    return radii**power * np.abs(pot._value(radii))


def _vanishes_toward_origin(pot, power: float) -> bool:
    radii = pot.scale * np.array([1e-6, 1e-8, 1e-10])
    env = _envelope(pot, power, radii)
    return bool(np.all(np.diff(env) <= 1e-12 * max(env[0], 1e-300)) or env[-1] < 1e-14)


def _vanishes_toward_infinity(pot, power: float) -> bool:
    if pot.support_end is not None:
        return True
    radii = pot.scale * np.array([1e2, 1e3, 1e4])
    env = _envelope(pot, power, radii)
    return bool(np.all(np.diff(env) <= 0) or env[-1] < 1e-14)


def validate(pot: Potential, grid_size: int = 1024, eps: float = 0.1) -> Diagnostics:
    """Check sign, monotonicity and decay of ``pot`` on a log-spaced grid.

    Never raises for a bad potential; inspect ``passed`` and ``violations``.
    """
    if grid_size < 16:
        raise PotentialError("grid_size must be at least 16")
    scale = pot.scale
    end = pot.support_end
    hi = end * (1.0 + 1e-9) if end is not None else 50.0 * scale
    radii = np.geomspace(1e-6 * scale, hi, grid_size)
    if end is not None:
        radii = np.union1d(radii, [end])
    values = pot._value(radii)
    tol = 1e-12 * max(float(np.max(np.abs(values))), 1e-300)

    violations: list[Violation] = []
    for i in np.flatnonzero(values > tol):
        violations.append(Violation(float(radii[i]), "positive", float(values[i])))
    drops = np.diff(values)
    for i in np.flatnonzero(drops < -tol):
        violations.append(Violation(float(radii[i + 1]), "monotone", float(drops[i])))
    if not _vanishes_toward_origin(pot, 2.0 - eps):
        violations.append(Violation(float(radii[0]), "origin-decay", float(values[0])))
    if not _vanishes_toward_infinity(pot, 2.0 + eps):
        violations.append(Violation(float(1e4 * scale), "tail-decay", float(values[-1])))
    violations.sort(key=lambda v: v.r)
    return Diagnostics(
        passed=not violations,
        violations=tuple(violations),
        origin_singular=pot.origin_singular,
        eps=eps,
        grid=(float(radii[0]), float(radii[-1]), int(radii.size)),
    )
