"""Command-line front end.

Potentials are given either with ``--kind/--g/--R/--alpha`` or through
``--config FILE``.  A config file is one of

* JSON (schema version 1)::

      {"version": 1, "kind": "stis", "g": 10, "R": 1, "alpha": 100}
      {"version": 1, "kind": "tabulated", "samples": [[0.0, -4.0], [1.0, -1.0], ...]}
      {"version": 1, "kind": "tabulated", "file": "samples.csv"}
      {"version": 1, "kind": "kleingordon", "m": 1.0, "W": {"kind": "exponential", "g": 4}}

* comma-separated ``radius,value`` rows (extension ``.csv`` or ``.txt``;
  a non-numeric first row is treated as a header, ``#`` starts a comment).

Exit codes: 0 success, 2 invalid input, 3 a bound contradicted the exact count.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .counter import wavefunction_samples
from .errors import BoundCountError, PotentialError
from .ladder import LadderDirection, check_ladder_sandwich
from .potentials import BUILTIN_KINDS, KgPotential, Kind, from_table, kg_reduce, make_builtin, \
    parse_kind, validate
from .report import (STIS_COLUMNS, BoundsReport, compare_stis_row, compute_bounds,
                     default_rel_tol, stis_table, sweep)

EXIT_INVALID = 2
EXIT_VIOLATION = 3
CONFIG_VERSION = 1

_KIND_NAMES = [k.value for k in BUILTIN_KINDS]


# -- potential parsing ---------------------------------------------------------------------

def _read_rows(path: Path) -> list[tuple[float, float]]:
    rows = []
    with path.open(newline="") as fh:
        for i, rec in enumerate(csv.reader(fh)):
            rec = [c.strip() for c in rec]
            if not rec or not rec[0] or rec[0].startswith("#"):
                continue
            try:
                r, v = float(rec[0]), float(rec[1])
            except (ValueError, IndexError):
                if i == 0:
                    continue  # header
                raise PotentialError(f"{path}: row {i + 1} is not 'radius,value'") from None
            rows.append((r, v))
    return rows


def potential_from_mapping(cfg: dict, base_dir: Path = Path(".")):
    """Build a :class:`Potential` from a decoded JSON config."""
    if not isinstance(cfg, dict):
        raise PotentialError("config must be a JSON object")
    version = cfg.get("version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise PotentialError(f"unsupported config version {version!r}")
    if "kind" not in cfg:
        raise PotentialError("config needs a 'kind'")
    kind = parse_kind(cfg["kind"])
    if kind is Kind.TABULATED:
        if "samples" in cfg:
            return from_table(cfg["samples"])
        if "file" in cfg:
            return from_table(_read_rows(base_dir / cfg["file"]))
        raise PotentialError("tabulated config needs 'samples' or 'file'")
    if kind is Kind.KLEIN_GORDON:
        if "W" not in cfg or "m" not in cfg:
            raise PotentialError("kleingordon config needs 'W' and 'm'")
        W = potential_from_mapping({"version": version, **cfg["W"]}, base_dir)
        return kg_reduce(KgPotential(W, float(cfg["m"])))
    try:
        g = float(cfg["g"])
    except (KeyError, TypeError, ValueError):
        raise PotentialError("built-in config needs a numeric 'g'") from None
    alpha = cfg.get("alpha")
    return make_builtin(kind, g, float(cfg.get("R", 1.0)),
                        None if alpha is None else float(alpha))


def load_config(path: Path):
    if path.suffix.lower() in (".csv", ".txt"):
        return from_table(_read_rows(path))
    try:
        cfg = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise PotentialError(f"{path}: invalid JSON ({exc})") from None
    return potential_from_mapping(cfg, path.parent)


def _potential(kind, g, R, alpha, config):
    if config is not None:
        if kind is not None or g is not None:
            raise click.UsageError("use either --config or --kind/--g, not both")
        return load_config(Path(config))
    if kind is None or g is None:
        raise click.UsageError("a potential needs --kind and --g (or --config)")
    return make_builtin(kind, g, R, alpha)


def potential_options(fn):
    fn = click.option("--config", type=click.Path(exists=True, dir_okay=False),
                      help="JSON or CSV potential description.")(fn)
    fn = click.option("--alpha", type=float, default=None, help="STIS cutoff parameter.")(fn)
    fn = click.option("--R", "R", type=float, default=1.0, show_default=True,
                      help="Range parameter.")(fn)
    fn = click.option("--g", type=float, default=None, help="Coupling constant.")(fn)
    fn = click.option("--kind", type=click.Choice(_KIND_NAMES, case_sensitive=False),
                      default=None, help="Built-in potential.")(fn)
    return fn


def format_option(fn):
    return click.option("--format", "fmt", type=click.Choice(["table", "csv", "json"]),
                        default="table", show_default=True)(fn)


def rtol_option(fn):
    return click.option("--rtol", type=float, default=None,
                        help="Quadrature tolerance (default: $BOUNDCOUNT_RTOL or 1e-10).")(fn)


# -- rendering -----------------------------------------------------------------------------

def _num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return f"{x:.6g}"


def _aligned(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def _csv(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


_LIMIT_HEADER = ["limit", "type", "raw", "bound", "holds", "note"]


def _limit_rows(rep: BoundsReport) -> list[list[str]]:
    rows = []
    for lim in rep.limits:
        if lim.applicable:
            holds = "yes" if lim.holds_for(rep.n) else "NO"
            note = ("boundary; " if lim.boundary else "") + (lim.reason or "")
            rows.append([lim.name.value, lim.direction.value, _num(lim.raw), str(lim.bound),
                         holds, note])
        else:
            rows.append([lim.name.value, lim.direction.value, "", "", "n/a", lim.reason or ""])
    return rows


def render_report(rep: BoundsReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep.as_dict(), indent=2, sort_keys=True) + "\n"
    rows = _limit_rows(rep)
    if fmt == "csv":
        return _csv(_LIMIT_HEADER, [["exact", "exact", "", str(rep.n), "", ""]] + rows)
    out = [f"potential: {rep.potential.describe()}",
           f"exact N:   {rep.n}",
           f"phase integral: {_num(rep.phase_integral)}"]
    radii = {k: v for k, v in rep.radii.as_dict().items() if v is not None and k != "s_roots"}
    if radii:
        out.append("radii: " + ", ".join(f"{k}={_num(v)}" for k, v in radii.items()))
    text = "\n".join(out) + "\n\n" + _aligned(_LIMIT_HEADER, rows)
    if rep.warnings:
        text += "\n" + "\n".join(f"warning: {w}" for w in rep.warnings) + "\n"
    return text


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_INVALID)


# -- commands ------------------------------------------------------------------------------

@click.group()
@click.version_option(__version__, prog_name="boundcount")
def main():
    """Count S-wave bound states and bracket them with upper/lower limits."""


@main.command()
@potential_options
@format_option
@rtol_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def bounds(kind, g, R, alpha, config, fmt, rtol, output):
    """Exact count and every limit for one potential."""
    try:
        pot = _potential(kind, g, R, alpha, config)
        rep = compute_bounds(pot, rtol if rtol is not None else default_rel_tol())
    except (BoundCountError, ValueError) as exc:
        _fail(exc)
    _emit(render_report(rep, fmt), output)
    if not rep.ok:
        sys.exit(EXIT_VIOLATION)


@main.command()
@click.option("--kind", type=click.Choice(_KIND_NAMES, case_sensitive=False), required=True)
@click.option("--g-min", type=float, required=True)
@click.option("--g-max", type=float, required=True)
@click.option("--steps", type=int, default=40, show_default=True)
@click.option("--log", "log_spacing", is_flag=True, help="Logarithmic coupling grid.")
@click.option("--R", "R", type=float, default=1.0, show_default=True)
@click.option("--alpha", type=float, default=None)
@click.option("--workers", type=int, default=None)
@rtol_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def sweep_cmd(kind, g_min, g_max, steps, log_spacing, R, alpha, workers, rtol, output):
    """Comma-separated exact count and limits over a coupling range."""
    try:
        if not (0 < g_min < g_max) or steps < 2:
            raise PotentialError("need 0 < g-min < g-max and steps >= 2")
        grid = (np.geomspace if log_spacing else np.linspace)(g_min, g_max, steps)
        rows = sweep(make_builtin(kind, g_min, R, alpha), grid,
                     rtol if rtol is not None else default_rel_tol(), workers)
    except (BoundCountError, ValueError) as exc:
        _fail(exc)
    _emit(_csv(rows[0].header(), [r.cells() for r in rows]), output)
    if any(lim.applicable and not lim.holds_for(r.n) for r in rows for lim in r.limits):
        sys.exit(EXIT_VIOLATION)


main.add_command(sweep_cmd, name="sweep")


@main.command("stis-table")
@click.option("--check", is_flag=True, help="Compare with the reference integers.")
@format_option
@rtol_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def stis_table_cmd(check, fmt, rtol, output):
    """The STIS benchmark grid: counts and integer limits for nine (alpha, g)."""
    rows = stis_table(rtol if rtol is not None else default_rel_tol())
    header = ["alpha", "g", *STIS_COLUMNS]
    cells = [[f"{r['alpha']:g}", f"{r['g']:g}", *(str(r[c]) for c in STIS_COLUMNS)]
             for r in rows]
    if fmt == "json":
        text = json.dumps(rows, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        text = _csv(header, cells)
    else:
        text = _aligned(header, cells)
    _emit(text, output)
    if any(not r["ok"] for r in rows):
        sys.exit(EXIT_VIOLATION)
    if check:
        problems = [(r["alpha"], r["g"], p) for r in rows for p in compare_stis_row(r)]
        for a, gg, p in problems:
            click.echo(f"mismatch at alpha={a:g}, g={gg:g}: {p}", err=True)
        click.echo("check: " + ("FAIL" if problems else "PASS"), err=True)
        if problems:
            sys.exit(1)


@main.command()
@click.option("--kind", type=click.Choice(_KIND_NAMES, case_sensitive=False), default=None,
              help="Built-in shape of the vector potential W.")
@click.option("--g", type=float, default=None)
@click.option("--R", "R", type=float, default=1.0, show_default=True)
@click.option("--alpha", type=float, default=None)
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Potential description of W.")
@click.option("--m", "mass", type=float, required=True, help="Particle mass.")
@format_option
@rtol_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def kg(kind, g, R, alpha, config, mass, fmt, rtol, output):
    """Klein-Gordon count for a vector potential W via V = 2 m W - W^2."""
    try:
        W = _potential(kind, g, R, alpha, config)
        pot = kg_reduce(KgPotential(W, mass))
        rep = compute_bounds(pot, rtol if rtol is not None else default_rel_tol())
    except (BoundCountError, ValueError) as exc:
        _fail(exc)
    _emit(render_report(rep, fmt), output)
    if not rep.ok:
        sys.exit(EXIT_VIOLATION)


@main.command("validate")
@potential_options
def validate_cmd(kind, g, R, alpha, config):
    """Check sign, monotonicity and decay conditions of a potential."""
    try:
        pot = _potential(kind, g, R, alpha, config)
    except (BoundCountError, ValueError) as exc:
        _fail(exc)
    diag = validate(pot)
    click.echo(f"{pot.describe()}: {diag.summary()}")
    for v in diag.violations[:20]:
        click.echo(f"  {v.check} at r={v.r:.6g} ({v.value:.6g})")
    if not diag.passed:
        sys.exit(EXIT_INVALID)


@main.command()
@potential_options
@click.option("--direction", type=click.Choice(["up", "down"]), default="down",
              show_default=True)
@click.option("--check/--no-check", default=True, show_default=True,
              help="Also verify the pointwise ladder sandwich.")
@rtol_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def trace(kind, g, R, alpha, config, direction, check, rtol, output):
    """Ladder radii r_j and step lengths as comma-separated rows."""
    try:
        pot = _potential(kind, g, R, alpha, config)
        rep = compute_bounds(pot, rtol if rtol is not None else default_rel_tol())
    except (BoundCountError, ValueError) as exc:
        _fail(exc)
    tr = rep.traces.get(direction)
    if tr is None:
        lim = rep.limit("ladder_up" if direction == "up" else "ladder_down")
        _fail(PotentialError(f"no {direction} ladder: {lim.reason}"))
    rows = [[str(j), f"{r:.12g}", "" if math.isnan(s) else f"{s:.12g}"] for j, r, s in tr.rows()]
    _emit(_csv(["j", "r", "step"], rows), output)
    click.echo(f"J={tr.J} bound={tr.bound} exact={rep.n}", err=True)
    if check:
        sw = check_ladder_sandwich(pot, tr)
        kind_word = "V+ <= V" if tr.direction is LadderDirection.UP else "V <= V-"
        click.echo(f"sandwich {kind_word}: {sw.violations} violation(s) on {sw.points} points",
                   err=True)
        if not sw.ok:
            sys.exit(EXIT_VIOLATION)


@main.command()
@potential_options
@rtol_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
def profile(kind, g, R, alpha, config, rtol, output):
    """Zero-energy wave function and phase on the integration mesh."""
    try:
        pot = _potential(kind, g, R, alpha, config)
        data = wavefunction_samples(pot, rtol if rtol is not None else default_rel_tol())
    except (BoundCountError, ValueError) as exc:
        _fail(exc)
    cols = ["r", "u", "du", "eta"]
    rows = [[f"{x:.10g}" for x in rec] for rec in zip(*(data[c] for c in cols))]
    _emit(_csv(cols, rows), output)


if __name__ == "__main__":  # pragma: no cover
    main()
