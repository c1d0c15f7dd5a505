"""Command-line front end.

``minsurf4 analyze|associate|atlas|verify|examples --config FILE [--out DIR]``

Run files are INI documents with up to four sections::

    [surface]          name = catalog entry (plus its keyword arguments)
                       or e = ..., f = ..., g = ..., h = ... expressions
    [domain]           kind = rect|disk, x0/x1/y0/y1 or R, nx, ny
    [run]              grid, mesh_level, tsamples, seed, caps, coverage,
                       second_variation, numeric_eigen, surfaces, and any
                       tolerance field by name
    [atlas]            points = name:a,b; ...   surfaces = a, b, ...
                       trajectory = true|false

All outputs are plain text in a fixed key and column order, so identical
configurations give byte-identical files.
"""
from __future__ import annotations

import argparse
import ast
import configparser
import csv
import inspect
import io
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from . import area as ar
from . import catalog
from . import stability as st
from .config import Tolerances
from .errors import ConfigError, Minsurf4Error
from .holo import ParamDomain
from .pipeline import Analysis, RunConfig, Sweep, analyze, associate_sweep, verify
from .surface import WeierstrassData

EXIT_OK, EXIT_CONFIG, EXIT_VIOLATION, EXIT_NUMERIC = 0, 1, 2, 3

_RUN_INT = ("grid", "mesh_level", "tsamples", "seed", "caps")
_RUN_BOOL = ("coverage", "second_variation", "numeric_eigen")
_DOMAIN_KEYS = ("kind", "x0", "x1", "y0", "y1", "R", "nx", "ny", "points")


@dataclass
class Job:
    """Everything a command needs: the parsed surface, run settings and output place."""

    run: RunConfig
    surface: WeierstrassData | None = None
    out: Path = Path("minsurf4-out")
    atlas_points: list = field(default_factory=list)
    atlas_surfaces: tuple = ()
    atlas_trajectory: bool = False


# ---------------------------------------------------------------------------
# configuration


def _number(text: str, key: str):
    try:
        v = ast.literal_eval(text.strip())
    except (ValueError, SyntaxError):
        raise ConfigError(f"{key} = {text!r} is not a number") from None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{key} = {text!r} is not a number")
    return v


def _bool(text: str, key: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key} = {text!r} is not a boolean")


def _names(text: str) -> tuple:
    return tuple(s.strip() for s in text.replace("\n", ",").split(",") if s.strip())


def _read_ini(text: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep R distinct from r
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse run file: {exc}") from None
    unknown = set(cp.sections()) - {"surface", "domain", "run", "atlas"}
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    return cp


def _domain_overrides(sec) -> dict:
    out = {}
    for k, v in sec.items():
        if k not in _DOMAIN_KEYS:
            raise ConfigError(f"unknown [domain] key {k!r}")
        if k == "kind":
            out[k] = v.strip()
        elif k in ("nx", "ny", "points"):
            out[k] = int(_number(v, k))
        else:
            out[k] = float(_number(v, k))
    return out


def _surface(cp, grid: int) -> WeierstrassData | None:
    if not cp.has_section("surface"):
        return None
    sec = dict(cp["surface"])
    dom = _domain_overrides(cp["domain"]) if cp.has_section("domain") else {}
    n = dom.get("nx", grid)
    expr_keys = {"e", "f", "g", "h"} & set(sec)
    if expr_keys:
        if "name" in sec and sec["name"] in catalog.CATALOG:
            raise ConfigError("give either a catalog name or expressions, not both")
        missing = {"e", "f", "g", "h"} - expr_keys
        if missing:
            raise ConfigError(f"[surface] is missing {', '.join(sorted(missing))}")
        extra = set(sec) - {"e", "f", "g", "h", "name"}
        if extra:
            raise ConfigError(f"unknown [surface] key(s): {', '.join(sorted(extra))}")
        try:
            d = replace(ParamDomain(nx=n, ny=n), **dom)
            return WeierstrassData.from_text(sec["e"], sec["f"], sec["g"], sec["h"], d, sec.get("name", "surface"))
        except (Minsurf4Error, ValueError) as exc:
            raise ConfigError(f"[surface]: {type(exc).__name__}: {exc}") from None
    if "name" not in sec:
        raise ConfigError("[surface] needs a name or the four expressions e, f, g, h")
    name = sec.pop("name").strip()
    kw = {k: _number(v, k) for k, v in sec.items()}
    try:
        if name.startswith("sigma_") and name != "sigma_pq":
            w = catalog.by_name(name, n, **kw)
        else:
            factory = catalog.CATALOG[name]
            allowed = set(inspect.signature(factory).parameters) - {"n", "name"}
            bad = set(kw) - allowed
            if bad:
                raise ConfigError(f"{name} does not take {', '.join(sorted(bad))}")
            w = factory(n=n, **kw)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    except (TypeError, ValueError, Minsurf4Error) as exc:
        raise ConfigError(f"bad arguments for {name}: {exc}") from None
    if dom:
        try:
            w = w.with_domain(replace(w.domain, **dom))
        except (Minsurf4Error, ValueError) as exc:
            raise ConfigError(f"[domain]: {exc}") from None
    return w


def _run(cp) -> tuple[dict, dict]:
    """Split [run] into RunConfig fields and tolerance overrides."""
    fields, tols = {}, {}
    if not cp.has_section("run"):
        return fields, tols
    tol_names = set(Tolerances.field_names())
    for k, v in cp["run"].items():
        if k in _RUN_INT:
            fields[k] = int(_number(v, k))
        elif k in _RUN_BOOL:
            fields[k] = _bool(v, k)
        elif k == "surfaces":
            fields[k] = _names(v)
        elif k in tol_names:
            tols[k] = float(_number(v, k))
        else:
            raise ConfigError(f"unknown [run] key {k!r}")
    return fields, tols


def _parse_points(text: str) -> list:
    pts = []
    for i, item in enumerate(s.strip() for s in text.replace("\n", ";").split(";")):
        if not item:
            continue
        label, _, coords = item.rpartition(":")
        try:
            a, b = (float(c) for c in coords.split(","))
        except ValueError:
            raise ConfigError(f"atlas point {item!r} is not 'name:a,b'") from None
        pts.append((label.strip() or f"p{i}", a, b))
    return pts


def load_job(text: str = "", grid: int | None = None, mesh_level: int | None = None, tsamples: int | None = None,
             out: str | Path | None = None) -> Job:
    """Build a :class:`Job` from run-file text; explicit arguments win over the file."""
    cp = _read_ini(text)
    fields, tols = _run(cp)
    if cp.has_section("domain") and "nx" in cp["domain"] and "grid" not in fields:
        fields["grid"] = int(_number(cp["domain"]["nx"], "nx"))
    for k, v in (("grid", grid), ("mesh_level", mesh_level), ("tsamples", tsamples)):
        if v is not None:
            fields[k] = v
    try:
        if tols:
            fields["tol"] = Tolerances(**tols)
        run = RunConfig(**fields)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    job = Job(run, _surface(cp, run.grid))
    if out is not None:
        job.out = Path(out)
    if cp.has_section("atlas"):
        sec = cp["atlas"]
        bad = set(sec) - {"points", "surfaces", "trajectory"}
        if bad:
            raise ConfigError(f"unknown [atlas] key(s): {', '.join(sorted(bad))}")
        job.atlas_points = _parse_points(sec.get("points", ""))
        job.atlas_surfaces = _names(sec.get("surfaces", ""))
        job.atlas_trajectory = _bool(sec.get("trajectory", "false"), "trajectory")
    return job


# ---------------------------------------------------------------------------
# formatting


def fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}j"
    if hasattr(v, "value"):
        return str(v.value)
    return str(v).replace("\n", " ")


def kv_block(pairs) -> str:
    return "".join(f"{k}={fmt(v)}\n" for k, v in pairs)


def _config_pairs(job: Job):
    r = job.run
    yield "version", __version__
    yield "config.grid", r.grid
    yield "config.mesh_level", r.mesh_level
    yield "config.tsamples", r.tsamples
    yield "config.seed", r.seed
    yield "config.coverage", r.coverage
    yield "config.second_variation", r.second_variation
    yield "config.numeric_eigen", r.numeric_eigen
    for k in Tolerances.field_names():
        yield f"tol.{k}", getattr(r.tol, k)


def _surface_pairs(w: WeierstrassData):
    yield "surface.name", w.name
    for k, t in zip("efgh", w.texts()):
        yield f"surface.{k}", t
    for k, v in w.domain.describe().items():
        yield f"domain.{k}", v


def _check_pairs(checks, prefix="check"):
    for c in checks:
        yield f"{prefix}.{c.name}.status", c.status
        if c.value is not None:
            yield f"{prefix}.{c.name}.value", c.value
        if c.threshold is not None:
            yield f"{prefix}.{c.name}.threshold", c.threshold
        if c.detail:
            yield f"{prefix}.{c.name}.detail", c.detail
    yield f"{prefix}s.total", len(checks)
    yield f"{prefix}s.failed", sum(not c.ok for c in checks)


def _cert_pairs(name, cert):
    for k, v in cert.as_dict().items():
        yield f"certificate.{name}.{k}", v


def analysis_report(job: Job, res: Analysis) -> str:
    pairs = list(_config_pairs(job)) + list(_surface_pairs(job.surface))
    pairs.append(("verdict", res.verdict))
    pairs += [(f"area.{k}", v) for k, v in res.areas.as_dict().items()]
    for k, c in res.certificates.items():
        pairs += list(_cert_pairs(k, c))
    pairs += [(f"fact.{k}", v) for k, v in res.facts.items()]
    if res.second_variation is not None:
        sv = res.second_variation
        pairs += [("second_variation.min_eig", sv.min_eig), ("second_variation.scale", sv.scale),
                  ("second_variation.relative", sv.relative), ("second_variation.n_unknowns", sv.n_unknowns),
                  ("second_variation.frame", sv.frame)]
    pairs += list(_check_pairs(res.checks))
    return kv_block(pairs)


AREA_COLUMNS = ("surface", "mesh_level", "aL_pull", "aR_pull", "aL_cov", "aR_cov", "total_pull",
                "total_grassmannian", "aL_prop", "aR_prop", "aL_cov_prop", "aR_cov_prop", "additivity_residual")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for r in rows:
        wr.writerow([fmt(x) for x in r])
    return buf.getvalue()


def areas_csv(name: str, rep: ar.AreaReport) -> str:
    d = rep.as_dict()
    return _csv(AREA_COLUMNS, [[name] + [d[k] for k in AREA_COLUMNS[1:]]])


TRAJECTORY_COLUMNS = ("t", "aL_prop", "aR_prop", "total_prop", "metric_residual", "KT_residual", "balanced")


def trajectory_csv(sw: Sweep, rel_tol: float = 1e-3) -> str:
    rows = []
    for r in sw.rows:
        tot = r.aL_pull + r.aR_pull
        bal = abs(r.aL_pull - r.aR_pull) <= rel_tol * tot if tot > 0 else True
        rows.append([r.t, r.aL_prop, r.aR_prop, ar.proportion(r.total), r.metric_residual, r.KT_residual,
                     int(bal)])
    return _csv(TRAJECTORY_COLUMNS, rows)


def sweep_report(job: Job, sw: Sweep) -> str:
    pairs = list(_config_pairs(job)) + list(_surface_pairs(job.surface))
    pairs += [(f"diagnostic.{k}", v) for k, v in sw.diagnostics.items()]
    pairs.append(("balanced_t0", sw.balanced_t0))
    pairs += list(_cert_pairs("total_area_pipeline", sw.certificate))
    pairs += list(_check_pairs(sw.checks))
    return kv_block(pairs)


def verify_report(job: Job, checks) -> str:
    head = kv_block(list(_config_pairs(job)) + [("config.surfaces", ",".join(job.run.surfaces)),
                                                ("config.caps", job.run.caps)])
    width = max(len(c.name) for c in checks)
    lines = []
    for c in checks:
        val = "" if c.value is None else fmt(c.value)
        thr = "" if c.threshold is None else fmt(c.threshold)
        lines.append(f"{c.status:<5} {c.name:<{width}} {val:>20} {thr:>12} {c.detail}".rstrip())
    failed = sum(not c.ok for c in checks)
    tail = f"summary total={len(checks)} failed={failed}\n"
    return head + "\n".join(lines) + "\n" + tail


# ---------------------------------------------------------------------------
# SVG atlas

SVG_SIZE = 800
_MARGIN = 80
_SPAN = SVG_SIZE - 2 * _MARGIN
ENLARGED_INTERCEPT = 0.737


def _xy(a, b):
    return _MARGIN + _SPAN * a, SVG_SIZE - _MARGIN - _SPAN * b


def _path(points, close=False) -> str:
    cmds = [f"{'M' if i == 0 else 'L'}{x:.3f},{y:.3f}" for i, (x, y) in enumerate(_xy(a, b) for a, b in points)]
    return " ".join(cmds) + (" Z" if close else "")


def hyperbola_polyline(n: int = 241) -> np.ndarray:
    """Upper edge of the closed-form area stability domain, as (a, b) rows."""
    a = np.linspace(0.0, 2.0 / 3.0, n)
    return np.column_stack([a, st.hyperbola_boundary(a)])


def enlarged_polyline(x0: float = ENLARGED_INTERCEPT, n: int = 241) -> np.ndarray:
    c, k = st.equilateral_hyperbola(x0)
    a = np.linspace(0.0, x0, n)
    return np.column_stack([a, c + k / (a - c)])


def atlas_svg(points=(), trajectories=()) -> str:
    """The unit square of proportionate areas with the stability curves drawn in.

    ``points`` are ``(label, a, b)``; ``trajectories`` are ``(label, rows)``
    with rows of ``(a, b)``.
    """
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}" font-family="sans-serif" font-size="14">',
        f'<rect x="0" y="0" width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>',
        f'<path id="sum-third" d="{_path([(0, 0), (1 / 3, 0), (0, 1 / 3)], close=True)}" '
        'fill="#cfe3f5" stroke="#3b7dbf" stroke-width="1.5"/>',
        f'<path id="hyperbola" d="{_path(hyperbola_polyline())}" fill="none" stroke="#c0392b" stroke-width="2"/>',
        f'<path id="enlarged" d="{_path(enlarged_polyline())}" fill="none" stroke="#8e44ad" '
        'stroke-width="1.5" stroke-dasharray="2,3"/>',
        f'<path id="diagonal" d="{_path([(0, 0), (1, 1)])}" fill="none" stroke="#555" stroke-width="1" '
        'stroke-dasharray="1,4"/>',
        f'<path id="open-question" d="{_path([(1, 0), (0, 1)])}" fill="none" stroke="#222" stroke-width="1.5" '
        'stroke-dasharray="8,6"/>',
        f'<path id="frame" d="{_path([(0, 0), (1, 0), (1, 1), (0, 1)], close=True)}" fill="none" '
        'stroke="black" stroke-width="1.5"/>',
    ]
    for t in (0.0, 0.25, 0.5, 0.75, 1.0):
        x, y = _xy(t, 0)
        out.append(f'<line x1="{x:.3f}" y1="{y:.3f}" x2="{x:.3f}" y2="{y + 6:.3f}" stroke="black"/>')
        out.append(f'<text x="{x:.3f}" y="{y + 22:.3f}" text-anchor="middle">{t:g}</text>')
        x, y = _xy(0, t)
        out.append(f'<line x1="{x - 6:.3f}" y1="{y:.3f}" x2="{x:.3f}" y2="{y:.3f}" stroke="black"/>')
        out.append(f'<text x="{x - 10:.3f}" y="{y + 5:.3f}" text-anchor="end">{t:g}</text>')
    x, y = _xy(0.5, 0)
    out.append(f'<text x="{x:.3f}" y="{y + 48:.3f}" text-anchor="middle">a = |g_L(Σ)| / 2π</text>')
    x, y = _xy(0, 0.5)
    out.append(f'<text x="{x - 52:.3f}" y="{y:.3f}" text-anchor="middle" '
               f'transform="rotate(-90 {x - 52:.3f} {y:.3f})">b = |g_R(Σ)| / 2π</text>')
    labels = [((0.03, 0.12), "a + b ≤ 1/3", "#3b7dbf"),
              ((0.37, 0.62), "(a-3/4)(b-3/4) = 1/16", "#c0392b"),
              ((ENLARGED_INTERCEPT - 0.02, 0.03), f"{ENLARGED_INTERCEPT}", "#8e44ad"),
              ((0.60, 0.45), "open: stable when a + b < 1?", "#222"),
              ((0.82, 0.87), "flat normal", "#555")]
    for (a, b), text, colour in labels:
        x, y = _xy(a, b)
        out.append(f'<text x="{x:.3f}" y="{y:.3f}" fill="{colour}">{text}</text>')
    for label, rows in trajectories:
        out.append(f'<path class="trajectory" d="{_path(rows)}" fill="none" stroke="#16a085" stroke-width="2">'
                   f'<title>{label}</title></path>')
    for label, a, b in points:
        x, y = _xy(a, b)
        out.append(f'<circle class="surface" cx="{x:.3f}" cy="{y:.3f}" r="5" fill="#e67e22" stroke="black">'
                   f'<title>{label} ({a:.6g}, {b:.6g})</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# commands


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _need_surface(job: Job) -> WeierstrassData:
    if job.surface is None:
        raise ConfigError("this command needs a [surface] section")
    job.surface = job.surface.with_domain(job.surface.domain.with_resolution(job.run.grid))
    return job.surface


def cmd_analyze(job: Job) -> int:
    w = _need_surface(job)
    res = analyze(w, job.run)
    _write(job.out / "report.txt", analysis_report(job, res))
    _write(job.out / "areas.csv", areas_csv(w.name, res.areas))
    failed = [c for c in res.checks if not c.ok]
    print(f"{w.name}: {res.verdict.value}; {len(res.checks) - len(failed)}/{len(res.checks)} checks passed")
    for c in failed:
        print(f"  FAIL {c.name} value={fmt(c.value)} threshold={fmt(c.threshold)} {c.detail}".rstrip())
    return EXIT_OK if not failed else EXIT_VIOLATION


def cmd_associate(job: Job) -> int:
    w = _need_surface(job)
    sw = associate_sweep(w, job.run)
    _write(job.out / "trajectory.csv", trajectory_csv(sw))
    _write(job.out / "associate.txt", sweep_report(job, sw))
    print(f"{w.name}: total_area_pipeline {sw.certificate.verdict.value}; swap path: {sw.diagnostics['swap_path']}")
    failed = [c for c in sw.checks if not c.ok]
    for c in failed:
        print(f"  FAIL {c.name} value={fmt(c.value)} threshold={fmt(c.threshold)}")
    return EXIT_OK if not failed else EXIT_VIOLATION


def surface_point(w: WeierstrassData, cfg: RunConfig) -> tuple:
    """Proportionate image areas (coverage if enabled, else clipped pullback)."""
    rep = ar.area_report(w, cfg.mesh_level, coverage=cfg.coverage)
    if cfg.coverage:
        return w.name, rep.aL_cov_prop, rep.aR_cov_prop
    return w.name, min(rep.aL_prop, 1.0), min(rep.aR_prop, 1.0)


def cmd_atlas(job: Job) -> int:
    pts = list(job.atlas_points)
    for name in job.atlas_surfaces:
        pts.append(surface_point(catalog.by_name(name, job.run.grid), job.run))
    trajectories = []
    if job.surface is not None:
        pts.append(surface_point(job.surface, job.run))
        if job.atlas_trajectory:
            sw = associate_sweep(job.surface, job.run)
            trajectories.append((job.surface.name, [(r.aL_prop, r.aR_prop) for r in sw.rows]))
    _write(job.out / "atlas.svg", atlas_svg(pts, trajectories))
    print(f"atlas.svg: {len(pts)} point(s), {len(trajectories)} trajectory(ies)")
    return EXIT_OK


def cmd_verify(job: Job) -> int:
    checks = verify(job.run)
    text = verify_report(job, checks)
    _write(job.out / "verify.txt", text)
    sys.stdout.write(text)
    return EXIT_OK if all(c.ok for c in checks) else EXIT_VIOLATION


EXAMPLE_FILES = {
    "catenoid.ini": """\
# thin catenoid slab: normal curvature vanishes, eigenvalue route decides
[surface]
name = catenoid
x0 = -0.3
x1 = 0.3

[run]
grid = 32
""",
    "catenoid_wide.ini": """\
[surface]
name = catenoid_wide

[run]
grid = 32
""",
    "sigma_1_2.ini": """\
# total Gauss area close to 3 x 2π on a large disk
[surface]
name = sigma_pq
p = 1
q = 2
R = 10
""",
    "complex_curve.ini": """\
# explicit expressions: the graph of z -> z^2
[surface]
e = z
f = 0
g = z^2
h = 0

[domain]
kind = disk
R = 1
nx = 32
ny = 32
""",
    "verify_quick.ini": """\
[run]
grid = 16
mesh_level = 5
caps = 10
surfaces = flat_line, catenoid
""",
    "atlas.ini": """\
[surface]
name = catenoid_balanced

[run]
grid = 16
coverage = false

[atlas]
points = flat:0,0; hemispheres:0.5,0.5
trajectory = true
""",
}


def cmd_examples(job: Job) -> int:
    for name, text in EXAMPLE_FILES.items():
        _write(job.out / name, text)
    print(f"wrote {len(EXAMPLE_FILES)} example run files to {job.out}")
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "associate": cmd_associate, "atlas": cmd_atlas, "verify": cmd_verify,
            "examples": cmd_examples}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="minsurf4", description="Minimal surfaces in R^4 via quaternionic "
                                "Weierstrass data: Gauss-map areas, stability certificates, associate families.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", type=Path, help="INI run file")
    p.add_argument("--out", type=Path, default=Path("minsurf4-out"), help="output directory")
    p.add_argument("--grid", type=int, help="quadrature cells per axis")
    p.add_argument("--mesh-level", type=int, help="icosphere subdivision level")
    p.add_argument("--tsamples", type=int, help="samples along the associate family")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.config.read_text(encoding="utf-8") if args.config else ""
        job = load_job(text, args.grid, args.mesh_level, args.tsamples, args.out)
        return COMMANDS[args.command](job)
    except (ConfigError, OSError) as exc:
        print(f"minsurf4: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Minsurf4Error as exc:
        print(f"minsurf4: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
