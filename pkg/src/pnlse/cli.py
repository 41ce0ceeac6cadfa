"""Command-line front end: ``pnlse <command> [options]``.

Every command writes one table (CSV or JSON) and, with ``--plot``, an SVG
overlay next to it. Exit status is 0 on success, 2 for configuration errors
and 3 when some solve did not converge (the rows that did are still written).
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import fields
from pathlib import Path

import numpy as np

from .config import DEFAULT, SolverConfig
from .errors import ConfigError, PnlseError
from .potentials import Potential

EXIT_OK, EXIT_CONFIG, EXIT_NONCONVERGENCE = 0, 2, 3


class Table:
    """Ordered columns plus an optional summary mapping."""

    def __init__(self, columns, rows, summary=None, plot=None):
        self.columns = list(columns)
        self.rows = [dict(r) for r in rows]
        self.summary = dict(summary or {})
        self.plot = plot   # (x column, [y columns], xlabel, ylabel, markers)

    @property
    def failed(self):
        return any(r.get("status", "ok") != "ok" for r in self.rows) or \
            self.summary.get("status", "ok") != "ok"

    def column(self, name):
        return np.array([r[name] for r in self.rows], dtype=float)


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        # JSON has no NaN; keep the 17-digit text form for finite values
        return None if not math.isfinite(v) else float(f"{v:.17g}")
    return value


def render_csv(table):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_fmt(row.get(c, math.nan)) for c in table.columns])
    return buf.getvalue()


def render_json(table):
    doc = {
        "columns": table.columns,
        "rows": [{c: _json_value(r.get(c, math.nan)) for c in table.columns} for r in table.rows],
        "summary": {k: _json_value(v) for k, v in table.summary.items()},
    }
    return json.dumps(doc, indent=1) + "\n"


def write_outputs(table, out, fmt, plot):
    text = render_csv(table) if fmt == "csv" else render_json(table)
    written = []
    if out is None:
        sys.stdout.write(text)
    else:
        out = Path(out)
        out.write_text(text)
        written.append(out)
        if fmt == "csv" and table.summary:
            side = out.with_name(out.stem + ".summary.json")
            side.write_text(json.dumps({k: _json_value(v) for k, v in table.summary.items()},
                                       indent=1) + "\n")
            written.append(side)
    if plot and table.plot:
        from .plotting import overlay
        xcol, ycols, xlabel, ylabel, markers = table.plot
        series = {c: table.column(c) for c in ycols}
        written.append(overlay(Path(out).with_suffix(".svg"), table.column(xcol), series,
                               xlabel, ylabel, markers=markers))
    return written


# ---------------------------------------------------------------- arguments

def _range_spec(text):
    """start:stop:count -> float array (count >= 2)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("sweep must be start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if count < 2:
        raise argparse.ArgumentTypeError("sweep count must be at least 2")
    return np.linspace(start, stop, count)


def _n_spec(text):
    """``6`` or an inclusive range ``2:12``."""
    try:
        if ":" in text:
            a, b = (int(t) for t in text.split(":"))
            if b < a or a < 0:
                raise ValueError
            return list(range(a, b + 1))
        n = int(text)
        if n < 0:
            raise ValueError
        return [n]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad quantum number spec {text!r}") from None


def _float_list(text):
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with option and solver defaults")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--plot", action="store_true", default=None,
                        help="also write an SVG next to --out")
    common.add_argument("--tol-ode", type=float, dest="ode_tol")
    common.add_argument("--tol-root", type=float, dest="root_tol")

    parser = argparse.ArgumentParser(prog="pnlse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("painleve", parents=[common], help="decaying P_II transcendent")
    p.add_argument("--k", type=float)
    p.add_argument("--sigma", type=int, choices=(-1, 0, 1))
    p.add_argument("--y-min", type=float, dest="y_min")
    p.add_argument("--y-max", type=float, dest="y_max")
    p.add_argument("--dy", type=float)

    p = sub.add_parser("eigenstate", parents=[common], help="one trapped eigenstate")
    p.add_argument("--potential")
    p.add_argument("--g", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--method", choices=("sc", "exact", "both"))

    p = sub.add_parser("mu-curve", parents=[common], help="mu against g for fixed n")
    p.add_argument("--potential")
    p.add_argument("--n", type=_n_spec)
    p.add_argument("--sweep", type=_range_spec, help="g range start:stop:count")
    p.add_argument("--method", choices=("sc", "exact", "both"))

    p = sub.add_parser("error-vs-n", parents=[common], help="mu_sc - mu_ex against n")
    p.add_argument("--potential")
    p.add_argument("--g", type=_float_list, help="one value or a comma list")
    p.add_argument("--n", type=_n_spec)

    p = sub.add_parser("soliton", parents=[common], help="bright soliton in a cosine lattice")
    p.add_argument("--w", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--g", type=float, help="g_eff for a sweep over w")
    p.add_argument("--sweep", type=_range_spec,
                   help="g_eff range (with --w) or w range (with --g)")
    return parser


_DEFAULTS = {
    "painleve": {"k": 0.5, "sigma": 1, "y_min": -12.0, "y_max": 8.0, "dy": 0.01},
    "eigenstate": {"potential": "harmonic", "g": 0.0, "n": 0, "method": "both"},
    "mu-curve": {"potential": "harmonic", "n": [0], "sweep": None, "method": "both"},
    "error-vs-n": {"potential": "harmonic", "g": [1.0], "n": list(range(2, 13))},
    "soliton": {"w": -0.2, "mu": None, "g": None, "sweep": None},
}
_OUTPUT_DEFAULTS = {"out": None, "format": "csv", "plot": False}
_SOLVER_KEYS = {f.name for f in fields(SolverConfig)}


def _coerce_file_value(key, value, default):
    if key == "sweep" and isinstance(value, str):
        return _range_spec(value)
    if key == "sweep" and isinstance(value, (list, tuple)):
        return _range_spec(":".join(str(v) for v in value))
    if isinstance(default, list) and key == "n" and isinstance(value, (str, int)):
        return _n_spec(str(value))
    if isinstance(default, list) and key == "g" and isinstance(value, (int, float)):
        return [float(value)]
    return value


def resolve(args):
    """Merge built-in defaults < config file < command-line flags.

    Returns (options dict, SolverConfig). Unknown config-file keys raise
    ConfigError.
    """
    command = args.command
    options = dict(_DEFAULTS[command], **_OUTPUT_DEFAULTS)
    solver = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, value in data.items():
            key = key.replace("-", "_")
            if key in _SOLVER_KEYS:
                solver[key] = value
            elif key in options:
                try:
                    options[key] = _coerce_file_value(key, value, options[key])
                except argparse.ArgumentTypeError as exc:
                    raise ConfigError(str(exc)) from None
            else:
                raise ConfigError(f"unknown config key {key!r} for {command}")
    for key, value in vars(args).items():
        if value is None or key in ("command", "config"):
            continue
        if key in _SOLVER_KEYS:
            solver[key] = value
        else:
            options[key] = value
    try:
        cfg = DEFAULT.updated(**solver)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    if options["plot"] and options["out"] is None:
        raise ConfigError("--plot needs --out")
    return options, cfg


def _threads():
    raw = os.environ.get("PNLSE_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"PNLSE_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError("PNLSE_THREADS must be at least 1")
    return value


def _parallel_map(fn, items):
    """Evaluate ``fn`` over ``items`` with at most PNLSE_THREADS workers, in order."""
    workers = min(_threads(), max(len(items), 1))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _attempt(fn, *a):
    try:
        return fn(*a), "ok"
    except PnlseError as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _join_status(*parts):
    bad = [p for p in parts if p != "ok"]
    return "; ".join(bad) if bad else "ok"


# ---------------------------------------------------------------- commands

def cmd_painleve(k, sigma, y_min=-12.0, y_max=8.0, dy=0.01, config=None):
    """Columns y, phi, phi_asymptotic_neg, k_Ai (asymptote NaN for y > -1)."""
    from .painleve import asymptotic_negative, evaluate_extended, solve_transcendent
    from .specfun import airy_ai, connection_constants

    cfg = config or DEFAULT
    if not y_min < 0 < y_max:
        raise ConfigError("need y_min < 0 < y_max")
    m = int(round((y_max - y_min) / dy))
    y = y_min + dy * np.arange(m + 1)
    kai = k * airy_ai(y)
    if sigma == 0:
        phi = kai
    else:
        sol = solve_transcendent(k, sigma, y_min=y_min, y_match=max(cfg.y_match, y_max),
                                 tol=cfg.ode_tol, blowup=cfg.blowup)
        phi = evaluate_extended(sol, y)
    constants = connection_constants(k, sigma)
    neg = np.full_like(y, math.nan)
    mask = y <= -1.0
    neg[mask] = asymptotic_negative(y[mask], constants)
    rows = [{"y": a, "phi": b, "phi_asymptotic_neg": c, "k_Ai": d}
            for a, b, c, d in zip(y, phi, neg, kai)]
    summary = {"k": k, "sigma": sigma, "d_squared": constants.d_squared, "theta": constants.theta}
    return Table(["y", "phi", "phi_asymptotic_neg", "k_Ai"], rows, summary,
                 ("y", ["phi", "phi_asymptotic_neg", "k_Ai"], "y", "phi", False))


def cmd_eigenstate(pot, g, n, method="both", config=None):
    """Wavefunctions on a shared grid plus mu_sc / mu_ex in the summary."""
    from .exact import _default_grid, solve_eigenstate_exact
    from .quantize import solve_mu_for_g

    cfg = config or DEFAULT
    sc = ex = None
    st_sc = st_ex = "ok"
    if method in ("sc", "both"):
        sc, st_sc = _attempt(solve_mu_for_g, g, pot, n, cfg)
    if method in ("exact", "both"):
        ex, st_ex = _attempt(solve_eigenstate_exact, pot, g, n, None, cfg)
    if sc is not None:
        x = sc.x_grid
    elif ex is not None:
        x = ex.x_grid
    else:
        x = _default_grid(1.0, cfg.output_dx)
    psi_sc = sc.psi if sc is not None else np.full_like(x, math.nan)
    psi_ex = ex.sample(x) if ex is not None else np.full_like(x, math.nan)
    rows = [{"x": a, "psi_sc": b, "psi_ex": c} for a, b, c in zip(x, psi_sc, psi_ex)]
    summary = {
        "potential": pot.spec(), "g": g, "n": n,
        "mu_sc": sc.mu if sc is not None else math.nan,
        "mu_ex": ex.mu if ex is not None else math.nan,
        "status": _join_status(st_sc, st_ex),
    }
    if sc is not None:
        summary.update(k=sc.k, **{k: v for k, v in sc.diagnostics.items()})
    if ex is not None:
        summary.update(decay_residual=ex.decay_residual, exact_norm_error=ex.norm_error)
    return Table(["x", "psi_sc", "psi_ex"], rows, summary,
                 ("x", ["psi_ex", "psi_sc"], "x", "psi", False))


def _mu_point(pot, g, n, method, cfg):
    from .exact import solve_eigenstate_exact
    from .quantize import solve_mu_for_g

    mu_sc = mu_ex = math.nan
    st_sc = st_ex = "ok"
    if method in ("sc", "both"):
        r, st_sc = _attempt(solve_mu_for_g, g, pot, n, cfg)
        mu_sc = r.mu if r is not None else math.nan
    if method in ("exact", "both"):
        r, st_ex = _attempt(solve_eigenstate_exact, pot, g, n, None, cfg)
        mu_ex = r.mu if r is not None else math.nan
    return {"n": n, "g": float(g), "mu_sc": mu_sc, "mu_ex": mu_ex,
            "status": _join_status(st_sc, st_ex)}


def cmd_mu_curve(pot, ns, g_values, method="both", config=None):
    cfg = config or DEFAULT
    points = [(n, float(g)) for n in ns for g in g_values]
    rows = _parallel_map(lambda p: _mu_point(pot, p[1], p[0], method, cfg), points)
    ycols = [c for c, m in (("mu_ex", "exact"), ("mu_sc", "sc")) if method in (m, "both")]
    return Table(["n", "g", "mu_sc", "mu_ex", "status"], rows, {"potential": pot.spec()},
                 ("g", ycols, "g", "mu", True))


def cmd_error_vs_n(pot, g_values, ns, config=None):
    cfg = config or DEFAULT
    points = [(float(g), n) for g in g_values for n in ns]
    rows = _parallel_map(lambda p: _mu_point(pot, p[0], p[1], "both", cfg), points)
    for r in rows:
        r["error"] = r["mu_sc"] - r["mu_ex"]
    return Table(["g", "n", "mu_sc", "mu_ex", "error", "status"], rows,
                 {"potential": pot.spec()}, ("n", ["error"], "n", "mu_sc - mu_ex", True))


def cmd_soliton_profile(w, mu, config=None):
    from .exact import solve_soliton_exact
    from .soliton import bright_in_lattice

    cfg = config or DEFAULT
    sc, st_sc = _attempt(bright_in_lattice, mu, w, cfg)
    ex, st_ex = _attempt(solve_soliton_exact, w, mu, None, cfg)
    if sc is not None:
        x = sc.x_grid
    elif ex is not None:
        x = ex.x_grid
    else:
        x = np.zeros(0)
    psi_sc = sc.psi if sc is not None else np.full_like(x, math.nan)
    psi_ex = ex.sample(x) if ex is not None else np.full_like(x, math.nan)
    rows = [{"x": a, "psi_sc": b, "psi_ex": c} for a, b, c in zip(x, psi_sc, psi_ex)]
    summary = {"w": w, "mu": mu,
               "g_sc": sc.g_eff if sc is not None else math.nan,
               "g_ex": ex.g_eff if ex is not None else math.nan,
               "status": _join_status(st_sc, st_ex)}
    if sc is not None:
        summary.update(a=sc.a, chi2=sc.chi2)
    return Table(["x", "psi_sc", "psi_ex"], rows, summary,
                 ("x", ["psi_ex", "psi_sc"], "x", "psi", False))


def cmd_soliton_sweep(w=None, g_values=None, g_eff=None, w_values=None, config=None):
    from .soliton import soliton_point

    cfg = config or DEFAULT
    if g_values is not None:
        points = [(float(g), float(w)) for g in g_values]
        xcol = "g_eff"
    else:
        points = [(float(g_eff), float(v)) for v in w_values]
        xcol = "w"
    rows = _parallel_map(lambda p: soliton_point(p[0], p[1], cfg), points)
    return Table(["g_eff", "w", "mu_sc", "mu_ex", "status"], rows, {},
                 (xcol, ["mu_ex", "mu_sc"], xcol, "mu", False))


def run(options, cfg, command):
    if command == "painleve":
        return cmd_painleve(options["k"], options["sigma"], options["y_min"], options["y_max"],
                            options["dy"], cfg)
    if command == "soliton":
        if options["sweep"] is not None:
            if options["g"] is not None:
                return cmd_soliton_sweep(g_eff=options["g"], w_values=options["sweep"],
                                         config=cfg)
            return cmd_soliton_sweep(w=options["w"], g_values=options["sweep"], config=cfg)
        if options["mu"] is None:
            raise ConfigError("soliton needs --mu, or --sweep with --w or --g")
        return cmd_soliton_profile(options["w"], options["mu"], cfg)
    pot = Potential.parse(options["potential"])
    if pot.kind not in ("wedge", "harmonic"):
        raise ConfigError(f"{command} needs a wedge or harmonic potential")
    if command == "eigenstate":
        return cmd_eigenstate(pot, options["g"], options["n"], options["method"], cfg)
    if command == "mu-curve":
        if options["sweep"] is None:
            raise ConfigError("mu-curve needs --sweep start:stop:count over g")
        return cmd_mu_curve(pot, options["n"], options["sweep"], options["method"], cfg)
    if command == "error-vs-n":
        return cmd_error_vs_n(pot, options["g"], options["n"], cfg)
    raise ConfigError(f"unknown command {command!r}")


_VALUE_FLAGS = ("--sweep", "--g", "--n")


def _glue_negative_values(argv):
    """Let ``--sweep -6:-1.5:10`` through: argparse would take the value for an option."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and len(argv[i + 1]) > 1 and (argv[i + 1][1].isdigit() or argv[i + 1][1] == "."):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        options, cfg = resolve(args)
        table = run(options, cfg, args.command)
    except (ConfigError, ValueError) as exc:
        print(f"pnlse: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PnlseError as exc:
        print(f"pnlse: solver failed: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    write_outputs(table, options["out"], options["format"], options["plot"])
    if table.failed:
        print("pnlse: some points did not converge (see the status column)", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
