"""Command-line front end: ``newtpot <command> [options]``.

Every command writes CSV or JSON to ``--out`` (standard output when
omitted).  Exit status is 0 on success, 2 for invalid input and 1 when a
computation fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import ball, disc, galerkin, scaling
from .domains import Domain2D
from .specfun import bessel_j
from .errors import (
    DomainError,
    MeshError,
    NewtpotError,
    PreconditionError,
    UnsupportedOrderError,
    UnsupportedRegimeError,
)

VALIDATION_ERRORS = (DomainError, MeshError, PreconditionError, UnsupportedOrderError, UnsupportedRegimeError)

COLUMNS = {
    "disc-spectrum": ["k", "j", "mu", "lambda", "int_normalized"],
    "ball-spectrum": ["l", "j", "mu", "lambda", "int_normalized"],
    "domain-spectrum": ["n", "lambda", "integral", "residual"],
    "sweep": ["a", "n", "quantity", "value", "fit_residual"],
    "psi-samples": ["x", "psi"],
}

EPILOG = """\
CSV columns (fixed order):
  disc-spectrum    k,j,mu,lambda,int_normalized   (rows by decreasing lambda)
  ball-spectrum    l,j,mu,lambda,int_normalized   (m = 0 representative per (l, j))
  domain-spectrum  n,lambda,integral,residual
  sweep            a,n,quantity,value,fit_residual
                   (fit_residual: log-space residual of the power-log fit,
                    or of the power fit when a = 1 is in the sweep)
  psi-samples      x,psi                          (psi = J0(x) + 2 log(a) x J1(x))
monotonicity always writes a JSON report.

Floats are written with 17 significant digits.  --config FILE takes a JSON
object whose keys are the long option names of the command (dashes or
underscores); explicit flags win over the file.  NEWTPOT_THREADS caps the
number of assembly workers.
"""

SCHEMAS = {
    "monotonicity": {
        "type": "object",
        "required": ["backend", "tau", "all_pass", "modes"],
        "additionalProperties": False,
        "properties": {
            "backend": {"type": "string"},
            "tau": {"type": "number"},
            "all_pass": {"type": "boolean"},
            "modes": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["k", "inner", "outer", "pass"],
                    "additionalProperties": False,
                    "properties": {
                        "k": {"type": "integer"},
                        "inner": {"type": "number"},
                        "outer": {"type": "number"},
                        "pass": {"type": "boolean"},
                    },
                },
            },
        },
    },
    "table": {
        "type": "object",
        "required": ["command", "columns", "rows"],
        "additionalProperties": False,
        "properties": {
            "command": {"type": "string"},
            "columns": {"type": "array", "items": {"type": "string"}},
            "rows": {"type": "array", "items": {"type": "array"}},
            "fits": {"type": "array", "items": {"type": "object"}},
        },
    },
}


class ConfigError(ValueError):
    pass


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def render_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def render_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _table(command, rows, fmt_name, extra=None) -> str:
    cols = COLUMNS[command]
    if fmt_name == "json":
        obj = {"command": command, "columns": cols, "rows": rows}
        if extra:
            obj.update(extra)
        return render_json(obj)
    return render_csv(cols, rows)


# --- commands ----------------------------------------------------------------


def _positive(name, value):
    if value is None or not (math.isfinite(value) and value > 0):
        raise ConfigError(f"--{name} must be a positive number, got {value}")


def _count(name, value, low=1):
    if value is None or value < low:
        raise ConfigError(f"--{name} must be an integer >= {low}, got {value}")


def cmd_disc_spectrum(args) -> str:
    _positive("a", args.a)
    _count("kmax", args.kmax, 0)
    _count("jmax", args.jmax)
    pairs = disc.disc_eigenvalues(disc.DiscSpec(args.a, args.kmax, args.jmax), args.log_weight)
    rows = [[p.k, p.j, p.mu.value, p.lam, p.int_normalized] for p in pairs]
    return _table("disc-spectrum", rows, args.format)


def cmd_ball_spectrum(args) -> str:
    _positive("a", args.a)
    _count("lmax", args.lmax, 0)
    _count("jmax", args.jmax)
    rows = []
    for p in ball.ball_eigenvalues(args.a, args.lmax, args.jmax):
        value = ball.ball_normalized_integral((p.l - 1) // 2, p.j, args.a) if p.l % 2 else 0.0
        rows.append([p.l, p.j, p.mu, p.lam, value])
    return _table("ball-spectrum", rows, args.format)


def _load_domain(path: str) -> Domain2D:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read domain file {path!r}: {exc.strerror}") from None
    return Domain2D.from_json(text)


def cmd_domain_spectrum(args) -> str:
    if args.domain is None:
        raise ConfigError("--domain is required")
    _count("cells", args.cells, galerkin.MIN_CELLS)
    _count("modes", args.modes)
    dom = _load_domain(args.domain)
    mesh, _, res = galerkin.galerkin_spectrum(dom, args.cells, args.modes)
    rows = [
        [n, lam, galerkin.eigfun_integral(res, mesh, n), res.residuals[n]]
        for n, lam in enumerate(res.eigenvalues)
    ]
    return _table("domain-spectrum", rows, args.format)


def cmd_monotonicity(args) -> str:
    if args.inner is None or args.outer is None:
        raise ConfigError("--inner and --outer are required")
    _count("modes", args.modes)
    _count("cells", args.cells, galerkin.MIN_CELLS)
    if not (math.isfinite(args.tau) and args.tau >= 0):
        raise ConfigError(f"--tau must be >= 0, got {args.tau}")
    report = galerkin.monotonicity_check(
        _load_domain(args.inner), _load_domain(args.outer), args.modes, args.cells, args.tau, args.backend
    )
    return render_json(report.to_dict())


def _a_values(text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        items = [t for t in str(text).split(",") if t.strip()]
    try:
        values = tuple(float(t) for t in items)
    except ValueError:
        raise ConfigError(f"--a-values must be a comma-separated list of numbers, got {text!r}") from None
    return values


def cmd_sweep(args) -> str:
    backend = args.backend or (
        "closed-form-disc" if args.family == "disc" else "closed-form-ball" if args.family == "ball" else "galerkin"
    )
    if args.a_values is None:
        a_values = (1.0, 0.5, 0.1, 0.02) if args.family == "ball" else (
            scaling.CLOSED_FORM_SWEEP if backend.startswith("closed") else scaling.GALERKIN_SWEEP
        )
    else:
        a_values = tuple(sorted(_a_values(args.a_values), reverse=True))
    _count("modes", args.modes)
    _count("cells", args.cells, galerkin.MIN_CELLS)
    quantities = args.quantity or ["lambda:0", "integral:0"]
    if isinstance(quantities, str):
        quantities = [quantities]
    parsed = [scaling.parse_quantity(q) for q in quantities]
    config = scaling.SweepConfig(args.family, a_values, args.modes, backend, args.cells)
    sweep = scaling.run_sweep(config)
    a = sweep.a_values
    rows, fits = [], []
    for kind, n in parsed:
        if n >= sweep.eigenvalues.shape[1]:
            raise ConfigError(f"quantity {kind}:{n} needs --modes > {n}")
        y = (sweep.eigenvalues if kind == "lambda" else sweep.integrals)[:, n]
        model = scaling.fit_power_law if np.any(a >= 1) else scaling.fit_power_log_law
        fit = model(a, y)
        log_a = np.log(a)
        pred = math.log(fit.C) + fit.p * log_a
        if fit.model == "power-log":
            pred = pred + fit.q * np.log(np.abs(log_a))
        resid = np.log(y) - pred
        fits.append({"quantity": f"{kind}:{n}", **fit.__dict__})
        rows.extend([ai, n, kind, yi, ri] for ai, yi, ri in zip(a, y, resid))
    return _table("sweep", rows, args.format, {"fits": fits} if args.format == "json" else None)


def cmd_psi_samples(args) -> str:
    if args.a_log is None or not math.isfinite(args.a_log) or args.a_log >= 0:
        raise ConfigError(f"--a-log must be a negative number (log of a radius a < 1), got {args.a_log}")
    _positive("xmax", args.xmax)
    _count("points", args.points, 2)
    rows = []
    for x in np.linspace(0.0, args.xmax, args.points):
        # log(a) enters directly, so radii far below the float range still work
        rows.append([x, bessel_j(0, x) + 2.0 * args.a_log * x * bessel_j(1, x)])
    return _table("psi-samples", rows, args.format)


COMMANDS = {
    "disc-spectrum": cmd_disc_spectrum,
    "ball-spectrum": cmd_ball_spectrum,
    "domain-spectrum": cmd_domain_spectrum,
    "monotonicity": cmd_monotonicity,
    "sweep": cmd_sweep,
    "psi-samples": cmd_psi_samples,
}

DEFAULTS = {
    "disc-spectrum": {"kmax": 3, "jmax": 3, "log_weight": 1.0, "format": "csv"},
    "ball-spectrum": {"lmax": 3, "jmax": 3, "format": "csv"},
    "domain-spectrum": {"cells": 400, "modes": 6, "format": "csv"},
    "monotonicity": {"modes": 10, "cells": 400, "tau": 0.02, "backend": "galerkin"},
    "sweep": {"family": "disc", "modes": 6, "cells": 400, "format": "csv"},
    "psi-samples": {"a_log": -20.0, "xmax": 12.0, "points": 1200, "format": "csv"},
}


OPTION_TYPES: dict[str, dict[str, tuple]] = {}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="newtpot",
        description="Eigenvalues of logarithmic and Newtonian potential operators.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    class Command:
        def __init__(self, name, help_text):
            self.name = name
            self.parser = sub.add_parser(
                name, help=help_text, epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter
            )
            self.parser.add_argument("--config", help="JSON file with option values")
            self.types = OPTION_TYPES.setdefault(name, {})
            self.add_argument("--out", help="output path (default: standard output)")

        def add_argument(self, flag, **kw):
            action = self.parser.add_argument(flag, **kw)
            self.types[action.dest] = (kw.get("type"), kw.get("choices"))

    def add(name, help_text):
        return Command(name, help_text)

    def fmt_opt(p):
        p.add_argument("--format", choices=["csv", "json"])

    p = add("disc-spectrum", "closed-form disc eigenvalues")
    p.add_argument("--a", type=float, help="disc radius, 0 < a <= 1")
    p.add_argument("--kmax", type=int)
    p.add_argument("--jmax", type=int)
    p.add_argument("--log-weight", type=float, help="coefficient of log(a) in the radial equation (default 1)")
    fmt_opt(p)

    p = add("ball-spectrum", "closed-form ball eigenvalues")
    p.add_argument("--a", type=float, help="ball radius")
    p.add_argument("--lmax", type=int)
    p.add_argument("--jmax", type=int)
    fmt_opt(p)

    p = add("domain-spectrum", "Galerkin eigenvalues of a 2D domain")
    p.add_argument("--domain", help="domain JSON file")
    p.add_argument("--cells", type=int)
    p.add_argument("--modes", type=int)
    fmt_opt(p)

    p = add("monotonicity", "compare eigenvalues of nested domains (JSON report)")
    p.add_argument("--inner", help="inner domain JSON file")
    p.add_argument("--outer", help="outer domain JSON file")
    p.add_argument("--modes", type=int)
    p.add_argument("--cells", type=int)
    p.add_argument("--tau", type=float)
    p.add_argument("--backend", choices=["galerkin", "closed-form"])

    p = add("sweep", "radius sweep with log-space fits")
    p.add_argument("--family", choices=["disc", "square", "ellipse", "ball"])
    p.add_argument("--backend", choices=list(scaling.BACKENDS))
    p.add_argument("--a-values", help="comma-separated radii")
    p.add_argument("--modes", type=int)
    p.add_argument("--cells", type=int)
    p.add_argument("--quantity", action="append", help="lambda:N or integral:N (repeatable)")
    fmt_opt(p)

    p = add("psi-samples", "samples of J0(x) + 2 log(a) x J1(x)")
    p.add_argument("--a-log", type=float, help="log of the radius (negative)")
    p.add_argument("--xmax", type=float)
    p.add_argument("--points", type=int)
    fmt_opt(p)
    return parser


def _apply_config(args) -> None:
    """Fill unset options from --config, then from the command defaults."""
    command = args.command
    types = OPTION_TYPES[command]
    values = dict(DEFAULTS[command])
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        data = {k.replace("-", "_"): v for k, v in data.items()}
        if data.pop("command", command) != command:
            raise ConfigError(f"config is for a different command than {command}")
        unknown = sorted(set(data) - set(types))
        if unknown:
            raise ConfigError(f"unknown config field(s) for {command}: {unknown}")
        for key, value in data.items():
            kind, choices = types[key]
            if kind is not None and key != "a_values":
                if isinstance(value, bool) or not isinstance(value, (int, float, str)):
                    raise ConfigError(f"{key} must be a {kind.__name__}, got {value!r}")
                try:
                    value = kind(value)
                except ValueError:
                    raise ConfigError(f"{key} must be a {kind.__name__}, got {value!r}") from None
            if choices is not None and value not in choices:
                raise ConfigError(f"{key} must be one of {list(choices)}")
            values[key] = value
    for key, value in values.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        galerkin.thread_count()
        _apply_config(args)
        text = COMMANDS[args.command](args)
        _emit(text, args.out)
    except (ConfigError, *VALIDATION_ERRORS) as exc:
        print(f"newtpot: error: {exc}", file=sys.stderr)
        return 2
    except (NewtpotError, ArithmeticError, OSError) as exc:
        print(f"newtpot: computation failed: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
