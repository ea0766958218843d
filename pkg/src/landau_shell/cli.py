"""Command-line front end.

Commands::

    landau-shell levels   --B 1 --m -2..2 --window 0:8
    landau-shell spectrum --B 1 --R 1 --kind delta --alpha -3 --beta 0 --m -2..2 --window -5:8
    landau-shell scan     --B 1 --R 1 --alpha 1 --m 0 --spin up --window 0.5:7.5 --points 200
    landau-shell green    --B 1 --R 1 --alpha 1 --m 0 --spin up --E 1.3 --r-grid 0.1:3:30
    landau-shell verify   --criteria 1,4,8

Settings resolve as command-line flag, then ``--config`` JSON file, then
built-in default.  Exit status: 0 success, 1 numerical failure, 2 usage or
configuration error (nothing is written in that case).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .channel import ChannelParams, InteractionKind, SpinBranch, landau_levels
from .greens import green_samples
from .spectral import InteractionSpec, SolverOptions, secular, spectrum

__all__ = ["ConfigError", "RunConfig", "SPECTRUM_SCHEMA", "build_parser", "load_config", "run", "main"]

COMMANDS = ("levels", "spectrum", "scan", "green", "verify")

DEFAULTS = {
    "B": 1.0,
    "R": 1.0,
    "kind": "delta",
    "alpha": 0.0,
    "beta": 0.0,
    "alpha_map": {},
    "beta_map": {},
    "m": (0, 0),
    "spin": "up",
    "window": (0.0, 8.0),
    "grid_step": None,
    "root_tol": 1e-10,
    "points": 201,
    "E": None,
    "r_grid": (0.1, 3.0, 30),
    "rp_grid": None,
    "criteria": None,
    "format": "csv",
    "path": None,
}

_NUMFMT = ".17g"

SPECTRUM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["metadata", "roots", "failures", "warnings"],
    "properties": {
        "metadata": {
            "type": "object",
            "required": ["command", "B", "m_range", "window", "grid_step", "root_tol", "interaction"],
            "properties": {
                "command": {"const": "spectrum"},
                "B": {"type": "number", "exclusiveMinimum": 0},
                "m_range": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                "window": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                "grid_step": {"type": "number", "exclusiveMinimum": 0},
                "root_tol": {"type": "number", "exclusiveMinimum": 0},
                "timestamp": {"type": "string"},
                "interaction": {
                    "type": "object",
                    "required": ["kind", "radius", "alpha", "beta", "alpha_map", "beta_map"],
                    "properties": {
                        "kind": {"enum": ["delta", "delta_prime"]},
                        "radius": {"type": "number", "exclusiveMinimum": 0},
                        "alpha": {"type": "number"},
                        "beta": {"type": "number"},
                        "alpha_map": {"type": "object", "additionalProperties": {"type": "number"}},
                        "beta_map": {"type": "object", "additionalProperties": {"type": "number"}},
                    },
                },
            },
        },
        "roots": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["m", "component", "energy", "residual", "bracket", "converged"],
                "properties": {
                    "m": {"type": "integer"},
                    "component": {"enum": ["up", "down"]},
                    "energy": {"type": "number"},
                    "residual": {"type": "number", "minimum": 0},
                    "bracket": {"type": "array", "items": {"type": "number"},
                                "minItems": 2, "maxItems": 2},
                    "converged": {"type": "boolean"},
                },
            },
        },
        "failures": {"type": "array", "items": {"type": "string"}},
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
}


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending setting."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class NumericFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec: InteractionSpec
    B: float
    m_range: tuple[int, int]
    spin: SpinBranch
    window: tuple[float, float]
    options: SolverOptions
    points: int
    energy: float | None
    r_grid: tuple[float, float, int]
    rp_grid: tuple[float, float, int]
    criteria: tuple[int, ...]
    fmt: str
    path: str | None
    timestamp: bool


# ------------------------------------------------------------------ parsing


def _parse_window(text, field="window"):
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(":")
    if len(parts) != 2:
        raise ConfigError(field, f"expected 'lo:hi', got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except (TypeError, ValueError):
        raise ConfigError(field, f"non-numeric bounds in {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ConfigError(field, "bounds must be finite")
    if not lo < hi:
        raise ConfigError(field, f"need lo < hi, got {lo:g}:{hi:g}")
    return lo, hi


def _parse_m(text):
    if isinstance(text, (list, tuple)):
        parts = list(text)
    elif isinstance(text, int):
        parts = [text, text]
    else:
        s = str(text)
        parts = s.split("..") if ".." in s else [s, s]
    if len(parts) != 2:
        raise ConfigError("m", f"expected 'lo..hi' or a single integer, got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except (TypeError, ValueError):
        raise ConfigError("m", f"non-integer bounds in {text!r}") from None
    if lo > hi:
        raise ConfigError("m", f"need lo <= hi, got {lo}..{hi}")
    return lo, hi


def _parse_grid(text, field):
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(":")
    if len(parts) != 3:
        raise ConfigError(field, f"expected 'lo:hi:n', got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (TypeError, ValueError):
        raise ConfigError(field, f"malformed grid {text!r}") from None
    if not (0 < lo <= hi and math.isfinite(hi)) or n < 1:
        raise ConfigError(field, "need 0 < lo <= hi and n >= 1")
    return lo, hi, n


def _number(value, field, positive=False):
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ConfigError(field, f"expected a number, got {value!r}") from None
    if not math.isfinite(x) or (positive and x <= 0):
        raise ConfigError(field, f"must be finite{' and > 0' if positive else ''}, got {value!r}")
    return x


def _coupling_map(raw, field):
    if not isinstance(raw, dict):
        raise ConfigError(field, "expected a JSON object keyed by integer m")
    out = {}
    for key, value in raw.items():
        try:
            m = int(key)
        except (TypeError, ValueError):
            raise ConfigError(field, f"key {key!r} is not an integer") from None
        out[m] = _number(value, f"{field}[{key}]")
    return out


def load_config(path: str) -> dict:
    """Flatten a JSON config file into the setting names used by the flags."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{path} line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("config", "top level must be an object")
    known = {"physics": {"B", "R", "kind", "alpha", "beta", "alpha_map", "beta_map"},
             "numerics": {"window", "grid_step", "root_tol"},
             "output": {"format", "path"}}
    flat = {}
    for section, values in data.items():
        if section not in known:
            raise ConfigError(section, "unknown config section")
        if not isinstance(values, dict):
            raise ConfigError(section, "section must be an object")
        for key, value in values.items():
            if key not in known[section]:
                raise ConfigError(f"{section}.{key}", "unknown key")
            flat[key] = value
    return flat


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="landau-shell",
        description="Spectra and Green kernels of the Landau operator with a delta or "
                    "delta-prime shell interaction.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (flags take precedence)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--output", dest="path", help="output file (default: standard output)")
    common.add_argument("--timestamp", action="store_true",
                        help="add a generation timestamp to the metadata header")

    physics = argparse.ArgumentParser(add_help=False)
    physics.add_argument("--B", type=str, help="field strength B > 0")
    physics.add_argument("--R", type=str, help="shell radius R > 0")
    physics.add_argument("--kind", choices=[k.value for k in InteractionKind])
    physics.add_argument("--alpha", type=str, help="default spin-up coupling")
    physics.add_argument("--beta", type=str, help="default spin-down coupling")
    physics.add_argument("--grid-step", dest="grid_step", type=str, help="energy grid step")
    physics.add_argument("--root-tol", dest="root_tol", type=str, help="root tolerance in E")

    p = sub.add_parser("levels", parents=[common], help="closed-form Landau levels")
    p.add_argument("--B", type=str)
    p.add_argument("--m", help="angular range 'lo..hi' or one integer")
    p.add_argument("--window", help="energy window 'lo:hi'")

    p = sub.add_parser("spectrum", parents=[common, physics], help="eigenvalues in a window")
    p.add_argument("--m", help="angular range 'lo..hi' or one integer")
    p.add_argument("--window", help="energy window 'lo:hi'")

    p = sub.add_parser("scan", parents=[common, physics], help="secular function table")
    p.add_argument("--m", help="angular quantum number")
    p.add_argument("--spin", choices=[s.value for s in SpinBranch])
    p.add_argument("--window", help="energy window 'lo:hi'")
    p.add_argument("--points", type=str, help="number of energies (default 201)")

    p = sub.add_parser("green", parents=[common, physics], help="perturbed Green kernel samples")
    p.add_argument("--m", help="angular quantum number")
    p.add_argument("--spin", choices=[s.value for s in SpinBranch])
    p.add_argument("--E", type=str, help="energy (must avoid the spectrum)")
    p.add_argument("--r-grid", dest="r_grid", help="'lo:hi:n' for r")
    p.add_argument("--rp-grid", dest="rp_grid", help="'lo:hi:n' for r' (default: same as r)")

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    return parser


_VALUE_FLAGS = {"--m", "--window", "--alpha", "--beta", "--E", "--r-grid", "--rp-grid", "--B", "--R"}


def _merge_negative_values(argv):
    # argparse reads '-2..2' or '-0.5:8' as an option; glue them to their flag
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def resolve(ns: argparse.Namespace) -> RunConfig:
    """Merge flags over the config file over defaults, validating every field."""
    settings = dict(DEFAULTS)
    if getattr(ns, "config", None):
        settings.update(load_config(ns.config))
    for key in DEFAULTS:
        value = getattr(ns, key, None)
        if value is not None:
            settings[key] = value

    fmt = settings["format"]
    if fmt not in ("csv", "json"):
        raise ConfigError("format", f"expected csv or json, got {fmt!r}")
    B = _number(settings["B"], "B", positive=True)
    R = _number(settings["R"], "R", positive=True)
    try:
        kind = InteractionKind(settings["kind"])
    except ValueError:
        raise ConfigError("kind", f"expected delta or delta_prime, got {settings['kind']!r}") from None
    try:
        spin = SpinBranch(settings["spin"])
    except ValueError:
        raise ConfigError("spin", f"expected up or down, got {settings['spin']!r}") from None
    spec = InteractionSpec(kind, R, _coupling_map(settings["alpha_map"], "alpha_map"),
                           _coupling_map(settings["beta_map"], "beta_map"),
                           _number(settings["alpha"], "alpha"), _number(settings["beta"], "beta"))
    grid_step = settings["grid_step"]
    grid_step = None if grid_step is None else _number(grid_step, "grid_step", positive=True)
    options = SolverOptions(grid_step, _number(settings["root_tol"], "root_tol", positive=True))
    try:
        points = int(settings["points"])
    except (TypeError, ValueError):
        raise ConfigError("points", f"expected an integer, got {settings['points']!r}") from None
    if points < 2:
        raise ConfigError("points", "need at least 2 points")
    energy = settings["E"]
    if ns.command == "green":
        if energy is None:
            raise ConfigError("E", "the green command needs --E")
        energy = _number(energy, "E")
    r_grid = _parse_grid(settings["r_grid"], "r_grid")
    rp_grid = r_grid if settings["rp_grid"] is None else _parse_grid(settings["rp_grid"], "rp_grid")
    criteria = tuple(range(1, 11))
    if settings["criteria"]:
        try:
            criteria = tuple(sorted({int(x) for x in str(settings["criteria"]).split(",")}))
        except ValueError:
            raise ConfigError("criteria", f"expected integers, got {settings['criteria']!r}") from None
        if not all(1 <= c <= 10 for c in criteria):
            raise ConfigError("criteria", "criteria are numbered 1..10")
    m_range = _parse_m(settings["m"])
    if ns.command in ("scan", "green") and m_range[0] != m_range[1]:
        raise ConfigError("m", f"the {ns.command} command takes a single m")
    return RunConfig(ns.command, spec, B, m_range, spin, _parse_window(settings["window"]),
                     options, points, energy, r_grid, rp_grid, criteria, fmt, settings["path"],
                     bool(getattr(ns, "timestamp", False)))


# ------------------------------------------------------------------ output


def _fmt(x) -> str:
    return format(float(x), _NUMFMT)


def _csv(header, rows, meta_line=None) -> str:
    buf = io.StringIO()
    if meta_line:
        buf.write(f"# {meta_line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _metadata(cfg: RunConfig, **extra) -> dict:
    meta = {"command": cfg.command, **extra}
    if cfg.timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return meta


def _json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False, allow_nan=False) + "\n"


def _emit(cfg: RunConfig, header, rows, meta, extra=None) -> str:
    if cfg.fmt == "csv":
        stamp = f"generated {meta['timestamp']}" if "timestamp" in meta else None
        return _csv(header, rows, stamp)
    payload = {"metadata": meta, "rows": [dict(zip(header, row)) for row in rows]}
    if extra:
        payload.update(extra)
    return _json(payload)


# ---------------------------------------------------------------- commands


def _channels(cfg: RunConfig):
    return [ChannelParams(cfg.B, m, branch) for m in range(cfg.m_range[0], cfg.m_range[1] + 1)
            for branch in (SpinBranch.UP, SpinBranch.DOWN)]


def _cmd_levels(cfg: RunConfig) -> tuple[str, list[str]]:
    lo, hi = cfg.window
    rows = []
    for ch in _channels(cfg):
        for n, E in enumerate(landau_levels(ch, hi)):
            if E >= lo:
                rows.append((ch.angular, ch.spin_branch.value, n, float(E)))
    rows.sort(key=lambda row: (row[3], row[0], row[1]))
    meta = _metadata(cfg, B=cfg.B, m_range=list(cfg.m_range), window=list(cfg.window))
    return _emit(cfg, ["m", "component", "n", "energy"], rows, meta), []


def _cmd_spectrum(cfg: RunConfig) -> tuple[str, list[str]]:
    report = spectrum(cfg.spec, cfg.B, cfg.m_range, cfg.window, cfg.options)
    meta = _metadata(cfg, B=cfg.B, m_range=list(cfg.m_range), window=list(cfg.window),
                     grid_step=report.grid_step, root_tol=report.root_tol,
                     interaction=cfg.spec.to_dict())
    if cfg.fmt == "csv":
        rows = [(root.channel.angular, root.component.value, root.energy, root.residual)
                for root in report.roots]
        text = _emit(cfg, ["m", "component", "energy", "residual"], rows, meta)
    else:
        roots = [{"m": root.channel.angular, "component": root.component.value,
                  "energy": root.energy, "residual": root.residual,
                  "bracket": list(root.bracket), "converged": root.converged}
                 for root in report.roots]
        text = _json({"metadata": meta, "roots": roots, "failures": report.failures,
                      "warnings": report.warnings})
    failures = list(report.failures)
    failures += [f"channel {r.channel}: unconverged root near {r.energy!r}"
                 for r in report.roots if not r.converged]
    return text, failures


def _cmd_scan(cfg: RunConfig) -> tuple[str, list[str]]:
    ch = ChannelParams(cfg.B, cfg.m_range[0], cfg.spin)
    energies = np.linspace(cfg.window[0], cfg.window[1], cfg.points)
    try:
        rows = [(float(E), float(secular(float(E), ch, cfg.spec))) for E in energies]
    except (ArithmeticError, ValueError) as exc:
        raise NumericFailure(f"channel {ch}: {exc}") from exc
    meta = _metadata(cfg, channel={"B": cfg.B, "m": ch.angular, "component": ch.spin_branch.value},
                     interaction=cfg.spec.to_dict())
    return _emit(cfg, ["energy", "secular_value"], rows, meta), []


def _cmd_green(cfg: RunConfig) -> tuple[str, list[str]]:
    ch = ChannelParams(cfg.B, cfg.m_range[0], cfg.spin)
    rs = np.linspace(*cfg.r_grid[:2], cfg.r_grid[2])
    rps = np.linspace(*cfg.rp_grid[:2], cfg.rp_grid[2])
    try:
        samples = green_samples(cfg.energy, rs, rps, ch, cfg.spec)
    except (ArithmeticError, ValueError) as exc:
        raise NumericFailure(f"channel {ch}: {exc}") from exc
    rows = [(s.r, s.r_prime, s.value) for s in samples]
    meta = _metadata(cfg, energy=cfg.energy,
                     channel={"B": cfg.B, "m": ch.angular, "component": ch.spin_branch.value},
                     interaction=cfg.spec.to_dict())
    return _emit(cfg, ["r", "r_prime", "value"], rows, meta), []


def _cmd_verify(cfg: RunConfig) -> tuple[str, list[str]]:
    from .verification import run_all

    results = run_all(cfg.criteria)
    for res in results:
        print(res.line(), file=sys.stderr)
    header = ["criterion", "name", "passed", "measured", "tolerance", "elapsed", "detail"]
    rows = [(r.number, r.name, str(r.passed).lower(), float(r.measured), float(r.tolerance),
             float(r.elapsed), r.detail) for r in results]
    if cfg.fmt == "json":
        payload = {"metadata": _metadata(cfg),
                   "results": [{"criterion": r.number, "name": r.name, "passed": r.passed,
                                "measured": r.measured if math.isfinite(r.measured) else None,
                                "tolerance": r.tolerance, "elapsed": r.elapsed,
                                "detail": r.detail} for r in results]}
        text = _json(payload)
    else:
        text = _emit(cfg, header, rows, _metadata(cfg))
    failed = [f"criterion {r.number} ({r.name}) failed" for r in results if not r.passed]
    return text, failed


_HANDLERS = {
    "levels": _cmd_levels,
    "spectrum": _cmd_spectrum,
    "scan": _cmd_scan,
    "green": _cmd_green,
    "verify": _cmd_verify,
}


def run(cfg: RunConfig, stdout=None) -> int:
    """Execute a resolved configuration and write its artifact; returns the exit status."""
    stdout = stdout or sys.stdout
    try:
        text, failures = _HANDLERS[cfg.command](cfg)
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1
    if cfg.path:
        with open(cfg.path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    for msg in failures:
        print(f"numeric failure: {msg}", file=sys.stderr)
    return 1 if failures else 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(_merge_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(ns)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
