"""Command-line interface: scenario runs, sweeps, CSV/JSON emission.

Commands
--------
single-photon   closed-form and integrated single-photon reflectivity
transport       bidirectional steady-state transport at one working point
sweep-map       efficiency map over (detuning, phase) at fixed flux
sweep-power     transport and excitation versus input flux
gamma-scan      efficiency versus the coupling ratio gamma2/gamma1
validate        built-in oracle suite (prints PASS/FAIL per check)

Flags override values from an optional ``--config FILE`` JSON document
whose keys are the flag names (dashes or underscores).  Output files
are written atomically; exit codes are 0 on success, 1 on solver or
I/O failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass, fields
from typing import Any, Sequence

import numpy as np

from . import __version__
from .coherent import (
    CorrelatorState,
    SolverError,
    assemble_system,
    integrate_transient,
    steady_state,
    transport,
)
from .scenario import AtomParams, DiodeConfig, Direction, DriveConfig, ValidationError, validate
from .singlephoton import reflectivity_closed_form, reflectivity_numeric, single_atom_reflection
from .sweep import (
    DEFAULT_BANDWIDTH,
    SweepGrid,
    SweepRow,
    SweepTable,
    gamma_ratio_scan,
    sweep_map,
    sweep_power,
)

TWO_PI = 2.0 * math.pi

CSV_HEADER = "delta,theta,flux,T_fwd,T_bwd,L,P1_L,P2_L,P12_L,P1_R,P2_R,P12_R"
GAMMA_SCAN_HEADER = "gamma_ratio,L"
SINGLE_PHOTON_HEADER = "delta1,delta2,theta,R_closed,R_numeric"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

_DEFAULTS = {
    "delta": 0.12,
    "delta2": 0.0,
    "gamma1": 1.0,
    "gamma2": 1.0,
    "theta_frac": 0.982,
    "flux": 0.1,
    "bandwidth": DEFAULT_BANDWIDTH,
    "delta_min": -2.0,
    "delta_max": 2.0,
    "delta_points": 81,
    "theta_points": 81,
    "flux_min": 1e-6,
    "flux_max": 1e2,
    "points": 60,
    "ratios": "0.25,0.5,1,2,4",
    "format": "csv",
}

_DEFAULT_OUT = {
    "single-photon": "single_photon",
    "transport": "transport",
    "sweep-map": "sweep_map",
    "sweep-power": "sweep_power",
    "gamma-scan": "gamma_scan",
}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation: one command plus its parameters."""

    command: str
    delta: float = _DEFAULTS["delta"]
    delta2: float = _DEFAULTS["delta2"]
    gamma1: float = _DEFAULTS["gamma1"]
    gamma2: float = _DEFAULTS["gamma2"]
    theta: float = TWO_PI * _DEFAULTS["theta_frac"]
    flux: float = _DEFAULTS["flux"]
    bandwidth: float = _DEFAULTS["bandwidth"]
    delta_min: float = _DEFAULTS["delta_min"]
    delta_max: float = _DEFAULTS["delta_max"]
    delta_points: int = _DEFAULTS["delta_points"]
    theta_points: int = _DEFAULTS["theta_points"]
    flux_min: float = _DEFAULTS["flux_min"]
    flux_max: float = _DEFAULTS["flux_max"]
    points: int = _DEFAULTS["points"]
    ratios: tuple[float, ...] = (0.25, 0.5, 1.0, 2.0, 4.0)
    out: str = ""
    format: str = "csv"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wgdiode",
        description="Two-atom waveguide optical diode simulator",
    )
    parser.add_argument("--version", action="version", version=f"wgdiode {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_flags(p: argparse.ArgumentParser, power: bool = True) -> None:
        p.add_argument("--delta", type=float, help="detuning of atom 1 (gamma units)")
        p.add_argument("--delta2", type=float, help="detuning of atom 2 (default 0)")
        p.add_argument("--gamma1", type=float, help="decay rate of atom 1 (default 1)")
        p.add_argument("--gamma2", type=float, help="decay rate of atom 2 (default 1)")
        p.add_argument("--theta", type=float, help="propagation phase in radians")
        p.add_argument(
            "--theta-frac", type=float, help="propagation phase as a fraction of 2*pi"
        )
        if power:
            p.add_argument("--flux", type=float, help="mean photon flux (gamma units)")
        p.add_argument("--bandwidth", type=float, help="pulse bandwidth (gamma units)")

    def io_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="output file path")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--config", help="JSON file with flag values")

    p = sub.add_parser("single-photon", help="single-photon reflectivity")
    scenario_flags(p, power=False)
    io_flags(p)

    p = sub.add_parser("transport", help="steady-state transport, both directions")
    scenario_flags(p)
    io_flags(p)

    p = sub.add_parser("sweep-map", help="efficiency map over (delta, theta)")
    p.add_argument("--flux", type=float, help="mean photon flux (gamma units)")
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--delta-min", type=float)
    p.add_argument("--delta-max", type=float)
    p.add_argument("--delta-points", type=int)
    p.add_argument("--theta-points", type=int)
    io_flags(p)

    p = sub.add_parser("sweep-power", help="transport versus input flux")
    scenario_flags(p, power=False)
    p.add_argument("--flux-min", type=float)
    p.add_argument("--flux-max", type=float)
    p.add_argument("--points", type=int)
    io_flags(p)

    p = sub.add_parser("gamma-scan", help="efficiency versus gamma2/gamma1")
    scenario_flags(p)
    p.add_argument("--ratios", help="comma-separated list of gamma2/gamma1 values")
    io_flags(p)

    p = sub.add_parser("validate", help="run the built-in oracle checks")

    return parser


def _load_config(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed config file {path}: {exc}")
    if not isinstance(doc, dict):
        raise ValidationError(f"config file {path} must hold a JSON object")
    return {str(k).replace("-", "_"): v for k, v in doc.items()}


def _parse_ratios(raw: Any) -> tuple[float, ...]:
    if isinstance(raw, (list, tuple)):
        vals = [float(v) for v in raw]
    else:
        try:
            vals = [float(tok) for tok in str(raw).split(",") if tok.strip()]
        except ValueError:
            raise ValidationError(f"ratios must be a comma-separated float list, got {raw!r}")
    if not vals:
        raise ValidationError("ratios must be non-empty")
    return tuple(vals)


def parse_args(argv: Sequence[str]) -> RunConfig:
    """Resolve argv (plus any --config document) into a RunConfig.

    Precedence: explicit flag, then config-file value, then default.
    Raises :class:`ValidationError` for malformed values; argparse
    itself exits with code 2 on unknown flags.
    """
    ns = vars(_build_parser().parse_args(argv))
    command = ns.pop("command")
    config = _load_config(ns.pop("config")) if ns.get("config") else {}
    ns.pop("config", None)

    known = {f.name for f in fields(RunConfig)} | {"theta_frac"}
    for key in config:
        if key not in known:
            raise ValidationError(f"unknown config key {key!r}")

    def pick(name: str, default: Any) -> Any:
        if ns.get(name) is not None:
            return ns[name]
        if name in config and config[name] is not None:
            return config[name]
        return default

    if ns.get("theta") is not None and ns.get("theta_frac") is not None:
        raise ValidationError("give either --theta or --theta-frac, not both")
    theta = pick("theta", None)
    if theta is None:
        theta = TWO_PI * float(pick("theta_frac", _DEFAULTS["theta_frac"]))
    else:
        theta = float(theta)

    out = pick("out", "")
    fmt = pick("format", _DEFAULTS["format"])
    if fmt not in ("csv", "json"):
        raise ValidationError(f"format must be csv or json, got {fmt!r}")
    if not out and command in _DEFAULT_OUT:
        out = f"{_DEFAULT_OUT[command]}.{fmt}"

    def num(name: str) -> float:
        value = pick(name, _DEFAULTS[name])
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ValidationError(f"{name} must be a number, got {value!r}")

    def integer(name: str) -> int:
        value = pick(name, _DEFAULTS[name])
        try:
            n = int(value)
        except (TypeError, ValueError):
            raise ValidationError(f"{name} must be an integer, got {value!r}")
        if n < 1:
            raise ValidationError(f"{name} must be >= 1, got {n}")
        return n

    cfg = RunConfig(
        command=command,
        delta=num("delta"),
        delta2=num("delta2"),
        gamma1=num("gamma1"),
        gamma2=num("gamma2"),
        theta=theta,
        flux=num("flux"),
        bandwidth=num("bandwidth"),
        delta_min=num("delta_min"),
        delta_max=num("delta_max"),
        delta_points=integer("delta_points"),
        theta_points=integer("theta_points"),
        flux_min=num("flux_min"),
        flux_max=num("flux_max"),
        points=integer("points"),
        ratios=_parse_ratios(pick("ratios", _DEFAULTS["ratios"])),
        out=str(out),
        format=str(fmt),
    )
    if cfg.flux < 0.0:
        raise ValidationError(f"flux must be >= 0, got {cfg.flux:g}")
    if cfg.bandwidth <= 0.0:
        raise ValidationError(f"bandwidth must be > 0, got {cfg.bandwidth:g}")
    if cfg.command == "sweep-power" and not 0.0 < cfg.flux_min < cfg.flux_max:
        raise ValidationError(
            f"need 0 < flux-min < flux-max, got ({cfg.flux_min:g}, {cfg.flux_max:g})"
        )
    if cfg.command == "sweep-map" and cfg.delta_points > 1 and cfg.delta_min >= cfg.delta_max:
        raise ValidationError(
            f"need delta-min < delta-max, got ({cfg.delta_min:g}, {cfg.delta_max:g})"
        )
    return cfg


def _sig12(x: float) -> str:
    """12-significant-digit serialization used in every output file."""
    return f"{x:.12g}"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".wgdiode-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _row_values(row: SweepRow) -> list[float]:
    return [
        row.delta, row.theta, row.flux, row.t_fwd, row.t_bwd, row.efficiency,
        row.p1_left, row.p2_left, row.p12_left,
        row.p1_right, row.p2_right, row.p12_right,
    ]


def table_to_csv(table: SweepTable) -> str:
    lines = [CSV_HEADER]
    for row in table:
        lines.append(",".join(_sig12(v) for v in _row_values(row)))
    return "\n".join(lines) + "\n"


def table_to_json(table: SweepTable, metadata: dict[str, Any]) -> str:
    cols = CSV_HEADER.split(",")
    rows = []
    for row in table:
        entry: dict[str, Any] = dict(zip(cols, (float(_sig12(v)) for v in _row_values(row))))
        if row.error is not None:
            entry["error"] = row.error
        rows.append(entry)
    return json.dumps({"metadata": metadata, "rows": rows}, indent=2) + "\n"


def _metadata(cfg: RunConfig, t0: float) -> dict[str, Any]:
    return {
        "tool": "wgdiode",
        "version": __version__,
        "command": cfg.command,
        "parameters": {
            k: v for k, v in vars(cfg).items() if k not in ("command", "out", "format")
        },
        "wall_time_s": round(time.monotonic() - t0, 6),
    }


def _write_table(cfg: RunConfig, table: SweepTable, t0: float) -> None:
    if cfg.format == "json":
        _atomic_write(cfg.out, table_to_json(table, _metadata(cfg, t0)))
    else:
        _atomic_write(cfg.out, table_to_csv(table))


def _simple_file(cfg: RunConfig, header: str, rows: list[list[float]], t0: float) -> None:
    if cfg.format == "json":
        cols = header.split(",")
        doc = {
            "metadata": _metadata(cfg, t0),
            "rows": [dict(zip(cols, (float(_sig12(v)) for v in r))) for r in rows],
        }
        _atomic_write(cfg.out, json.dumps(doc, indent=2) + "\n")
    else:
        lines = [header] + [",".join(_sig12(v) for v in r) for r in rows]
        _atomic_write(cfg.out, "\n".join(lines) + "\n")


def _cmd_single_photon(cfg: RunConfig, t0: float) -> str:
    r_closed = reflectivity_closed_form(cfg.delta, cfg.delta2, cfg.theta)
    scenario = validate(
        DiodeConfig(
            atom1=AtomParams(cfg.delta, cfg.gamma1),
            atom2=AtomParams(cfg.delta2, cfg.gamma2),
            theta=cfg.theta,
        ),
        DriveConfig(Direction.LEFT_TO_RIGHT, flux=0.0, bandwidth=cfg.bandwidth),
    )
    r_numeric = reflectivity_numeric(scenario)
    _simple_file(
        cfg,
        SINGLE_PHOTON_HEADER,
        [[cfg.delta, cfg.delta2, cfg.theta, r_closed, r_numeric]],
        t0,
    )
    return (
        f"single-photon reflectivity: closed form {_sig12(r_closed)}, "
        f"integrated {_sig12(r_numeric)} -> {cfg.out}"
    )


def _cmd_transport(cfg: RunConfig, t0: float) -> str:
    from .sweep import evaluate_point

    row = evaluate_point(
        cfg.delta, cfg.theta, cfg.flux, cfg.bandwidth,
        delta2=cfg.delta2, gamma1=cfg.gamma1, gamma2=cfg.gamma2,
    )
    if row.error is not None:
        raise SolverError(row.error)
    _write_table(cfg, SweepTable(rows=(row,)), t0)
    return (
        f"T_fwd={_sig12(row.t_fwd)} T_bwd={_sig12(row.t_bwd)} "
        f"L={_sig12(row.efficiency)} -> {cfg.out}"
    )


def _cmd_sweep_map(cfg: RunConfig, t0: float) -> str:
    grid = SweepGrid.map_grid(
        flux=cfg.flux,
        delta_axis=np.linspace(cfg.delta_min, cfg.delta_max, cfg.delta_points),
        theta_axis=np.linspace(0.0, TWO_PI, cfg.theta_points, endpoint=False),
    )
    table = sweep_map(grid, cfg.bandwidth)
    _write_table(cfg, table, t0)
    best = table.max_efficiency()
    return (
        f"{len(table)} points; max L={_sig12(best.efficiency)} at "
        f"delta={_sig12(best.delta)}, theta={_sig12(best.theta)} -> {cfg.out}"
    )


def _cmd_sweep_power(cfg: RunConfig, t0: float) -> str:
    axis = np.logspace(math.log10(cfg.flux_min), math.log10(cfg.flux_max), cfg.points)
    table = sweep_power(cfg.delta, cfg.theta, axis, cfg.bandwidth)
    _write_table(cfg, table, t0)
    best = table.max_efficiency()
    return (
        f"{len(table)} points; max L={_sig12(best.efficiency)} at "
        f"flux={_sig12(best.flux)} -> {cfg.out}"
    )


def _cmd_gamma_scan(cfg: RunConfig, t0: float) -> str:
    rows = gamma_ratio_scan(cfg.delta, cfg.theta, cfg.flux, cfg.ratios, cfg.bandwidth)
    _simple_file(cfg, GAMMA_SCAN_HEADER, [[r, l] for r, l in rows], t0)
    best = max(rows, key=lambda rl: rl[1])
    return f"best ratio {_sig12(best[0])} with L={_sig12(best[1])} -> {cfg.out}"


def _oracle_checks() -> list[tuple[str, bool, str]]:
    """Fast consistency checks pairing independent computation routes."""
    checks: list[tuple[str, bool, str]] = []

    def scenario(d1, d2, theta, flux, bandwidth=0.02):
        return validate(
            DiodeConfig(AtomParams(d1, 1.0), AtomParams(d2, 1.0), theta),
            DriveConfig(Direction.LEFT_TO_RIGHT, flux, bandwidth),
        )

    # Single-photon ODE against the monochromatic closed form.
    worst = 0.0
    for d1, d2, theta in ((1.0, -1.0, math.pi), (0.5, 1.5, 0.5 * math.pi)):
        closed = reflectivity_closed_form(d1, d2, theta)
        numeric = reflectivity_numeric(scenario(d1, d2, theta, 0.0))
        worst = max(worst, abs(numeric - closed) / closed)
    checks.append(
        ("single-photon ODE vs closed form", worst < 0.03, f"max rel gap {worst:.2e}")
    )

    # Exchange symmetry of the closed form.
    worst = 0.0
    for d1 in (-2.0, -0.5, 0.7, 1.5):
        for d2 in (-1.5, 0.3, 1.0):
            for theta in (0.9, 2.2, 4.5):
                worst = max(
                    worst,
                    abs(
                        reflectivity_closed_form(d1, d2, theta)
                        - reflectivity_closed_form(d2, d1, theta)
                    ),
                )
    checks.append(("closed-form detuning exchange symmetry", worst < 1e-12, f"max gap {worst:.2e}"))

    # Coherent pipeline against the single-atom saturation law.
    worst = 0.0
    for delta in (0.0, 0.5, 1.0):
        for flux in (1e-3, 0.1, 1.0):
            s = validate(
                DiodeConfig(AtomParams(delta, 1.0), AtomParams(0.0, 0.0), 1.0),
                DriveConfig(Direction.LEFT_TO_RIGHT, flux, 0.01),
            )
            res = transport(s)
            expected = single_atom_reflection(delta, flux)
            worst = max(worst, abs(res.reflected_fraction - expected) / expected)
    checks.append(
        ("coherent pipeline vs single-atom law", worst < 0.01, f"max rel gap {worst:.2e}")
    )

    # Steady state against a long transient (away from the slowly
    # relaxing subradiant corner, where t=200 would not suffice).
    s = scenario(0.7, -0.3, math.pi, 0.2, 0.01)
    sys_ = assemble_system(s)
    fixed = steady_state(sys_)
    trajectory = integrate_transient(sys_, CorrelatorState.ground(), 200.0)
    gap = float(np.max(np.abs(trajectory.states[-1] - fixed.pack())))
    checks.append(("steady state vs transient at t=200", gap < 1e-6, f"max gap {gap:.2e}"))

    # Low-power coherent reflection against the single-photon form.
    s = scenario(0.8, -0.6, 2.0, 1e-5, 0.01)
    nb = transport(s).reflected_fraction
    closed = reflectivity_closed_form(0.8, -0.6, 2.0)
    gap = abs(nb - closed)
    checks.append(("low-power coherent vs single-photon", gap < 1e-2, f"gap {gap:.2e}"))

    return checks


def _cmd_validate() -> int:
    ok = True
    for name, passed, detail in _oracle_checks():
        print(f"{'PASS' if passed else 'FAIL'}  {name} ({detail})")
        ok = ok and passed
    return EXIT_OK if ok else EXIT_FAILURE


def execute(cfg: RunConfig) -> int:
    """Run a resolved configuration; returns the process exit code."""
    t0 = time.monotonic()
    try:
        if cfg.command == "validate":
            return _cmd_validate()
        handler = {
            "single-photon": _cmd_single_photon,
            "transport": _cmd_transport,
            "sweep-map": _cmd_sweep_map,
            "sweep-power": _cmd_sweep_power,
            "gamma-scan": _cmd_gamma_scan,
        }[cfg.command]
        summary = handler(cfg, t0)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    print(summary)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        cfg = parse_args(argv)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
