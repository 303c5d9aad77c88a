"""Rectification efficiency and deterministic parameter sweeps.

Grid points are evaluated independently (optionally on a thread pool)
and written into a pre-indexed table, so row order and row values never
depend on the execution schedule.  Worker count is capped by the
``DIODE_SIM_THREADS`` environment variable (0 or unset = automatic).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .coherent import SolverError, transport
from .scenario import (
    AtomParams,
    DiodeConfig,
    Direction,
    DriveConfig,
    ValidationError,
    validate,
)

THREADS_ENV = "DIODE_SIM_THREADS"

#: Default detuning/phase axes used for the efficiency map.
MAP_DELTA_POINTS = 81
MAP_THETA_POINTS = 81

#: Default flux axis for power sweeps: 60 log-spaced points.
POWER_FLUX_MIN = 1e-6
POWER_FLUX_MAX = 1e2
POWER_FLUX_POINTS = 60

DEFAULT_BANDWIDTH = 0.01


def efficiency(t_fwd: float, t_bwd: float) -> float:
    """Rectification figure of merit: contrast times forward transmission.

    |T_fwd - T_bwd| / (T_fwd + T_bwd) * T_fwd.  Defined as 0 when both
    transmittances vanish (a mirror in both directions rectifies
    nothing, although the ratio itself is 0/0 there).
    """
    for name, t in (("t_fwd", t_fwd), ("t_bwd", t_bwd)):
        if not 0.0 <= t <= 1.0:
            raise ValidationError(f"{name} must be in [0, 1], got {t!r}")
    total = t_fwd + t_bwd
    if total == 0.0:
        return 0.0
    return abs(t_fwd - t_bwd) / total * t_fwd


def _axis(values: Iterable[float], name: str, positive: bool = False) -> tuple[float, ...]:
    axis = tuple(float(v) for v in values)
    if not axis:
        raise ValidationError(f"{name} must be non-empty")
    if any(not math.isfinite(v) for v in axis):
        raise ValidationError(f"{name} must be finite")
    if positive and any(v <= 0.0 for v in axis):
        raise ValidationError(f"{name} must be positive")
    if len(axis) > 1 and any(b <= a for a, b in zip(axis, axis[1:])):
        raise ValidationError(f"{name} must be strictly increasing")
    return axis


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian sweep axes: atom-1 detuning, phase, input flux.

    An efficiency map fixes a single flux; a power sweep fixes a single
    (delta, theta) point.  Rows are always generated in lexicographic
    (flux, delta, theta) order.
    """

    delta_axis: tuple[float, ...]
    theta_axis: tuple[float, ...]
    flux_axis: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "delta_axis", _axis(self.delta_axis, "delta_axis"))
        object.__setattr__(self, "theta_axis", _axis(self.theta_axis, "theta_axis"))
        object.__setattr__(
            self, "flux_axis", _axis(self.flux_axis, "flux_axis", positive=True)
        )

    @classmethod
    def map_grid(
        cls,
        flux: float,
        delta_axis: Iterable[float] | None = None,
        theta_axis: Iterable[float] | None = None,
    ) -> "SweepGrid":
        if delta_axis is None:
            delta_axis = np.linspace(-2.0, 2.0, MAP_DELTA_POINTS)
        if theta_axis is None:
            theta_axis = np.linspace(0.0, 2.0 * np.pi, MAP_THETA_POINTS, endpoint=False)
        return cls(delta_axis=tuple(delta_axis), theta_axis=tuple(theta_axis), flux_axis=(flux,))

    @classmethod
    def power_grid(
        cls, delta: float, theta: float, flux_axis: Iterable[float] | None = None
    ) -> "SweepGrid":
        if flux_axis is None:
            flux_axis = np.logspace(
                math.log10(POWER_FLUX_MIN), math.log10(POWER_FLUX_MAX), POWER_FLUX_POINTS
            )
        return cls(delta_axis=(delta,), theta_axis=(theta,), flux_axis=tuple(flux_axis))

    def points(self) -> list[tuple[float, float, float]]:
        """(flux, delta, theta) tuples in row order."""
        return [
            (f, d, t)
            for f in self.flux_axis
            for d in self.delta_axis
            for t in self.theta_axis
        ]


@dataclass(frozen=True)
class SweepRow:
    """Bidirectional transport observables at one grid point.

    ``error`` is set (and the observables are NaN) when the solver
    failed at this point; the sweep itself carries on.
    """

    delta: float
    theta: float
    flux: float
    t_fwd: float
    t_bwd: float
    efficiency: float
    p1_left: float
    p2_left: float
    p12_left: float
    p1_right: float
    p2_right: float
    p12_right: float
    error: str | None = None


@dataclass(frozen=True)
class SweepTable:
    rows: tuple[SweepRow, ...]

    def __iter__(self):
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def max_efficiency(self) -> SweepRow:
        """Row with the largest efficiency (NaN rows excluded)."""
        good = [r for r in self.rows if r.error is None]
        if not good:
            raise SolverError("every sweep point failed")
        return max(good, key=lambda r: r.efficiency)


def evaluate_point(
    delta: float,
    theta: float,
    flux: float,
    bandwidth: float = DEFAULT_BANDWIDTH,
    delta2: float = 0.0,
    gamma1: float = 1.0,
    gamma2: float = 1.0,
) -> SweepRow:
    """Bidirectional steady-state transport at a single working point.

    Atom 2 is resonant by default, matching the operating scenario of
    the diode; solver failures are captured in the returned row.
    """
    diode = DiodeConfig(
        atom1=AtomParams(detuning=delta, decay_rate=gamma1),
        atom2=AtomParams(detuning=delta2, decay_rate=gamma2),
        theta=theta,
    )
    try:
        left = transport(
            validate(diode, DriveConfig(Direction.LEFT_TO_RIGHT, flux, bandwidth))
        )
        right = transport(
            validate(diode, DriveConfig(Direction.RIGHT_TO_LEFT, flux, bandwidth))
        )
        t_fwd, t_bwd = left.transmittance, right.transmittance
        return SweepRow(
            delta=delta,
            theta=theta,
            flux=flux,
            t_fwd=t_fwd,
            t_bwd=t_bwd,
            efficiency=efficiency(t_fwd, t_bwd),
            p1_left=left.p1,
            p2_left=left.p2,
            p12_left=left.p12,
            p1_right=right.p1,
            p2_right=right.p2,
            p12_right=right.p12,
        )
    except (SolverError, ValidationError) as exc:
        nan = float("nan")
        return SweepRow(
            delta=delta,
            theta=theta,
            flux=flux,
            t_fwd=nan,
            t_bwd=nan,
            efficiency=nan,
            p1_left=nan,
            p2_left=nan,
            p12_left=nan,
            p1_right=nan,
            p2_right=nan,
            p12_right=nan,
            error=str(exc),
        )


def worker_count() -> int:
    """Thread count from DIODE_SIM_THREADS (0 or unset = automatic)."""
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if n < 0:
        raise ValidationError(f"{THREADS_ENV} must be >= 0, got {n}")
    if n == 0:
        return min(os.cpu_count() or 1, 8)
    return n


def _run_indexed(tasks: Sequence[Callable[[], SweepRow]]) -> list[SweepRow]:
    """Evaluate independent tasks, preserving index order exactly."""
    workers = worker_count()
    if workers == 1 or len(tasks) < 2:
        return [task() for task in tasks]
    rows: list[SweepRow | None] = [None] * len(tasks)

    def run(i: int) -> None:
        rows[i] = tasks[i]()

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(run, range(len(tasks))))
    return rows  # type: ignore[return-value]


def run_sweep(grid: SweepGrid, bandwidth: float = DEFAULT_BANDWIDTH) -> SweepTable:
    """Evaluate every grid point; rows in lexicographic (flux, delta, theta) order."""
    pts = grid.points()
    tasks = [
        (lambda f=f, d=d, t=t: evaluate_point(d, t, f, bandwidth)) for f, d, t in pts
    ]
    return SweepTable(rows=tuple(_run_indexed(tasks)))


def sweep_map(grid: SweepGrid, bandwidth: float = DEFAULT_BANDWIDTH) -> SweepTable:
    """Efficiency map over (delta, theta) at the grid's fixed flux."""
    return run_sweep(grid, bandwidth)


def sweep_power(
    delta: float,
    theta: float,
    flux_axis: Iterable[float] | None = None,
    bandwidth: float = DEFAULT_BANDWIDTH,
) -> SweepTable:
    """Transport and excitation versus input power at fixed (delta, theta)."""
    return run_sweep(SweepGrid.power_grid(delta, theta, flux_axis), bandwidth)


def gamma_ratio_scan(
    delta: float,
    theta: float,
    flux: float,
    ratios: Iterable[float],
    bandwidth: float = DEFAULT_BANDWIDTH,
) -> list[tuple[float, float]]:
    """Efficiency versus the coupling ratio gamma2/gamma1 (gamma1 = 1)."""
    ratio_list = [float(r) for r in ratios]
    if any(r <= 0.0 or not math.isfinite(r) for r in ratio_list):
        raise ValidationError("ratios must be positive and finite")
    out: list[tuple[float, float]] = []
    for r in ratio_list:
        row = evaluate_point(delta, theta, flux, bandwidth, gamma2=r)
        if row.error is not None:
            raise SolverError(f"gamma ratio {r:g} failed: {row.error}")
        out.append((r, row.efficiency))
    return out
