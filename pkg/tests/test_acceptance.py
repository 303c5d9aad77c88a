"""Acceptance suite: one test per release criterion.

Each test prints a single ``CRITERION n: PASS/FAIL`` line (visible with
``pytest -s``) and asserts the criterion at its stated tolerance.

Two criteria are known to fail for the exact dynamics and are left
red deliberately rather than loosened:

* Criterion 5 assumes the double-excitation probability is direction
  independent to 2% relative.  That holds only asymptotically (low
  power, or full saturation).  Both the correlator solver and an
  independent Lindblad master-equation oracle (tests/oracles.py) give
  relative differences up to ~65% at intermediate power, at P12 values
  far too small to resolve on a linear plot.
* Criterion 6 fixes the transient horizon at t = 200.  Configurations
  with the phase near 0 mod 2*pi and nearly equal detunings host a
  subradiant mode whose relaxation rate can be arbitrarily small, so a
  uniformly sampled scenario set contains points that cannot relax to
  1e-6 by t = 200.  The solver itself is correct: the same scenarios
  converge at an adequate horizon (see test_coherent.py).
"""

import math
import time

import numpy as np
import pytest

from wgdiode import (
    CorrelatorState,
    SweepGrid,
    assemble_system,
    gamma_ratio_scan,
    integrate_transient,
    reflectivity_closed_form,
    reflectivity_numeric,
    single_atom_reflection,
    steady_state,
    sweep_map,
    sweep_power,
    transport,
)
from wgdiode.cli import main
from conftest import FIG3_DELTA, FIG3_THETA, TWO_PI, make_scenario


def report(number: int, ok: bool, detail: str) -> bool:
    print(f"CRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def photon_scenario(d1, d2, theta, bandwidth=0.01):
    return make_scenario(delta1=d1, delta2=d2, theta=theta, flux=0.0, bandwidth=bandwidth)


def test_criterion_1_single_photon_no_rectification():
    """Reflectivity is symmetric under detuning exchange, so a single
    photon cannot be rectified: exact for the closed form, 1e-3 for the
    integrated pulse."""
    t0 = time.perf_counter()
    deltas = [-2.0, -1.0, 0.0, 1.0, 2.0]
    thetas = [0.4 * math.pi, 0.8 * math.pi, 1.2 * math.pi, 1.6 * math.pi]

    closed_gap = 0.0
    for d1 in deltas:
        for d2 in deltas:
            for theta in thetas:
                closed_gap = max(
                    closed_gap,
                    abs(
                        reflectivity_closed_form(d1, d2, theta)
                        - reflectivity_closed_form(d2, d1, theta)
                    ),
                )

    numeric = {}
    for d1 in deltas:
        for d2 in deltas:
            for theta in thetas:
                numeric[(d1, d2, theta)] = reflectivity_numeric(
                    photon_scenario(d1, d2, theta)
                )
    ode_gap = max(
        abs(numeric[(d1, d2, theta)] - numeric[(d2, d1, theta)])
        for d1 in deltas
        for d2 in deltas
        for theta in thetas
    )
    elapsed = time.perf_counter() - t0
    ok = closed_gap < 1e-12 and ode_gap < 1e-3 and elapsed < 30.0
    assert report(
        1,
        ok,
        f"closed-form gap {closed_gap:.2e}, ODE gap {ode_gap:.2e}, {elapsed:.1f} s",
    )


def test_criterion_2_closed_form_ode_agreement():
    """Integrated narrowband reflectivity tracks the closed form to 2%
    relative on sampled points with |detuning| <= 2."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    points = []
    while len(points) < 20:
        d1, d2 = rng.uniform(-2.0, 2.0, 2)
        theta = rng.uniform(0.0, TWO_PI)
        closed = reflectivity_closed_form(d1, d2, theta)
        # The pulse has finite bandwidth; a relative comparison is only
        # meaningful away from the zeros of the reflectivity.
        if closed >= 0.1:
            points.append((d1, d2, theta, closed))
    worst = 0.0
    for d1, d2, theta, closed in points:
        numeric = reflectivity_numeric(photon_scenario(d1, d2, theta))
        worst = max(worst, abs(numeric - closed) / closed)
    elapsed = time.perf_counter() - t0
    ok = worst < 0.02 and elapsed < 60.0
    assert report(2, ok, f"max relative gap {worst:.2e} on 20 points, {elapsed:.1f} s")


def test_criterion_3_single_atom_saturation_law():
    """Coherent pipeline with one uncoupled atom reproduces the
    single-atom saturation law within 1%."""
    t0 = time.perf_counter()
    worst = 0.0
    for delta in (0.0, 0.5, 1.0):
        for flux in (1e-3, 0.1, 1.0):
            s = make_scenario(delta1=delta, gamma2=0.0, flux=flux, theta=1.0)
            nb = transport(s).reflected_fraction
            law = single_atom_reflection(delta, flux)
            worst = max(worst, abs(nb - law) / law)
    elapsed = time.perf_counter() - t0
    ok = worst < 0.01 and elapsed < 5.0
    assert report(3, ok, f"max relative gap {worst:.2e}, {elapsed:.2f} s")


def test_criterion_4_power_sweep_reproduction():
    """Efficiency versus power at the reference working point: peak in
    [0.55, 0.75], negligible rectification at both power extremes."""
    t0 = time.perf_counter()
    table = sweep_power(FIG3_DELTA, FIG3_THETA)
    rows = list(table)
    eff = np.array([r.efficiency for r in rows])
    peak = float(np.max(eff))
    low_end, high_end = rows[0].efficiency, rows[-1].efficiency
    elapsed = time.perf_counter() - t0
    ok = 0.55 <= peak <= 0.75 and low_end < 0.05 and high_end < 0.05 and elapsed < 10.0
    assert report(
        4,
        ok,
        f"max L {peak:.3f}, L(1e-6) {low_end:.2e}, L(1e2) {high_end:.2e}, {elapsed:.1f} s",
    )


def test_criterion_5_p12_direction_independence():
    """Stated claim: double-excitation probability differs by < 2%
    relative between input directions wherever it exceeds 1e-4."""
    table = sweep_power(FIG3_DELTA, FIG3_THETA)
    worst = 0.0
    for row in table:
        reference = max(row.p12_left, row.p12_right)
        if reference > 1e-4:
            worst = max(worst, abs(row.p12_left - row.p12_right) / reference)
    ok = worst < 0.02
    assert report(
        5,
        ok,
        f"max relative P12 direction difference {worst:.2%} "
        "(exact dynamics: independence holds only at the power extremes; "
        "confirmed by the Lindblad oracle)",
    )


def test_criterion_6_steady_state_vs_transient_oracle():
    """Linear-solve steady state against the t=200 trajectory endpoint
    for 50 scenarios sampled from the stated distribution, with
    physicality along every accepted step."""
    rng = np.random.default_rng(0)
    worst_gap = 0.0
    worst_violation = 0.0
    for _ in range(50):
        d1, d2 = rng.uniform(-2.0, 2.0, 2)
        theta = rng.uniform(0.0, TWO_PI)
        flux = 10 ** rng.uniform(-4.0, 1.0)
        s = make_scenario(delta1=d1, delta2=d2, theta=theta, flux=flux)
        sys_ = assemble_system(s)
        fixed = steady_state(sys_).pack()
        traj = integrate_transient(sys_, CorrelatorState.ground(), 200.0)
        worst_gap = max(worst_gap, float(np.max(np.abs(traj.states[-1] - fixed))))
        worst_violation = max(worst_violation, traj.max_physicality_violation())
    ok = worst_gap < 1e-6 and worst_violation < 1e-6
    assert report(
        6,
        ok,
        f"max endpoint gap {worst_gap:.2e}, max physicality violation "
        f"{worst_violation:.2e} (subradiant scenarios relax slower than "
        "the fixed t=200 horizon; solver correctness shown separately)",
    )


def test_criterion_7_equal_couplings_are_optimal():
    """Rectification peaks at equal atom-waveguide couplings."""
    rows = gamma_ratio_scan(FIG3_DELTA, FIG3_THETA, 0.1, [0.25, 0.5, 1.0, 2.0, 4.0])
    best_ratio, best_eff = max(rows, key=lambda rl: rl[1])
    ok = best_ratio == 1.0
    assert report(7, ok, f"best ratio {best_ratio:g} with L {best_eff:.3f}")


def test_criterion_8_efficiency_map_reproduction():
    """Detuning-phase map: peak efficiency band at working power, and a
    drastic collapse of the high-efficiency area at very low power."""
    t0 = time.perf_counter()
    table_hi = sweep_map(SweepGrid.map_grid(0.1))
    t_map = time.perf_counter() - t0
    table_lo = sweep_map(SweepGrid.map_grid(1e-4))

    eff_hi = np.array([r.efficiency for r in table_hi])
    eff_lo = np.array([r.efficiency for r in table_lo])
    peak = float(np.nanmax(eff_hi))
    frac_hi = float(np.mean(eff_hi > 0.3))
    frac_lo = float(np.mean(eff_lo > 0.3))
    ok = 0.55 <= peak <= 0.75 and frac_lo <= frac_hi / 5.0 and t_map < 10.0
    assert report(
        8,
        ok,
        f"max L {peak:.3f}, area(L>0.3) {frac_hi:.3%} -> {frac_lo:.3%}, "
        f"map {t_map:.1f} s",
    )


def test_criterion_9_sweep_determinism(tmp_path, monkeypatch):
    """Identical CSV bytes regardless of worker count."""
    args = ["sweep-power", "--delta", f"{FIG3_DELTA}", "--theta-frac", "0.982"]
    files = {}
    for workers in ("1", "4"):
        out = tmp_path / f"power-{workers}.csv"
        monkeypatch.setenv("DIODE_SIM_THREADS", workers)
        assert main(args + ["--out", str(out)]) == 0
        files[workers] = out.read_bytes()
    map_args = [
        "sweep-map", "--delta-points", "9", "--theta-points", "9", "--flux", "0.1"
    ]
    map_files = {}
    for workers in ("1", "4"):
        out = tmp_path / f"map-{workers}.csv"
        monkeypatch.setenv("DIODE_SIM_THREADS", workers)
        assert main(map_args + ["--out", str(out)]) == 0
        map_files[workers] = out.read_bytes()
    ok = files["1"] == files["4"] and map_files["1"] == map_files["4"]
    assert report(9, ok, "byte-identical CSVs for 1 and 4 workers")
