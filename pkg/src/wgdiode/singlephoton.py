"""Single-excitation scattering off the two-atom diode.

A single-photon square pulse populates the two atomic excitation
amplitudes; the back-scattered photon number is accumulated from the
interference of the two emitters.  In the monochromatic limit the
reflectivity reduces to a closed form that is symmetric under exchange
of the two detunings, so a single photon cannot be rectified.

The amplitudes are integrated in a rotating frame (a factor
exp(+i*delta_j*t) absorbed per atom) where the square-pulse plateau
drive is constant.  Reported amplitudes are transformed back.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, simpson, solve_ivp

from .coherent import SolverError
from .scenario import TWO_PI, ValidatedScenario, ValidationError

#: Quadrature resampling step for the reflected-number integral.
QUADRATURE_STEP = 1e-2

#: Residual excitation below which the scattering event is over.
TAIL_NORM = 1e-10

#: Padding after the pulse before the first tail-convergence check.
TAIL_PADDING = 20.0

#: Hard ceiling on the integration horizon while waiting for slowly
#: decaying (subradiant) excitation to leave the atoms.
MAX_HORIZON = 40000.0

_INTEGRATOR_TOL = 1e-10


def reflectivity_closed_form(delta1: float, delta2: float, theta: float) -> float:
    """Monochromatic single-photon reflectivity of the atom pair.

    Detunings in units of the (equal) decay rate, ``theta`` the
    round-trip propagation phase.  Exactly symmetric in the two
    detunings, and equal to 1 whenever either atom is resonant.
    Raises :class:`ValidationError` at the degenerate point of two
    co-located resonant atoms (both detunings zero, theta = 0 mod 2pi),
    where the expression is 0/0.
    """
    for name, v in (("delta1", delta1), ("delta2", delta2), ("theta", theta)):
        if not math.isfinite(v):
            raise ValidationError(f"{name} must be finite, got {v!r}")

    if delta1 == 0.0 and delta2 == 0.0 and abs(math.remainder(theta, TWO_PI)) < 1e-9:
        raise ValidationError(
            "degenerate geometry: two resonant atoms with zero propagation "
            "phase have an undefined reflectivity"
        )

    half = 0.5 * theta
    num = ((delta1 + delta2) * math.cos(half) + 2.0 * math.sin(half)) ** 2 + (
        (delta2 - delta1) * math.sin(half)
    ) ** 2
    den = (delta1 * delta2 - 1.0 + math.cos(theta)) ** 2 + (
        delta1 + delta2 + math.sin(theta)
    ) ** 2
    if den == 0.0:
        raise ValidationError(
            "degenerate geometry: reflectivity denominator vanished at "
            f"delta1={delta1:g}, delta2={delta2:g}, theta={theta:g}"
        )
    return min(max(num / den, 0.0), 1.0)


def single_atom_reflection(delta: float, flux: float) -> float:
    """Reflection of a weak coherent beam off one atom: 1/(1 + d^2 + 2 f).

    ``delta`` and ``flux`` in units of the atomic decay rate.  The
    flux term is the saturation correction; at zero power this is the
    monochromatic single-photon result.
    """
    if not math.isfinite(delta) or not math.isfinite(flux):
        raise ValidationError(f"inputs must be finite, got ({delta!r}, {flux!r})")
    if flux < 0.0:
        raise ValidationError(f"flux must be >= 0, got {flux:g}")
    return 1.0 / (1.0 + delta * delta + 2.0 * flux)


@dataclass(frozen=True, eq=False)
class AmplitudeTrajectory:
    """Sampled excitation amplitudes c1(t), c2(t) of the two atoms."""

    times: np.ndarray
    c1: np.ndarray
    c2: np.ndarray

    def norm(self) -> np.ndarray:
        """Total atomic excitation |c1|^2 + |c2|^2 at each sample."""
        return np.abs(self.c1) ** 2 + np.abs(self.c2) ** 2


@dataclass(frozen=True, eq=False)
class ReflectivityRecord:
    """Accumulated back-scattered photon number and its limit."""

    reflectivity: float
    times: np.ndarray
    n_ref: np.ndarray


def _segment(fun, t0, t1, y0):
    sol = solve_ivp(
        fun,
        (t0, t1),
        y0,
        method="RK45",
        rtol=_INTEGRATOR_TOL,
        atol=_INTEGRATOR_TOL,
        dense_output=True,
    )
    if not sol.success:
        raise SolverError(f"amplitude integration failed near t = {sol.t[-1]:g}: {sol.message}")
    return sol


def integrate_amplitudes(
    s: ValidatedScenario, drive_scale: float = 1.0
) -> tuple[AmplitudeTrajectory, ReflectivityRecord]:
    """Propagate the single-excitation amplitudes through the pulse.

    Requires equal couplings for the two atoms.  Integration runs over
    the pulse and continues past it until the atomic excitation drops
    below ``TAIL_NORM``; the back-scattered number is accumulated by
    composite Simpson quadrature on a uniform resampling of the dense
    integrator output.  ``drive_scale`` rescales the input amplitude
    (0 disables the drive; useful as a null diagnostic).
    """
    gamma = s.gamma1
    if abs(s.gamma1 - s.gamma2) > 1e-12 * max(s.gamma1, s.gamma2):
        raise ValidationError(
            "single-photon scattering is implemented for equal couplings only, "
            f"got gamma1={s.gamma1:g}, gamma2={s.gamma2:g}"
        )
    d1, d2 = s.delta1, s.delta2
    u = cmath.exp(1j * s.diode.theta2)
    omega = s.drive.bandwidth
    xi0 = math.sqrt(0.5 * omega) * drive_scale
    t_pulse = 2.0 / omega

    m = np.array(
        [[1j * d1 - gamma, -gamma * u], [-gamma * u, 1j * d2 - gamma]], dtype=complex
    )
    drive = -math.sqrt(gamma) * xi0 * np.array([1.0, u], dtype=complex)

    def rhs_on(t, y):
        return m @ y + drive

    def rhs_off(t, y):
        return m @ y

    segments = [_segment(rhs_on, 0.0, t_pulse, np.zeros(2, dtype=complex))]
    t_end = t_pulse + TAIL_PADDING
    segments.append(_segment(rhs_off, t_pulse, t_end, segments[-1].y[:, -1]))
    while np.sum(np.abs(segments[-1].y[:, -1]) ** 2) > TAIL_NORM:
        if t_end >= MAX_HORIZON:
            norm = np.sum(np.abs(segments[-1].y[:, -1]) ** 2)
            raise SolverError(
                f"excitation tail failed to converge: |c|^2 = {norm:.3g} at "
                f"t = {t_end:g} for {s.describe()}; a nearly dark two-atom "
                "state is trapping the excitation"
            )
        chunk = min(max(200.0, 0.5 * t_end), MAX_HORIZON - t_end)
        segments.append(_segment(rhs_off, t_end, t_end + chunk, segments[-1].y[:, -1]))
        t_end += chunk

    # Uniform quadrature grid across all segments, densified from the
    # integrator's interpolants.
    times = []
    d_vals = []
    for seg in segments:
        n = max(int(math.ceil((seg.t[-1] - seg.t[0]) / QUADRATURE_STEP)), 8)
        # Long subradiant tails are smooth decays; cap the resampling.
        n = min(n, 100_000)
        tg = np.linspace(seg.t[0], seg.t[-1], n + 1)
        times.append(tg if not times else tg[1:])
        y = seg.sol(tg)
        d_vals.append(y if not d_vals else y[:, 1:])
    t = np.concatenate(times)
    d = np.concatenate(d_vals, axis=1)

    # Back-scattered emission rate: the two amplitudes interfere with
    # the propagation phase of the second atom.
    integrand = gamma * np.abs(d[0] + u * d[1]) ** 2
    n_ref = cumulative_simpson(integrand, x=t, initial=0.0)
    total = float(simpson(integrand, x=t))

    phase1 = np.exp(-1j * d1 * t)
    phase2 = np.exp(-1j * d2 * t)
    traj = AmplitudeTrajectory(times=t, c1=d[0] * phase1, c2=d[1] * phase2)
    record = ReflectivityRecord(
        reflectivity=min(max(total, 0.0), 1.0), times=t, n_ref=n_ref
    )
    return traj, record


def reflectivity_numeric(s: ValidatedScenario) -> float:
    """Reflectivity of a single-photon square pulse, by integration."""
    _, record = integrate_amplitudes(s)
    return record.reflectivity
