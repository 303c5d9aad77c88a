"""Coherent-drive dynamics of the two-atom diode.

The observables of a coherent square pulse scattering off the pair are
driven by nine atomic expectation values: the two inversions, their
product, and six lowering/raising correlators.  Because the field
operators act on a coherent input as c-numbers, these expectation
values obey a closed linear ODE system.

Rotating frame
--------------
Each correlator is stored with its free phase removed: a factor
exp(+i*delta_j*t) per lowering operator of atom j and the conjugate per
raising operator.  During the square-pulse plateau the drive c-number
is then constant, so the system is autonomous, dx/dt = A x + b, and the
steady state is a single dense linear solve.  ``autonomy_residual``
checks this transformation against a direct transcription of the
time-dependent equations of motion with all phases explicit.

Real packing
------------
The 15 real coordinates are, in order::

    x[0]  = 1 + <sz1>            (twice the atom-1 excitation)
    x[1]  = 1 + <sz2>
    x[2]  = <sz1 sz2> - 1
    x[3:5]   = Re, Im of rotating <sm1>
    x[5:7]   = Re, Im of rotating <sm2>
    x[7:9]   = Re, Im of rotating <sz1 sm2>
    x[9:11]  = Re, Im of rotating <sm1 sz2>
    x[11:13] = Re, Im of rotating <sp1 sm2>
    x[13:15] = Re, Im of rotating <sm1 sm2>

The inversion-like coordinates are shifted so the ground state sits at
the origin: the undriven system is then homogeneous (A x_ground = 0)
and b carries only the drive.  Note that the drive amplitude also
enters A linearly (drive times correlator terms); this is what produces
saturation of the steady state at high power.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .scenario import Direction, ValidatedScenario, ValidationError, mirror

DIM = 15

#: Default integrator tolerances and initial step, in reference-rate units.
DEFAULT_TOL = 1e-9
DEFAULT_FIRST_STEP = 1e-3

#: Condition-number ceiling for the steady-state solve.
CONDITION_LIMIT = 1e12

#: Steady-state residual ceiling, infinity norm of A x + b.
RESIDUAL_LIMIT = 1e-10

#: Physicality tolerance required of a steady-state solution.
STEADY_PHYSICALITY_TOL = 1e-8

#: Slack allowed on the reflected fraction before it is treated as a bug.
FRACTION_SLACK = 1e-6


class SolverError(RuntimeError):
    """A numerical solve failed or produced an unphysical result."""


@dataclass(frozen=True)
class CorrelatorState:
    """The nine atomic expectation values in the rotating frame.

    ``z1``, ``z2`` are the inversions, ``zz`` their product, ``s1``,
    ``s2`` the single-atom coherences, and ``qzm``, ``qmz``, ``qpm``,
    ``qmm`` the two-atom correlators (inversion x lowering, lowering x
    inversion, raising x lowering, lowering x lowering).
    """

    z1: float
    z2: float
    zz: float
    s1: complex
    s2: complex
    qzm: complex
    qmz: complex
    qpm: complex
    qmm: complex

    @classmethod
    def ground(cls) -> "CorrelatorState":
        """Both atoms in the ground state, no coherence."""
        return cls(z1=-1.0, z2=-1.0, zz=1.0, s1=0j, s2=0j, qzm=0j, qmz=0j, qpm=0j, qmm=0j)

    @property
    def p1(self) -> float:
        """Probability that atom 1 is excited."""
        return 0.5 * (1.0 + self.z1)

    @property
    def p2(self) -> float:
        """Probability that atom 2 is excited."""
        return 0.5 * (1.0 + self.z2)

    @property
    def p12(self) -> float:
        """Probability that both atoms are excited simultaneously."""
        return 0.25 * (1.0 + self.z1 + self.z2 + self.zz)

    def pack(self) -> np.ndarray:
        """Real 15-vector in the documented packing."""
        return np.array(
            [
                1.0 + self.z1,
                1.0 + self.z2,
                self.zz - 1.0,
                self.s1.real, self.s1.imag,
                self.s2.real, self.s2.imag,
                self.qzm.real, self.qzm.imag,
                self.qmz.real, self.qmz.imag,
                self.qpm.real, self.qpm.imag,
                self.qmm.real, self.qmm.imag,
            ]
        )

    @classmethod
    def unpack(cls, x: np.ndarray) -> "CorrelatorState":
        x = np.asarray(x, dtype=float)
        if x.shape != (DIM,):
            raise ValueError(f"expected a {DIM}-vector, got shape {x.shape}")
        return cls(
            z1=x[0] - 1.0,
            z2=x[1] - 1.0,
            zz=x[2] + 1.0,
            s1=complex(x[3], x[4]),
            s2=complex(x[5], x[6]),
            qzm=complex(x[7], x[8]),
            qmz=complex(x[9], x[10]),
            qpm=complex(x[11], x[12]),
            qmm=complex(x[13], x[14]),
        )

    def physicality_violation(self) -> float:
        """Largest violation of the state-space constraints, 0 if none.

        Checks that the inversions and their product lie in [-1, 1],
        that the coherences obey |s_j|^2 <= (1 + z_j)/2, and that the
        double-excitation probability lies between 0 and each
        single-atom excitation probability.
        """
        v = 0.0
        for z in (self.z1, self.z2, self.zz):
            v = max(v, abs(z) - 1.0)
        v = max(v, abs(self.s1) ** 2 - 0.5 * (1.0 + self.z1))
        v = max(v, abs(self.s2) ** 2 - 0.5 * (1.0 + self.z2))
        p12 = self.p12
        v = max(v, -p12, p12 - min(self.p1, self.p2))
        return max(v, 0.0)


def _packed_rhs(
    x: np.ndarray,
    *,
    d1: float,
    d2: float,
    g1: float,
    g2: float,
    theta1: float,
    theta2: float,
    eps: complex,
) -> np.ndarray:
    """Time derivative of the packed rotating-frame coordinates.

    Affine in x; ``x`` may be a (15,) vector or a (15, k) batch.  This
    is the single transcription of the equations of motion used both to
    assemble the linear system and (via probing) to define A and b.
    """
    p1, p2, w = x[0], x[1], x[2]
    s1 = x[3] + 1j * x[4]
    s2 = x[5] + 1j * x[6]
    qzm = x[7] + 1j * x[8]
    qmz = x[9] + 1j * x[10]
    qpm = x[11] + 1j * x[12]
    qmm = x[13] + 1j * x[14]

    z1 = p1 - 1.0
    z2 = p2 - 1.0
    zz = w + 1.0

    u1 = cmath.exp(1j * theta1)
    u2 = cmath.exp(1j * theta2)
    g = math.sqrt(g1 * g2)
    r1 = math.sqrt(g1)
    r2 = math.sqrt(g2)
    e = eps

    ds1 = (1j * d1 - g1) * s1 + g * u2 * qzm + r1 * e * z1
    dp1 = -2.0 * g1 * p1 - 4.0 * g * (u2 * qpm).real - 4.0 * r1 * (np.conj(e) * s1).real
    ds2 = (1j * d2 - g2) * s2 + g * u1 * qmz + r2 * e * u1 * z2
    dp2 = (
        -2.0 * g2 * p2
        - 4.0 * g * (np.conj(u1) * qpm).real
        - 4.0 * r2 * (np.conj(e * u1) * s2).real
    )
    dqzm = (
        (1j * d2 - 2.0 * g1 - g2) * qzm
        - 2.0 * g1 * s2
        - g * (np.conj(u2) * s1 + (np.conj(u2) + u1) * qmz)
        - 2.0 * r1 * (e * qpm + np.conj(e) * qmm)
        + r2 * e * u1 * zz
    )
    dqmz = (
        (1j * d1 - g1 - 2.0 * g2) * qmz
        - 2.0 * g2 * s1
        - g * (np.conj(u1) * s2 + (np.conj(u1) + u2) * qzm)
        - 2.0 * r2 * (e * u1 * np.conj(qpm) + np.conj(e * u1) * qmm)
        + r1 * e * zz
    )
    dqpm = (
        (-(g1 + g2) - 1j * (d1 - d2)) * qpm
        + 0.5 * g * (np.conj(u2) * z1 + u1 * z2 + (u1 + np.conj(u2)) * zz)
        + r1 * np.conj(e) * qzm
        + r2 * e * u1 * np.conj(qmz)
    )
    dqmm = (1j * (d1 + d2) - (g1 + g2)) * qmm + r1 * e * qzm + r2 * e * u1 * qmz
    dw = (
        -2.0 * (g1 + g2) * w
        - 2.0 * g2 * p1
        - 2.0 * g1 * p2
        + 4.0 * g * ((np.conj(u1) + u2) * qpm).real
        - 4.0 * r1 * (e * np.conj(qmz)).real
        - 4.0 * r2 * (e * u1 * np.conj(qzm)).real
    )

    out = np.empty_like(np.asarray(x, dtype=float))
    out[0], out[1], out[2] = dp1, dp2, dw
    out[3], out[4] = ds1.real, ds1.imag
    out[5], out[6] = ds2.real, ds2.imag
    out[7], out[8] = dqzm.real, dqzm.imag
    out[9], out[10] = dqmz.real, dqmz.imag
    out[11], out[12] = dqpm.real, dqpm.imag
    out[13], out[14] = dqmm.real, dqmm.imag
    return out


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """dx/dt = a x + b in the packed rotating-frame coordinates.

    ``a`` is constant in time during the square-pulse plateau; ``b``
    and the drive-coupling entries of ``a`` are linear in the plateau
    drive amplitude sqrt(flux).
    """

    a: np.ndarray
    b: np.ndarray
    scenario: ValidatedScenario

    @property
    def eps(self) -> float:
        """Plateau drive amplitude."""
        return self.scenario.drive.amplitude


def assemble_system(s: ValidatedScenario) -> LinearSystem:
    """Build the rotating-frame linear system for a validated scenario.

    The drive is taken at its plateau value; the result is exact there
    because the packed equations of motion are affine in the state.
    """
    kw = dict(
        d1=s.delta1,
        d2=s.delta2,
        g1=s.gamma1,
        g2=s.gamma2,
        theta1=s.diode.theta1,
        theta2=s.diode.theta2,
        eps=s.drive.amplitude,
    )
    probes = np.hstack([np.zeros((DIM, 1)), np.eye(DIM)])
    derivs = _packed_rhs(probes, **kw)
    b = derivs[:, 0].copy()
    a = derivs[:, 1:] - b[:, None]
    return LinearSystem(a=a, b=b, scenario=s)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-indexed rotating-frame states from a transient integration."""

    times: np.ndarray
    states: np.ndarray  # shape (n, 15), packed coordinates

    def state(self, i: int) -> CorrelatorState:
        return CorrelatorState.unpack(self.states[i])

    @property
    def final(self) -> CorrelatorState:
        return CorrelatorState.unpack(self.states[-1])

    def max_physicality_violation(self) -> float:
        return max(
            CorrelatorState.unpack(row).physicality_violation() for row in self.states
        )


def integrate_transient(
    sys: LinearSystem,
    x0: CorrelatorState,
    t_end: float,
    tol: float = DEFAULT_TOL,
    sample_times: Sequence[float] | None = None,
) -> Trajectory:
    """Integrate dx/dt = A x + b from x0 over [0, t_end].

    Adaptive embedded Runge-Kutta 4(5); the returned trajectory holds
    the accepted steps plus any requested ``sample_times``.
    """
    if t_end <= 0.0:
        raise ValidationError(f"t_end must be > 0, got {t_end:g}")
    if tol <= 0.0:
        raise ValidationError(f"tol must be > 0, got {tol:g}")

    a, b = sys.a, sys.b
    sol = solve_ivp(
        lambda t, x: a @ x + b,
        (0.0, float(t_end)),
        x0.pack(),
        method="RK45",
        rtol=tol,
        atol=tol,
        first_step=min(DEFAULT_FIRST_STEP, 0.5 * t_end),
        dense_output=True,
    )
    if not sol.success:
        raise SolverError(
            f"transient integration failed near t = {sol.t[-1]:g} "
            f"({sol.message}) for {sys.scenario.describe()}"
        )

    times = sol.t
    if sample_times is not None:
        extra = np.asarray(sample_times, dtype=float)
        if extra.size and (extra.min() < 0.0 or extra.max() > t_end):
            raise ValidationError("sample_times must lie within [0, t_end]")
        times = np.union1d(times, extra)
    states = sol.sol(times).T
    return Trajectory(times=times, states=states)


def _active_coordinates(s: ValidatedScenario) -> list[int]:
    """Packed coordinates that can ever leave zero.

    An atom with zero coupling is inert: its excitation and coherence
    stay exactly zero (their equations of motion vanish or reduce to a
    free rotation from zero), so those coordinates are excluded from
    the steady-state solve to keep the system nonsingular.
    """
    active = list(range(DIM))
    if s.gamma2 == 0.0:
        for idx in (1, 5, 6):  # 1+z2, Re s2, Im s2
            active.remove(idx)
    if s.gamma1 == 0.0:
        for idx in (0, 3, 4):  # 1+z1, Re s1, Im s1
            active.remove(idx)
    return active


def steady_state(sys: LinearSystem) -> CorrelatorState:
    """Exact fixed point of the plateau dynamics via a dense LU solve.

    Raises :class:`SolverError` when the system is close to singular
    (condition estimate above ``CONDITION_LIMIT``), when the residual
    exceeds ``RESIDUAL_LIMIT``, or when the solution is unphysical.
    With no drive the ground state is returned directly.
    """
    if not np.any(sys.b):
        return CorrelatorState.ground()

    active = _active_coordinates(sys.scenario)
    a_act = sys.a[np.ix_(active, active)]
    cond = np.linalg.cond(a_act)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SolverError(
            f"steady-state system is ill-conditioned (cond ~ {cond:.3g}) "
            f"for {sys.scenario.describe()}"
        )
    x = np.zeros(DIM)
    x[active] = np.linalg.solve(a_act, -sys.b[active])
    residual = np.max(np.abs(sys.a @ x + sys.b))
    if residual > RESIDUAL_LIMIT:
        raise SolverError(
            f"steady-state residual {residual:.3g} exceeds {RESIDUAL_LIMIT:g} "
            f"for {sys.scenario.describe()}"
        )
    state = CorrelatorState.unpack(x)
    violation = state.physicality_violation()
    if violation > STEADY_PHYSICALITY_TOL:
        raise SolverError(
            f"steady state violates physicality by {violation:.3g} "
            f"for {sys.scenario.describe()}"
        )
    return state


def reflected_flux_fraction(x: CorrelatorState, s: ValidatedScenario) -> float:
    """Fraction of the input flux scattered into the backward mode.

    Steady-state emission rate into the counter-propagating mode (the
    two single-atom rates plus the interference cross term carrying the
    propagation phase) divided by the input photon flux.
    """
    flux = s.drive.flux
    if flux == 0.0:
        raise ValidationError(
            "reflected fraction is undefined at zero flux; "
            "use the single-photon reflectivity instead"
        )
    g1, g2 = s.gamma1, s.gamma2
    u2 = cmath.exp(1j * s.diode.theta2)
    rate = 0.5 * (g1 * (1.0 + x.z1) + g2 * (1.0 + x.z2)) + 2.0 * math.sqrt(g1 * g2) * (
        u2 * x.qpm
    ).real
    nb = rate / flux
    if nb < -FRACTION_SLACK or nb > 1.0 + FRACTION_SLACK:
        raise SolverError(
            f"reflected fraction {nb:.6g} outside [0, 1] for {s.describe()}; "
            "this indicates an assembly or integration bug"
        )
    return min(max(nb, 0.0), 1.0)


@dataclass(frozen=True)
class TransportResult:
    """Steady-state transport observables for one input direction.

    Excitation probabilities are reported in the caller's atom
    labeling, regardless of the internal mirroring used for
    right-incident pulses.
    """

    direction: Direction
    transmittance: float
    reflected_fraction: float
    steady: CorrelatorState
    p1: float
    p2: float
    p12: float


def transport(s: ValidatedScenario) -> TransportResult:
    """Transmittance and excitation probabilities for scenario ``s``.

    A right-incident pulse is simulated on the mirrored diode so the
    input always enters from the left; the resulting probabilities are
    swapped back to the original atom labels.
    """
    sim = s if s.drive.direction is Direction.LEFT_TO_RIGHT else mirror(s)
    state = steady_state(assemble_system(sim))
    nb = reflected_flux_fraction(state, sim)
    p1, p2 = state.p1, state.p2
    if sim is not s:
        p1, p2 = p2, p1
    return TransportResult(
        direction=s.drive.direction,
        transmittance=1.0 - nb,
        reflected_fraction=nb,
        steady=state,
        p1=p1,
        p2=p2,
        p12=state.p12,
    )


@dataclass(frozen=True)
class ExcitationRow:
    flux: float
    direction: Direction
    p1: float
    p2: float
    p12: float


def excitation_curves(
    s: ValidatedScenario, flux_list: Sequence[float]
) -> list[ExcitationRow]:
    """Excitation probabilities versus flux for both input directions.

    Rows are ordered flux-ascending with left incidence before right.
    """
    rows: list[ExcitationRow] = []
    for flux in sorted(float(f) for f in flux_list):
        for direction in (Direction.LEFT_TO_RIGHT, Direction.RIGHT_TO_LEFT):
            drive = replace(s.drive, flux=flux, direction=direction)
            res = transport(
                ValidatedScenario(
                    diode=s.diode,
                    drive=drive,
                    monochromatic=s.monochromatic,
                    mirrored=s.mirrored,
                )
            )
            rows.append(
                ExcitationRow(
                    flux=flux, direction=direction, p1=res.p1, p2=res.p2, p12=res.p12
                )
            )
    return rows


# ---------------------------------------------------------------------------
# Time-dependent form and the autonomy contract
# ---------------------------------------------------------------------------

def _interaction_rhs(
    v: np.ndarray, t: float, s: ValidatedScenario, envelope: float
) -> np.ndarray:
    """Equations of motion with all oscillatory phases explicit.

    ``v`` holds the interaction-picture expectation values in the order
    (z1, z2, zz, s1, s2, qzm, qmz, qpm, qmm) as a complex 9-vector.
    This is a direct transcription of the operator equations with the
    coherent-state field replaced by its c-number, kept separate from
    the rotating-frame implementation as a cross-check.
    """
    z1, z2, zz = v[0].real, v[1].real, v[2].real
    s1, s2, qzm, qmz, qpm, qmm = v[3], v[4], v[5], v[6], v[7], v[8]

    d1, d2 = s.delta1, s.delta2
    g1, g2 = s.gamma1, s.gamma2
    g = math.sqrt(g1 * g2)
    r1, r2 = math.sqrt(g1), math.sqrt(g2)
    u1 = cmath.exp(1j * s.diode.theta1)
    u2 = cmath.exp(1j * s.diode.theta2)
    f12 = cmath.exp(1j * (d1 - d2) * t)
    # Drive c-number at the first atom, including its free rotation.
    ce = s.drive.eta * envelope * cmath.exp(-1j * d1 * t)

    ds1 = -g1 * s1 + g * np.conj(f12) * u2 * qzm + r1 * ce * z1
    dz1 = (
        -2.0 * g1 * (z1 + 1.0)
        - 4.0 * g * (np.conj(f12) * u2 * qpm).real
        - 4.0 * r1 * (ce * np.conj(s1)).real
    )
    ds2 = -g2 * s2 + g * f12 * u1 * qmz + r2 * ce * u1 * f12 * z2
    dz2 = (
        -2.0 * g2 * (z2 + 1.0)
        - 4.0 * g * (f12 * u1 * np.conj(qpm)).real
        - 4.0 * r2 * (ce * u1 * f12 * np.conj(s2)).real
    )
    dqzm = (
        -(2.0 * g1 + g2) * qzm
        - 2.0 * g1 * s2
        - g * f12 * (np.conj(u2) * s1 + (np.conj(u2) + u1) * qmz)
        - 2.0 * r1 * (ce * qpm + np.conj(ce) * qmm)
        + r2 * ce * u1 * f12 * zz
    )
    dqmz = (
        -(g1 + 2.0 * g2) * qmz
        - 2.0 * g2 * s1
        - g * np.conj(f12) * (np.conj(u1) * s2 + (np.conj(u1) + u2) * qzm)
        - 2.0 * r2 * (ce * u1 * f12 * np.conj(qpm) + np.conj(ce * u1 * f12) * qmm)
        + r1 * ce * zz
    )
    dqpm = (
        -(g1 + g2) * qpm
        + 0.5 * g * f12 * (np.conj(u2) * z1 + u1 * z2 + (u1 + np.conj(u2)) * zz)
        + r1 * np.conj(ce) * qzm
        + r2 * ce * u1 * f12 * np.conj(qmz)
    )
    dqmm = -(g1 + g2) * qmm + r1 * ce * qzm + r2 * ce * u1 * f12 * qmz
    dzz = (
        -2.0 * (g1 + g2) * zz
        - 2.0 * g2 * z1
        - 2.0 * g1 * z2
        + 4.0 * g * ((np.conj(u1) + u2) * np.conj(f12) * qpm).real
        - 4.0 * r1 * (ce * np.conj(qmz)).real
        - 4.0 * r2 * (ce * u1 * f12 * np.conj(qzm)).real
    )
    return np.array([dz1, dz2, dzz, ds1, ds2, dqzm, dqmz, dqpm, dqmm], dtype=complex)


def _rotation_phases(s: ValidatedScenario) -> np.ndarray:
    """Frequency of the phase each rotating-frame variable carries."""
    d1, d2 = s.delta1, s.delta2
    return np.array([0.0, 0.0, 0.0, d1, d2, d2, d1, -(d1 - d2), d1 + d2])


def autonomy_residual(
    sys: LinearSystem, state: CorrelatorState, t: float
) -> float:
    """Max componentwise gap between A x + b and the phase-explicit form.

    Transforms ``state`` back to the interaction picture at time ``t``
    (inside the pulse plateau), evaluates the time-dependent equations
    of motion, transforms the derivative into the rotating frame, and
    compares with the autonomous system.  Small residuals certify that
    the rotating-frame phase assignment is exact.
    """
    s = sys.scenario
    if not 0.0 <= t <= s.drive.duration:
        raise ValidationError(f"t = {t:g} is outside the pulse plateau")

    freqs = _rotation_phases(s)
    rot = np.array(
        [state.z1, state.z2, state.zz, state.s1, state.s2,
         state.qzm, state.qmz, state.qpm, state.qmm],
        dtype=complex,
    )
    phases = np.exp(1j * freqs * t)
    tilde = rot / phases
    d_tilde = _interaction_rhs(tilde, t, s, envelope=math.sqrt(0.5 * s.drive.bandwidth))
    d_rot = 1j * freqs * rot + phases * d_tilde

    packed = sys.a @ state.pack() + sys.b
    auto = np.array(
        [
            packed[0], packed[1], packed[2],
            packed[3] + 1j * packed[4],
            packed[5] + 1j * packed[6],
            packed[7] + 1j * packed[8],
            packed[9] + 1j * packed[10],
            packed[11] + 1j * packed[12],
            packed[13] + 1j * packed[14],
        ],
        dtype=complex,
    )
    return float(np.max(np.abs(d_rot - auto)))
