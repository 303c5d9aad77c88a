"""Parameter types, validation and mirroring for the two-atom diode.

Unit convention: every rate (decay, photon flux, pulse bandwidth) and
every detuning is expressed in units of a reference decay rate, and
times in the inverse of that rate.  ``validate`` rescales the inputs so
that the reference rate equals the first atom's coupling (gamma1 = 1
after canonicalization); the inter-atom propagation phase theta is
dimensionless and is reduced modulo 2*pi.

Reverse-direction transport is obtained by spatially mirroring the
diode (``mirror``): the atom ordering is swapped so that the simulated
input always enters the first-encountered atom from the left.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

TWO_PI = 2.0 * math.pi

#: Bandwidth (in reference-rate units) above which the steady-state,
#: monochromatic treatment of a square pulse becomes questionable.
MONOCHROMATIC_BANDWIDTH = 0.1


class ValidationError(ValueError):
    """A scenario violates a physical or numeric precondition."""


class Direction(enum.Enum):
    """Side from which the input pulse enters the diode."""

    LEFT_TO_RIGHT = "left"
    RIGHT_TO_LEFT = "right"

    def flipped(self) -> "Direction":
        if self is Direction.LEFT_TO_RIGHT:
            return Direction.RIGHT_TO_LEFT
        return Direction.LEFT_TO_RIGHT


@dataclass(frozen=True)
class AtomParams:
    """One two-level emitter: detuning and waveguide decay rate.

    Both numbers are in units of the reference decay rate.  The
    detuning is drive frequency minus transition frequency.
    """

    detuning: float
    decay_rate: float


@dataclass(frozen=True)
class DiodeConfig:
    """The two atoms plus the round-trip propagation phase theta.

    ``atom1`` is the left atom, first hit by a left-incident pulse.
    The atom positions and their separation enter only through theta;
    propagation delay between the atoms is neglected (Markovian limit),
    so the phase is split evenly: theta1 = theta2 = theta / 2.
    """

    atom1: AtomParams
    atom2: AtomParams
    theta: float

    @property
    def theta1(self) -> float:
        return 0.5 * self.theta

    @property
    def theta2(self) -> float:
        return 0.5 * self.theta

    @property
    def delta12(self) -> float:
        """Detuning difference between the two atoms."""
        return self.atom1.detuning - self.atom2.detuning


@dataclass(frozen=True)
class DriveConfig:
    """Coherent square-pulse drive.

    The envelope has amplitude sqrt(bandwidth / 2) on the interval
    [0, 2 / bandwidth] and zero elsewhere, so the mean photon number
    ``photon_number`` and the mean photon flux obey
    flux = photon_number * bandwidth / 2.
    """

    direction: Direction = Direction.LEFT_TO_RIGHT
    flux: float = 0.1
    bandwidth: float = 0.01

    @property
    def duration(self) -> float:
        """Pulse length 2 / bandwidth."""
        return 2.0 / self.bandwidth

    @property
    def photon_number(self) -> float:
        """Mean photon number carried by the pulse."""
        return 2.0 * self.flux / self.bandwidth

    @property
    def eta(self) -> float:
        """Coherent amplitude of the pulse mode, |eta|^2 = photon_number."""
        return math.sqrt(self.photon_number)

    @property
    def amplitude(self) -> float:
        """Plateau drive amplitude eta * sqrt(bandwidth / 2) = sqrt(flux)."""
        return math.sqrt(self.flux)

    def envelope(self, t: float) -> float:
        """Square envelope value at time t."""
        if 0.0 <= t <= self.duration:
            return math.sqrt(0.5 * self.bandwidth)
        return 0.0


@dataclass(frozen=True)
class ValidatedScenario:
    """Canonicalized diode + drive, safe to hand to the solvers.

    ``mirrored`` records whether the atom labels are swapped relative
    to the configuration the user described; observables are mapped
    back to the user's labels by the transport layer.  Both atoms start
    in the ground state: the diode is passive, its state carries no
    memory of previous pulses.
    """

    diode: DiodeConfig
    drive: DriveConfig
    monochromatic: bool
    mirrored: bool = False

    @property
    def delta1(self) -> float:
        return self.diode.atom1.detuning

    @property
    def delta2(self) -> float:
        return self.diode.atom2.detuning

    @property
    def gamma1(self) -> float:
        return self.diode.atom1.decay_rate

    @property
    def gamma2(self) -> float:
        return self.diode.atom2.decay_rate

    @property
    def theta(self) -> float:
        return self.diode.theta

    def describe(self) -> str:
        return (
            f"delta1={self.delta1:g}, delta2={self.delta2:g}, "
            f"gamma1={self.gamma1:g}, gamma2={self.gamma2:g}, "
            f"theta={self.theta:g}, flux={self.drive.flux:g}, "
            f"bandwidth={self.drive.bandwidth:g}"
        )


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


def validate(diode: DiodeConfig, drive: DriveConfig) -> ValidatedScenario:
    """Check and canonicalize a diode + drive configuration.

    Rescales all rates so the reference decay rate is atom 1's coupling
    (atom 2's if atom 1 is uncoupled) and reduces theta modulo 2*pi.
    Raises :class:`ValidationError` on negative decay rates, negative
    flux, non-positive bandwidth, uncoupled atoms, or non-finite input.
    Warns when the pulse bandwidth is too large for the monochromatic
    (steady-state) treatment to be trustworthy.
    """
    d1 = _require_finite("atom1.detuning", diode.atom1.detuning)
    d2 = _require_finite("atom2.detuning", diode.atom2.detuning)
    g1 = _require_finite("atom1.decay_rate", diode.atom1.decay_rate)
    g2 = _require_finite("atom2.decay_rate", diode.atom2.decay_rate)
    theta = _require_finite("theta", diode.theta)
    flux = _require_finite("flux", drive.flux)
    bandwidth = _require_finite("bandwidth", drive.bandwidth)

    if g1 < 0.0 or g2 < 0.0:
        raise ValidationError(f"decay rates must be >= 0, got ({g1:g}, {g2:g})")
    if g1 == 0.0 and g2 == 0.0:
        raise ValidationError("no atom is coupled to the waveguide (gamma1 = gamma2 = 0)")
    if flux < 0.0:
        raise ValidationError(f"flux must be >= 0, got {flux:g}")
    if bandwidth <= 0.0:
        raise ValidationError(f"bandwidth must be > 0, got {bandwidth:g}")

    gamma_ref = g1 if g1 > 0.0 else g2
    g1, g2 = g1 / gamma_ref, g2 / gamma_ref
    d1, d2 = d1 / gamma_ref, d2 / gamma_ref
    flux /= gamma_ref
    bandwidth /= gamma_ref

    theta = math.fmod(theta, TWO_PI)
    if theta < 0.0:
        theta += TWO_PI

    if bandwidth > MONOCHROMATIC_BANDWIDTH:
        warnings.warn(
            f"bandwidth {bandwidth:g} exceeds {MONOCHROMATIC_BANDWIDTH:g} gamma_ref; "
            "the square pulse is not monochromatic and steady-state "
            "transport results are approximate",
            stacklevel=2,
        )

    min_gamma = min(g for g in (g1, g2) if g > 0.0)
    monochromatic = bandwidth <= MONOCHROMATIC_BANDWIDTH * min_gamma

    return ValidatedScenario(
        diode=DiodeConfig(
            atom1=AtomParams(detuning=d1, decay_rate=g1),
            atom2=AtomParams(detuning=d2, decay_rate=g2),
            theta=theta,
        ),
        drive=DriveConfig(direction=drive.direction, flux=flux, bandwidth=bandwidth),
        monochromatic=monochromatic,
    )


def mirror(s: ValidatedScenario) -> ValidatedScenario:
    """Spatially mirror the diode: swap the atoms, flip the direction.

    theta is a round-trip phase over the (unchanged) separation and is
    preserved.  Applying ``mirror`` twice returns the original scenario.
    """
    return ValidatedScenario(
        diode=DiodeConfig(atom1=s.diode.atom2, atom2=s.diode.atom1, theta=s.diode.theta),
        drive=replace(s.drive, direction=s.drive.direction.flipped()),
        monochromatic=s.monochromatic,
        mirrored=not s.mirrored,
    )
