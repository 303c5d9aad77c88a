import math

import pytest

from wgdiode import AtomParams, DiodeConfig, Direction, DriveConfig, validate

TWO_PI = 2.0 * math.pi

FIG3_DELTA = 0.12
FIG3_THETA = TWO_PI * 0.982


def make_scenario(
    delta1=FIG3_DELTA,
    delta2=0.0,
    theta=FIG3_THETA,
    flux=0.1,
    bandwidth=0.01,
    gamma1=1.0,
    gamma2=1.0,
    direction=Direction.LEFT_TO_RIGHT,
):
    diode = DiodeConfig(
        atom1=AtomParams(detuning=delta1, decay_rate=gamma1),
        atom2=AtomParams(detuning=delta2, decay_rate=gamma2),
        theta=theta,
    )
    return validate(diode, DriveConfig(direction=direction, flux=flux, bandwidth=bandwidth))


@pytest.fixture
def fig3_scenario():
    return make_scenario()
