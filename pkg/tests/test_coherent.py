import math

import numpy as np
import pytest
from scipy.linalg import expm

from wgdiode import (
    CorrelatorState,
    Direction,
    SolverError,
    ValidationError,
    assemble_system,
    autonomy_residual,
    excitation_curves,
    integrate_transient,
    mirror,
    reflected_flux_fraction,
    reflectivity_closed_form,
    single_atom_reflection,
    steady_state,
    transport,
)
from conftest import TWO_PI, make_scenario
from oracles import lindblad_correlators, lindblad_liouvillian, lindblad_steady_state


def random_state(rng):
    return CorrelatorState(
        z1=rng.uniform(-1, 0),
        z2=rng.uniform(-1, 0),
        zz=rng.uniform(0, 1),
        s1=complex(*rng.uniform(-0.3, 0.3, 2)),
        s2=complex(*rng.uniform(-0.3, 0.3, 2)),
        qzm=complex(*rng.uniform(-0.3, 0.3, 2)),
        qmz=complex(*rng.uniform(-0.3, 0.3, 2)),
        qpm=complex(*rng.uniform(-0.3, 0.3, 2)),
        qmm=complex(*rng.uniform(-0.3, 0.3, 2)),
    )


def random_scenario(rng, flux=None):
    return make_scenario(
        delta1=rng.uniform(-2, 2),
        delta2=rng.uniform(-2, 2),
        theta=rng.uniform(0, TWO_PI),
        flux=10 ** rng.uniform(-4, 1) if flux is None else flux,
    )


class TestPacking:
    def test_roundtrip(self):
        rng = np.random.default_rng(7)
        state = random_state(rng)
        assert CorrelatorState.unpack(state.pack()) == state

    def test_ground_packs_to_origin(self):
        assert np.all(CorrelatorState.ground().pack() == 0.0)

    def test_probabilities(self):
        g = CorrelatorState.ground()
        assert g.p1 == 0.0 and g.p2 == 0.0 and g.p12 == 0.0
        assert g.physicality_violation() == 0.0

    def test_violation_detects_overlong_coherence(self):
        bad = CorrelatorState(
            z1=-1.0, z2=-1.0, zz=1.0, s1=0.5 + 0j, s2=0j, qzm=0j, qmz=0j, qpm=0j, qmm=0j
        )
        assert bad.physicality_violation() == pytest.approx(0.25)


class TestAssembly:
    def test_zero_flux_has_no_drive_and_ground_fixed_point(self):
        sys_ = assemble_system(make_scenario(flux=0.0))
        assert np.all(sys_.b == 0.0)
        assert np.max(np.abs(sys_.a @ CorrelatorState.ground().pack())) == 0.0

    def test_drive_vector_linear_in_pulse_amplitude(self):
        # Quadrupling the flux doubles the amplitude eta at fixed bandwidth.
        s1 = make_scenario(flux=0.1)
        s2 = make_scenario(flux=0.4)
        b1 = assemble_system(s1).b
        b2 = assemble_system(s2).b
        assert np.allclose(b2, 2.0 * b1, rtol=1e-14, atol=1e-16)

    def test_drive_coupling_block_linear_in_pulse_amplitude(self):
        # The drive also enters A linearly (amplitude times correlator
        # terms); without those entries saturation would be impossible.
        a0 = assemble_system(make_scenario(flux=0.0)).a
        a1 = assemble_system(make_scenario(flux=0.1)).a
        a2 = assemble_system(make_scenario(flux=0.4)).a
        assert np.allclose(a2 - a0, 2.0 * (a1 - a0), rtol=1e-13, atol=1e-15)

    def test_uncoupled_partner_reduces_to_driven_single_atom(self):
        delta, flux = 0.7, 0.3
        eps = math.sqrt(flux)
        sys_ = assemble_system(make_scenario(delta1=delta, gamma2=0.0, flux=flux))
        # Rows p1, Re s1, Im s1 must not couple to any other coordinate.
        block_idx = [0, 3, 4]
        other = [i for i in range(15) if i not in block_idx]
        assert np.max(np.abs(sys_.a[np.ix_(block_idx, other)])) == 0.0
        expected = np.array(
            [
                [-2.0, -4.0 * eps, 0.0],
                [eps, -1.0, -delta],
                [0.0, delta, -1.0],
            ]
        )
        assert np.allclose(sys_.a[np.ix_(block_idx, block_idx)], expected, atol=1e-14)

    def test_autonomy_residual_small_on_random_states(self):
        rng = np.random.default_rng(11)
        worst = 0.0
        for _ in range(20):
            s = random_scenario(rng)
            sys_ = assemble_system(s)
            t = rng.uniform(0.0, s.drive.duration)
            worst = max(worst, autonomy_residual(sys_, random_state(rng), t))
        assert worst < 1e-12

    def test_autonomy_residual_rejects_time_outside_plateau(self):
        s = make_scenario()
        sys_ = assemble_system(s)
        with pytest.raises(ValidationError, match="plateau"):
            autonomy_residual(sys_, CorrelatorState.ground(), s.drive.duration + 1.0)


class TestSteadyState:
    def test_zero_drive_returns_ground(self):
        assert steady_state(assemble_system(make_scenario(flux=0.0))) == CorrelatorState.ground()

    def test_resonant_single_atom_half_inversion(self):
        s = make_scenario(delta1=0.0, gamma2=0.0, flux=0.5, theta=1.0)
        state = steady_state(assemble_system(s))
        assert state.z1 == pytest.approx(-0.5, abs=1e-12)
        assert reflected_flux_fraction(state, s) == pytest.approx(0.5, abs=1e-12)

    @pytest.mark.parametrize("delta", [0.0, 0.5, 1.3])
    @pytest.mark.parametrize("flux", [1e-3, 0.1, 1.0])
    def test_single_atom_inversion_formula(self, delta, flux):
        s = make_scenario(delta1=delta, gamma2=0.0, flux=flux, theta=2.0)
        state = steady_state(assemble_system(s))
        expected = -(1.0 + delta**2) / (1.0 + delta**2 + 2.0 * flux)
        assert state.z1 == pytest.approx(expected, rel=1e-12)

    def test_residual_and_physicality(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            sys_ = assemble_system(random_scenario(rng))
            state = steady_state(sys_)
            residual = np.max(np.abs(sys_.a @ state.pack() + sys_.b))
            assert residual < 1e-10
            assert state.physicality_violation() < 1e-8

    def test_dark_configuration_reports_parameters(self):
        # Two resonant atoms with zero phase hold a perfectly dark state.
        s = make_scenario(delta1=0.0, delta2=0.0, theta=0.0, flux=0.1)
        with pytest.raises(SolverError, match="ill-conditioned.*theta=0"):
            steady_state(assemble_system(s))

    def test_matches_transient_at_generic_working_point(self):
        s = make_scenario(delta1=0.7, delta2=-0.3, theta=math.pi, flux=0.2)
        sys_ = assemble_system(s)
        fixed = steady_state(sys_).pack()
        end = integrate_transient(sys_, CorrelatorState.ground(), 200.0).states[-1]
        assert np.max(np.abs(end - fixed)) < 1e-6

    def test_matches_transient_at_subradiant_working_point(self, fig3_scenario):
        # The reference diode sits near a subradiant configuration whose
        # slowest relaxation rate is ~3e-3 of the coupling, so the
        # transient needs a correspondingly longer horizon.
        sys_ = assemble_system(fig3_scenario)
        slowest = np.max(np.linalg.eigvals(sys_.a).real)
        assert -0.05 < slowest < 0.0
        fixed = steady_state(sys_).pack()
        end = integrate_transient(sys_, CorrelatorState.ground(), 1500.0).states[-1]
        assert np.max(np.abs(end - fixed)) < 1e-6


class TestTransient:
    def test_ground_is_fixed_point_without_drive(self):
        sys_ = assemble_system(make_scenario(flux=0.0))
        traj = integrate_transient(sys_, CorrelatorState.ground(), 10.0)
        assert np.max(np.abs(traj.states)) == 0.0

    def test_free_coherence_decay(self):
        # Lone coupled atom, no drive: |s1| decays at the coupling rate.
        sys_ = assemble_system(make_scenario(delta1=0.8, gamma2=0.0, flux=0.0))
        x0 = CorrelatorState(
            z1=-1.0, z2=-1.0, zz=1.0, s1=0.1 + 0j, s2=0j, qzm=0j, qmz=0j, qpm=0j, qmm=0j
        )
        traj = integrate_transient(sys_, x0, 3.0, sample_times=[1.0, 2.0])
        for t in (1.0, 2.0):
            i = int(np.searchsorted(traj.times, t))
            assert traj.times[i] == pytest.approx(t)
            assert abs(traj.state(i).s1) == pytest.approx(0.1 * math.exp(-t), rel=1e-7)

    def test_matrix_exponential_oracle(self, fig3_scenario):
        sys_ = assemble_system(fig3_scenario)
        traj = integrate_transient(sys_, CorrelatorState.ground(), 50.0, tol=1e-9)
        shift = np.linalg.solve(sys_.a, sys_.b)
        exact = expm(sys_.a * 50.0) @ (CorrelatorState.ground().pack() + shift) - shift
        assert np.max(np.abs(traj.states[-1] - exact)) < 1e-8

    def test_physicality_along_trajectory(self, fig3_scenario):
        sys_ = assemble_system(fig3_scenario)
        traj = integrate_transient(sys_, CorrelatorState.ground(), 100.0)
        assert traj.max_physicality_violation() < 1e-6

    def test_sample_times_included(self, fig3_scenario):
        sys_ = assemble_system(fig3_scenario)
        wanted = [0.123, 4.56, 7.0]
        traj = integrate_transient(sys_, CorrelatorState.ground(), 10.0, sample_times=wanted)
        for t in wanted:
            assert np.any(np.isclose(traj.times, t))

    def test_rejects_bad_arguments(self, fig3_scenario):
        sys_ = assemble_system(fig3_scenario)
        with pytest.raises(ValidationError):
            integrate_transient(sys_, CorrelatorState.ground(), -1.0)
        with pytest.raises(ValidationError):
            integrate_transient(sys_, CorrelatorState.ground(), 1.0, tol=0.0)
        with pytest.raises(ValidationError):
            integrate_transient(
                sys_, CorrelatorState.ground(), 1.0, sample_times=[2.0]
            )


class TestReflectedFraction:
    def test_ground_state_reflects_nothing(self, fig3_scenario):
        assert reflected_flux_fraction(CorrelatorState.ground(), fig3_scenario) == 0.0

    def test_saturated_pair_rate(self):
        s = make_scenario(flux=100.0)
        saturated = CorrelatorState(
            z1=1.0, z2=1.0, zz=1.0, s1=0j, s2=0j, qzm=0j, qmz=0j, qpm=0j, qmm=0j
        )
        assert reflected_flux_fraction(saturated, s) == pytest.approx(0.02)

    def test_zero_flux_is_undefined(self):
        s = make_scenario(flux=0.0)
        with pytest.raises(ValidationError, match="single-photon"):
            reflected_flux_fraction(CorrelatorState.ground(), s)

    def test_out_of_range_fraction_is_a_bug_signal(self):
        s = make_scenario(flux=1e-6)
        saturated = CorrelatorState(
            z1=1.0, z2=1.0, zz=1.0, s1=0j, s2=0j, qzm=0j, qmz=0j, qpm=0j, qmm=0j
        )
        with pytest.raises(SolverError, match="outside"):
            reflected_flux_fraction(saturated, s)


class TestTransport:
    def test_resonant_pair_is_near_perfect_mirror_at_low_power(self):
        s = make_scenario(delta1=0.0, delta2=0.0, theta=math.pi, flux=1e-4)
        assert transport(s).transmittance == pytest.approx(0.0, abs=0.01)

    def test_saturated_diode_is_transparent_both_ways(self):
        for direction in Direction:
            s = make_scenario(flux=100.0, direction=direction)
            assert transport(s).transmittance > 0.9

    def test_symmetric_diode_has_equal_transmittances(self):
        left = make_scenario(delta1=0.4, delta2=0.4, flux=0.2)
        right = make_scenario(
            delta1=0.4, delta2=0.4, flux=0.2, direction=Direction.RIGHT_TO_LEFT
        )
        assert transport(left).transmittance == transport(right).transmittance

    def test_symmetric_scenarios_transmit_equally_within_tolerance(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            d = rng.uniform(-2, 2)
            theta = rng.uniform(0, TWO_PI)
            flux = 10 ** rng.uniform(-3, 0.5)
            t = {}
            for direction in Direction:
                s = make_scenario(
                    delta1=d, delta2=d, theta=theta, flux=flux, direction=direction
                )
                t[direction] = transport(s).transmittance
            assert abs(t[Direction.LEFT_TO_RIGHT] - t[Direction.RIGHT_TO_LEFT]) < 1e-9

    def test_right_incidence_excites_resonant_atom_first(self):
        s = make_scenario(flux=1e-3, direction=Direction.RIGHT_TO_LEFT)
        res = transport(s)
        assert res.direction is Direction.RIGHT_TO_LEFT
        # Atom 2 is the resonant one and faces the right-incident beam.
        assert res.p2 > 10.0 * res.p1

    def test_low_power_matches_single_photon_reflectivity(self):
        rng = np.random.default_rng(17)
        for _ in range(8):
            d1, d2 = rng.uniform(-1.5, 1.5, 2)
            theta = rng.uniform(0.3, TWO_PI - 0.3)
            s = make_scenario(delta1=d1, delta2=d2, theta=theta, flux=1e-5)
            nb = transport(s).reflected_fraction
            assert abs(nb - reflectivity_closed_form(d1, d2, theta)) < 1e-2

    def test_single_atom_saturation_curve(self):
        # Monotone reflected fraction, pinned to the saturation law.
        for delta in (0.0, 0.7, 1.5):
            previous = 1.1
            for flux in (1e-3, 1e-2, 0.1, 1.0, 10.0):
                s = make_scenario(delta1=delta, gamma2=0.0, flux=flux, theta=0.5)
                nb = transport(s).reflected_fraction
                law = single_atom_reflection(delta, flux)
                assert abs(nb - law) / law < 0.01
                assert nb < previous
                previous = nb


class TestExcitationCurves:
    def test_row_ordering_and_low_power_limit(self, fig3_scenario):
        rows = excitation_curves(fig3_scenario, [1e-2, 1e-6, 1.0])
        assert [r.flux for r in rows] == [1e-6, 1e-6, 1e-2, 1e-2, 1.0, 1.0]
        assert [r.direction for r in rows[:2]] == [
            Direction.LEFT_TO_RIGHT,
            Direction.RIGHT_TO_LEFT,
        ]
        for r in rows[:2]:
            assert r.p1 < 1e-3 and r.p2 < 1e-3 and r.p12 < 1e-6


class TestLindbladOracle:
    """The correlator system against the standard two-atom master equation."""

    def test_generator_equivalence_on_random_density_matrices(self):
        from wgdiode.coherent import _packed_rhs

        rng = np.random.default_rng(23)
        worst = 0.0
        for _ in range(10):
            d1, d2 = rng.uniform(-2, 2, 2)
            theta = rng.uniform(0, TWO_PI)
            eps = math.sqrt(10 ** rng.uniform(-4, 0.8))
            raw = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            rho = raw @ raw.conj().T
            rho /= np.trace(rho).real

            c = lindblad_correlators(rho)
            x = CorrelatorState(
                z1=c["z1"].real, z2=c["z2"].real, zz=c["zz"].real,
                s1=c["s1"], s2=c["s2"], qzm=c["qzm"], qmz=c["qmz"],
                qpm=c["qpm"], qmm=c["qmm"],
            ).pack()
            dx = _packed_rhs(
                x, d1=d1, d2=d2, g1=1.0, g2=1.0,
                theta1=theta / 2, theta2=theta / 2, eps=eps,
            )

            liou = lindblad_liouvillian(d1, d2, 1.0, 1.0, theta, eps)
            drho = (liou @ rho.flatten(order="F")).reshape(4, 4, order="F")
            dc = lindblad_correlators(drho)
            # Derivatives pack without the ground-state shift.
            predicted = np.array(
                [
                    dc["z1"].real, dc["z2"].real, dc["zz"].real,
                    dc["s1"].real, dc["s1"].imag,
                    dc["s2"].real, dc["s2"].imag,
                    dc["qzm"].real, dc["qzm"].imag,
                    dc["qmz"].real, dc["qmz"].imag,
                    dc["qpm"].real, dc["qpm"].imag,
                    dc["qmm"].real, dc["qmm"].imag,
                ]
            )
            worst = max(worst, float(np.max(np.abs(dx - predicted))))
        assert worst < 1e-13

    def test_steady_state_matches_master_equation(self):
        rng = np.random.default_rng(29)
        for _ in range(5):
            d1, d2 = rng.uniform(-2, 2, 2)
            theta = rng.uniform(0.2, TWO_PI - 0.2)
            flux = 10 ** rng.uniform(-3, 0.5)
            s = make_scenario(delta1=d1, delta2=d2, theta=theta, flux=flux)
            mine = steady_state(assemble_system(s))
            rho = lindblad_steady_state(d1, d2, theta, flux)
            c = lindblad_correlators(rho)
            assert mine.z1 == pytest.approx(c["z1"].real, abs=1e-9)
            assert mine.zz == pytest.approx(c["zz"].real, abs=1e-9)
            assert mine.s1 == pytest.approx(c["s1"], abs=1e-9)
            assert mine.qpm == pytest.approx(c["qpm"], abs=1e-9)
            assert mine.p12 == pytest.approx(rho[3, 3].real, abs=1e-9)
