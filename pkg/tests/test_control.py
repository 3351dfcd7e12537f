import numpy as np
import pytest
import scipy.linalg

from rpsense import control
from rpsense.control import (
    FreeEvolution,
    Pulse,
    PulseSequence,
    PulseTarget,
    RPStateLabel,
    apply_sequence,
    controlled_yield_scan,
    stroboscopic_evolution,
    teer_contrast,
    toggle_field_nulling_scan,
)
from rpsense.dynamics import yield_with_recombination
from rpsense.spincore import FULL_DIMS, DensityMatrix, RadicalPairParams, build_hamiltonian

FIG = RadicalPairParams(h_a=1.0, omega=0.0, g=0.1, kappa=0.01)


def full_initial_state(p, sensor_index=1):
    from rpsense.spincore import rp_initial_state
    ket = np.zeros(3, dtype=complex)
    ket[sensor_index] = 1.0
    rho = np.kron(np.outer(ket, ket.conj()), rp_initial_state(p).matrix)
    return DensityMatrix(rho, FULL_DIMS)


class TestApplySequence:
    def test_empty_sequence_is_identity(self):
        rho0 = full_initial_state(FIG)
        out = apply_sequence(PulseSequence([]), rho0, FIG)
        assert np.abs(out.matrix - rho0.matrix).max() <= 1e-14

    def test_double_pi_pulse_cancels(self):
        rho0 = full_initial_state(FIG)
        seq = PulseSequence([
            Pulse(PulseTarget.SENSOR, "x", np.pi),
            Pulse(PulseTarget.SENSOR, "x", np.pi),
        ])
        out = apply_sequence(seq, rho0, FIG)
        assert np.abs(out.matrix - rho0.matrix).max() <= 1e-12

    def test_free_evolution_composes(self):
        rho0 = full_initial_state(FIG.replace(omega=0.3))
        a = apply_sequence(PulseSequence([FreeEvolution(1.1), FreeEvolution(2.3)]), rho0, FIG)
        b = apply_sequence(PulseSequence([FreeEvolution(3.4)]), rho0, FIG)
        assert np.abs(a.matrix - b.matrix).max() <= 1e-12

    def test_dimension_mismatch_rejected(self):
        from rpsense.spincore import rp_initial_state
        with pytest.raises(ValueError, match="layout"):
            apply_sequence(PulseSequence([]), rp_initial_state(FIG), FIG)

    def test_pulse_validation(self):
        with pytest.raises(ValueError, match="axis"):
            Pulse(PulseTarget.SENSOR, "z", np.pi)
        with pytest.raises(ValueError, match="angle"):
            Pulse(PulseTarget.SENSOR, "x", 4 * np.pi)
        with pytest.raises(ValueError, match="duration"):
            FreeEvolution(-1.0)


class TestStroboscopicEvolution:
    def closed_form_reference(self, p, tau, m):
        # independent oracle: scipy expm instead of the eigh propagator
        h0 = build_hamiltonian(p).matrix
        h1 = build_hamiltonian(p.replace(omega=p.omega + p.g)).matrix
        u0 = scipy.linalg.expm(1j * h0 * tau)
        u1 = scipy.linalg.expm(1j * h1 * tau)
        p01 = np.zeros((2, 2)); p01[0, 1] = 1
        p10 = np.zeros((2, 2)); p10[1, 0] = 1
        return (np.kron(p10, np.linalg.matrix_power(u1 @ u0, m // 2))
                + np.kron(p01, np.linalg.matrix_power(u0 @ u1, m // 2)))

    def test_no_pulses_returns_free_propagator(self):
        p = FIG.replace(omega=0.4)
        v = stroboscopic_evolution(p, 0.9, 0).matrix
        h0 = build_hamiltonian(p).matrix
        h1 = build_hamiltonian(p.replace(omega=p.omega + p.g)).matrix
        expected = np.zeros((16, 16), dtype=complex)
        expected[:8, :8] = scipy.linalg.expm(1j * h0 * 0.9)
        expected[8:, 8:] = scipy.linalg.expm(1j * h1 * 0.9)
        assert np.abs(v - expected).max() <= 1e-12

    def test_two_segment_identity(self):
        p = FIG.replace(omega=0.5)
        v = stroboscopic_evolution(p, 0.7, 2).matrix
        assert np.abs(v - self.closed_form_reference(p, 0.7, 2)).max() <= 1e-12

    @pytest.mark.parametrize("m", [2, 4, 8])
    def test_unitarity(self, m):
        v = stroboscopic_evolution(FIG, 0.8, m).matrix
        assert np.abs(v.conj().T @ v - np.eye(16)).max() <= 1e-12

    def test_random_parameters_match_closed_form(self):
        rng = np.random.default_rng(2024)
        for _ in range(10):
            p = RadicalPairParams(h_a=rng.uniform(0.5, 2.0), omega=rng.uniform(0, 2),
                                  g=rng.uniform(0, 0.5), kappa=0.01)
            tau = rng.uniform(0.1, 3.0)
            for m in (2, 4, 8, 16):
                v = stroboscopic_evolution(p, tau, m).matrix
                ref = self.closed_form_reference(p, tau, m)
                assert np.abs(v - ref).max() <= 1e-12

    def test_odd_pulse_count_rejected(self):
        with pytest.raises(ValueError, match="even"):
            stroboscopic_evolution(FIG, 1.0, 3)


class TestControlledYield:
    def test_decoupled_sensor_is_pulse_invariant(self):
        p = FIG.replace(g=0.0, omega=0.4)
        taus = np.array([0.5, 2.0, 7.0])
        _, y0 = controlled_yield_scan(p, taus, 0)
        _, y4 = controlled_yield_scan(p, taus, 4)
        assert np.abs(y0 - y0[0]).max() <= 1e-8
        assert np.abs(y4 - y0).max() <= 1e-8

    def test_no_pulses_reduces_to_uncontrolled_yield(self):
        # cross-check the exact segment transform against the quadrature route
        p = FIG.replace(omega=0.3)
        _, y = controlled_yield_scan(p, np.array([1.0]), 0)
        quad = yield_with_recombination(_ps_callable(p), p.kappa_tilde)
        assert y[0] == pytest.approx(quad, abs=1e-8)

    def test_pulse_train_modulates_yield(self):
        taus = np.linspace(0.5, 20.0, 20)
        _, y0 = controlled_yield_scan(FIG, taus, 0)
        _, y4 = controlled_yield_scan(FIG, taus, 4)
        margin = np.abs(y4 - y0).max()
        assert margin > 1e-3

    def test_odd_m_rejected(self):
        with pytest.raises(ValueError, match="even"):
            controlled_yield_scan(FIG, [1.0], 1)


def _ps_callable(p):
    from rpsense import spincore
    from rpsense.dynamics import observable_spectrum
    from rpsense.kernels import phase_series
    from rpsense.spincore import rp_initial_state, singlet_projector
    h = build_hamiltonian(p)
    amps, freqs = observable_spectrum(h, rp_initial_state(p).matrix,
                                      singlet_projector(spincore.RP_DIMS))
    return lambda t: phase_series(amps, freqs, t)


class TestTeerContrast:
    TAUS = np.linspace(0.0, 50.0, 201)

    @pytest.mark.parametrize("variant", ["pi", "pi2"])
    def test_zero_delay_gives_unit_contrast(self, variant):
        for state in RPStateLabel:
            series = teer_contrast(FIG, state, np.array([0.0, 1.0]), variant=variant)
            assert series.values[0] == pytest.approx(1.0, abs=1e-12)

    def test_pi_variant_singlet_and_t0_coincide(self):
        s = teer_contrast(FIG, RPStateLabel.S, self.TAUS, variant="pi")
        t0 = teer_contrast(FIG, RPStateLabel.T0, self.TAUS, variant="pi")
        assert np.abs(s.values - t0.values).max() <= 1e-12
        assert np.abs(s.values - 1.0).max() <= 1e-12

    @pytest.mark.parametrize("state", [RPStateLabel.T_PLUS, RPStateLabel.T_MINUS])
    def test_pi_variant_polarized_triplets_oscillate_at_2g(self, state):
        series = teer_contrast(FIG, state, self.TAUS, variant="pi")
        assert np.abs(series.values - np.cos(2 * FIG.g * self.TAUS)).max() <= 1e-12

    def test_pi2_variant_closed_forms(self):
        g, taus = FIG.g, self.TAUS
        s = teer_contrast(FIG, RPStateLabel.S, taus, variant="pi2")
        assert np.abs(s.values - 1.0).max() <= 1e-12
        t0 = teer_contrast(FIG, RPStateLabel.T0, taus, variant="pi2")
        assert np.abs(t0.values - np.cos(g * taus)).max() <= 1e-12
        tp = teer_contrast(FIG, RPStateLabel.T_PLUS, taus, variant="pi2")
        ref = np.cos(g * taus) * (1 + np.cos(g * taus)) / 2
        assert np.abs(tp.values - ref).max() <= 1e-12

    def test_pi2_variant_tplus_tminus_degenerate(self):
        # with a product pulse on the electrons and the echo's cosine
        # readout, T+ and T- give identical curves (per-qubit unitaries
        # satisfy |<s'|u|s>| = |<s'-bar|u|s-bar>| and frozen phases are odd
        # under the global flip): pinned behavior, see docs
        tp = teer_contrast(FIG, RPStateLabel.T_PLUS, self.TAUS, variant="pi2")
        tm = teer_contrast(FIG, RPStateLabel.T_MINUS, self.TAUS, variant="pi2")
        assert np.abs(tp.values - tm.values).max() <= 1e-12

    def test_full_dynamics_mode_runs(self):
        taus = np.linspace(0.0, 10.0, 21)
        series = teer_contrast(FIG.replace(omega=0.5), RPStateLabel.T_PLUS, taus,
                               variant="pi", frozen_rp=False)
        assert series.values[0] == pytest.approx(1.0, abs=1e-12)
        assert np.all(np.abs(series.values) <= 1 + 1e-10)

    def test_variant_validation(self):
        with pytest.raises(ValueError, match="variant"):
            teer_contrast(FIG, RPStateLabel.S, [0.0, 1.0], variant="pi3")


class TestToggleFieldNulling:
    def test_peak_sits_at_coupling(self):
        omegas = np.linspace(0.0, 0.2, 41)  # step 0.005
        w, y = toggle_field_nulling_scan(FIG, omegas)
        w_star = w[np.argmax(y)]
        assert abs(w_star - FIG.g) <= FIG.kappa_tilde + 0.005

    def test_decoupled_peak_at_zero(self):
        p = FIG.replace(g=0.0)
        omegas = np.linspace(-0.05, 0.05, 21)
        w, y = toggle_field_nulling_scan(p, omegas)
        assert abs(w[np.argmax(y)]) <= 0.005 + 1e-12

    def test_symmetric_about_effective_zero(self):
        offsets = np.array([-0.04, -0.01, 0.01, 0.04])
        w, y = toggle_field_nulling_scan(FIG, FIG.g + offsets)
        assert y[0] == pytest.approx(y[3], abs=1e-6)
        assert y[1] == pytest.approx(y[2], abs=1e-6)
