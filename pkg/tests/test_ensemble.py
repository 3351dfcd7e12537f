import numpy as np
import pytest

from rpsense.dynamics import TimeGrid, sensor_contrast_numeric
from rpsense.ensemble import (
    EnsembleSpec,
    averaged_contrast_series,
    gauss_average,
    random_phase_triplet_series,
)
from rpsense.spincore import RadicalPairParams

FIG = RadicalPairParams(h_a=1.0, omega=0.0, g=0.1, kappa=0.01)


def tail_amplitude(values):
    tail = values[len(values) // 2:]
    return (tail.max() - tail.min()) / 2


class TestGaussAverage:
    SPEC = EnsembleSpec(g0=0.4, eta=50.0, n_nodes=21)

    def test_constant(self):
        assert gauss_average(lambda g: 3.25, self.SPEC) == pytest.approx(3.25, abs=1e-12)

    def test_first_moment(self):
        assert gauss_average(lambda g: g, self.SPEC) == pytest.approx(0.4, abs=1e-10)

    def test_second_moment_against_dense_trapezoid(self):
        expected = self.SPEC.g0**2 + 1 / (2 * self.SPEC.eta)
        assert gauss_average(lambda g: g**2, self.SPEC) == pytest.approx(expected, abs=1e-8)
        # independent oracle: dense trapezoid over +-10 sigma
        sigma = np.sqrt(1 / (2 * self.SPEC.eta))
        x = np.linspace(self.SPEC.g0 - 10 * sigma, self.SPEC.g0 + 10 * sigma, 40001)
        w = np.exp(-self.SPEC.eta * (x - self.SPEC.g0) ** 2)
        dense = np.trapezoid(w * x**2, x) / np.trapezoid(w, x)
        assert gauss_average(lambda g: g**2, self.SPEC) == pytest.approx(dense, abs=1e-8)

    def test_polynomial_exactness_up_to_degree(self):
        # n nodes integrate any polynomial of degree <= 2n-1 exactly
        spec = EnsembleSpec(g0=0.2, eta=8.0, n_nodes=7)
        rng = np.random.default_rng(11)
        coeffs = rng.normal(size=14)  # degree 13 = 2*7 - 1
        sigma2 = 1 / (2 * spec.eta)
        # closed central moments: E[(g-g0)^k] = sigma^k (k-1)!! for even k
        double_fact = {0: 1, 2: 1, 4: 3, 6: 15, 8: 105, 10: 945, 12: 10395}
        expected = 0.0
        for k, c in enumerate(coeffs):
            total = 0.0
            for j in range(0, k + 1, 1):
                if (k - j) % 2 == 0:
                    from math import comb
                    total += comb(k, j) * spec.g0**j * sigma2 ** ((k - j) / 2) * double_fact[k - j]
            expected += c * total
        got = gauss_average(lambda g: np.polyval(coeffs[::-1], g), spec)
        assert got == pytest.approx(expected, rel=1e-8)

    def test_linearity(self):
        f1, f2 = (lambda g: g**2), (lambda g: np.cos(g))
        lhs = gauss_average(lambda g: 2 * f1(g) - 3 * f2(g), self.SPEC)
        rhs = 2 * gauss_average(f1, self.SPEC) - 3 * gauss_average(f2, self.SPEC)
        assert lhs == pytest.approx(rhs, abs=1e-12)


class TestAveragedContrast:
    GRID = TimeGrid(0.0, 200.0, 1001)

    def test_delta_limit_equals_single_pair(self):
        spec = EnsembleSpec(g0=FIG.g, eta=1.0, n_nodes=1)
        avg = averaged_contrast_series(FIG, self.GRID, spec)
        single = sensor_contrast_numeric(FIG, self.GRID)
        assert np.abs(avg.values - single.normalized).max() <= 1e-14

    def test_amplitude_decreases_with_variance(self):
        amps = []
        for spec in (
            EnsembleSpec(g0=FIG.g, eta=1.0, n_nodes=1),
            EnsembleSpec(g0=FIG.g, eta=4 / FIG.g**2, n_nodes=101),
            EnsembleSpec(g0=FIG.g, eta=1 / FIG.g**2, n_nodes=101),
        ):
            amps.append(tail_amplitude(averaged_contrast_series(FIG, self.GRID, spec).values))
        assert amps[0] > amps[1] > amps[2]

    def test_starts_at_one_for_every_eta(self):
        for eta in (4 / FIG.g**2, 1 / FIG.g**2):
            spec = EnsembleSpec(g0=FIG.g, eta=eta, n_nodes=41)
            series = averaged_contrast_series(FIG, self.GRID, spec)
            assert series.values[0] == pytest.approx(1.0, abs=1e-12)

    def test_bounded_by_node_extrema(self):
        spec = EnsembleSpec(g0=FIG.g, eta=50.0, n_nodes=11)
        grid = TimeGrid(0.0, 50.0, 201)
        avg = averaged_contrast_series(FIG, grid, spec).values
        gs, _ = spec.nodes_and_weights()
        members = np.array([
            sensor_contrast_numeric(FIG.replace(g=float(gi)), grid).normalized for gi in gs
        ])
        assert np.all(avg <= members.max(axis=0) + 1e-12)
        assert np.all(avg >= members.min(axis=0) - 1e-12)


class TestRandomPhase:
    GRID = TimeGrid(0.0, 50.0, 101)

    def test_forced_zero_phase_is_deterministic(self):
        spec = EnsembleSpec(g0=0.1, eta=1.0, phi_model="gaussian", phi_width=0.0, n_samples=1)
        series = random_phase_triplet_series(1.0, 0.0, self.GRID, spec)
        from rpsense.dynamics import timmel_singlet_analytic
        ref = 1.0 - timmel_singlet_analytic(1.0, 0.0, self.GRID.times)
        assert np.abs(series.values - ref).max() <= 1e-14

    def test_uniform_phases_average_out_cosines(self):
        # every cosine carries the random phase, including the
        # zero-frequency ones, so E[P_S] collapses to the phase-free
        # constant 3/8 at omega = 0 and the triplet mean tends to 5/8
        n = 10**5
        spec = EnsembleSpec(g0=0.1, eta=1.0, phi_model="uniform", n_samples=n, seed=123)
        series = random_phase_triplet_series(1.0, 0.0, self.GRID, spec)
        bound = 3 * (3 / 8) / np.sqrt(n)
        assert np.abs(series.values[1:] - 5 / 8).max() <= bound

    def test_seed_determinism(self):
        spec = EnsembleSpec(g0=0.1, eta=1.0, phi_model="uniform", n_samples=50, seed=7)
        a = random_phase_triplet_series(1.0, 0.5, self.GRID, spec)
        b = random_phase_triplet_series(1.0, 0.5, self.GRID, spec)
        assert np.array_equal(a.values, b.values)
        other = EnsembleSpec(g0=0.1, eta=1.0, phi_model="uniform", n_samples=50, seed=8)
        c = random_phase_triplet_series(1.0, 0.5, self.GRID, other)
        assert not np.array_equal(a.values, c.values)

    def test_requires_phase_model(self):
        spec = EnsembleSpec(g0=0.1, eta=1.0, phi_model="none")
        with pytest.raises(ValueError, match="phi_model"):
            random_phase_triplet_series(1.0, 0.0, self.GRID, spec)


class TestSpecValidation:
    @pytest.mark.parametrize(
        "kwargs, field",
        [
            (dict(g0=0.1, eta=0.0), "eta"),
            (dict(g0=0.1, eta=1.0, n_nodes=2), "n_nodes"),
            (dict(g0=0.1, eta=1.0, n_nodes=301), "n_nodes"),
            (dict(g0=0.1, eta=1.0, phi_model="weird"), "phi_model"),
            (dict(g0=0.1, eta=1.0, n_samples=0), "n_samples"),
        ],
    )
    def test_invalid_specs(self, kwargs, field):
        with pytest.raises(ValueError, match=field):
            EnsembleSpec(**kwargs)
