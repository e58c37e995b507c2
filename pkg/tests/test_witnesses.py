import json
import math

import numpy as np
import pytest

from steermap import linalg, mapping, witnesses
from steermap.mapping import INV_SQRT3
from steermap.states import (
    bell_phi_plus,
    make_density,
    random_pure,
    random_separable,
    werner,
)


def product_state(d_a, seed, bob=None):
    rng = np.random.default_rng(seed)
    alpha = random_pure(d_a, rng)
    beta = np.eye(2, dtype=complex) / 2 if bob is None else bob
    return make_density(linalg.kron(alpha, beta), d_a, 2)


class TestNegativity:
    def test_product_vanishes(self):
        assert witnesses.negativity(product_state(3, seed=1)) <= 1e-12

    def test_bell(self):
        assert witnesses.negativity(bell_phi_plus()) == pytest.approx(0.5, abs=1e-10)

    @pytest.mark.parametrize("p", np.linspace(0, 1, 11))
    def test_werner_closed_form(self, p):
        # Partially transposed spectrum is {(1-3p)/4, (1+p)/4 x3}, so the
        # negativity is max(0, (3p-1)/4).
        expected = max(0.0, (3 * p - 1) / 4)
        assert witnesses.negativity(werner(float(p))) == pytest.approx(expected, abs=1e-12)

    def test_separable_random(self):
        for seed in range(5):
            rho, _ = random_separable(2, 2, 4, seed=seed)
            assert witnesses.negativity(rho) <= 1e-12


class TestChsh:
    def test_maximally_mixed(self):
        rho = make_density(np.eye(4, dtype=complex) / 4, 2, 2)
        assert witnesses.chsh_horodecki(rho) == pytest.approx(0.0, abs=1e-12)

    def test_bell(self):
        expected = 2 * math.sqrt(2)
        assert witnesses.chsh_horodecki(bell_phi_plus()) == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("p", [0.0, 0.3, 0.7071, 1.0])
    def test_werner_scaling(self, p):
        # Correlation matrix is -p times the identity.
        assert witnesses.chsh_horodecki(werner(p)) == pytest.approx(
            2 * math.sqrt(2) * p, abs=1e-10
        )

    def test_correlation_matrix_werner(self):
        t = witnesses.correlation_matrix(werner(0.6))
        assert np.allclose(t, -0.6 * np.eye(3), atol=1e-12)

    def test_requires_two_qubits(self):
        rho, _ = random_separable(3, 2, 2, seed=5)
        with pytest.raises(ValueError, match="2x2"):
            witnesses.chsh_horodecki(rho)

    def test_quantum_bound(self):
        rng = np.random.default_rng(6)
        for seed in range(10):
            rho, _ = random_separable(2, 2, 3, seed=seed)
            assert witnesses.chsh_horodecki(rho) <= 2 * math.sqrt(2) + 1e-9


class TestF3Steering:
    def test_product_with_mixed_bob_vanishes(self):
        assert witnesses.f3_steering(product_state(3, seed=7)) <= 1e-10

    @pytest.mark.parametrize("p", [0.0, 0.4, 1 / math.sqrt(3), 0.9])
    def test_werner_linear(self, p):
        assert witnesses.f3_steering(werner(p)) == pytest.approx(3 * p, abs=1e-10)

    def test_bell_exceeds_threshold(self):
        value = witnesses.f3_steering(bell_phi_plus())
        assert value == pytest.approx(3.0, abs=1e-10)
        assert value > witnesses.F3_THRESHOLD

    def test_requires_qubit_bob(self):
        rho, _ = random_separable(2, 3, 2, seed=8)
        with pytest.raises(ValueError, match="qubit"):
            witnesses.f3_steering(rho)

    def test_scales_linearly_under_mixing(self):
        # Mixing toward the zero-bias partner scales every correlation
        # block by the visibility.
        for p in (0.3, 0.8, 1.0):
            tau = werner(p)
            for mu in (0.2, INV_SQRT3, 0.9):
                mixed = mapping.map_m(tau, mapping.bob_biased_partner(tau, 0.0), mu)
                assert witnesses.f3_steering(mixed) == pytest.approx(
                    mu * witnesses.f3_steering(tau), abs=1e-10
                )


class TestWernerOracle:
    def test_thresholds(self):
        assert not witnesses.werner_steerable_oracle(0.4)
        assert witnesses.werner_steerable_oracle(0.6)
        assert not witnesses.werner_steerable_oracle(0.5)  # boundary excluded

    def test_range(self):
        with pytest.raises(ValueError):
            witnesses.werner_steerable_oracle(1.3)


class TestReport:
    def test_two_qubit_report(self):
        report = witnesses.witness_report(werner(1.0))
        data = json.loads(report.to_json())
        assert set(data) == {"negativity", "chsh", "f3"}
        assert data["negativity"] == pytest.approx(0.5, abs=1e-10)
        assert data["chsh"] == pytest.approx(2 * math.sqrt(2), abs=1e-9)
        assert data["f3"] == pytest.approx(3.0, abs=1e-10)

    def test_qudit_qubit_report_drops_chsh(self):
        report = witnesses.witness_report(product_state(3, seed=9))
        data = json.loads(report.to_json())
        assert "chsh" not in data
        assert "f3" in data

    def test_qubit_qudit_report_drops_f3(self):
        rho, _ = random_separable(2, 3, 2, seed=10)
        data = json.loads(witnesses.witness_report(rho).to_json())
        assert set(data) == {"negativity"}
