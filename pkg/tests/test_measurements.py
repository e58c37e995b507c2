import numpy as np
import pytest

from steermap import measurements as meas
from steermap.models import born_joint
from steermap.states import random_separable


def check_measurement_invariants(m, tol=1e-10):
    total = np.zeros((m.dim, m.dim), dtype=complex)
    for p in m.projectors:
        assert np.max(np.abs(p - p.conj().T)) <= tol
        assert np.max(np.abs(p @ p - p)) <= tol
        total += p
    assert np.max(np.abs(total - np.eye(m.dim))) <= tol
    for i in range(m.n_outcomes):
        for j in range(i + 1, m.n_outcomes):
            assert np.max(np.abs(m.projectors[i] @ m.projectors[j])) <= tol


class TestQubitMeasurement:
    def test_z_direction(self):
        m = meas.qubit_measurement((0, 0, 1))
        assert np.allclose(m.projectors[0], np.diag([1, 0]), atol=1e-15)
        assert np.allclose(m.projectors[1], np.diag([0, 1]), atol=1e-15)

    def test_x_direction_outcome0(self):
        m = meas.qubit_measurement((1, 0, 0))
        assert np.allclose(m.projectors[0], np.full((2, 2), 0.5), atol=1e-15)

    def test_expectation_along_bloch(self):
        # Outcome 0 along n on a state with Bloch vector r has
        # probability (1 + n.r)/2; aligned pure state gives 1.
        m = meas.qubit_measurement((0, 0, 1))
        rho_up = np.diag([1, 0]).astype(complex)
        assert np.trace(m.projectors[0] @ rho_up).real == pytest.approx(1.0)

    def test_rejects_non_unit(self):
        with pytest.raises(ValueError, match="unit"):
            meas.qubit_measurement((0, 0, 0.9))


class TestPauliSettings:
    def test_order_and_values(self):
        x, y, z = meas.pauli_settings()
        assert np.allclose(z.projectors[0], np.diag([1, 0]), atol=1e-15)
        assert np.allclose(
            y.projectors[0], np.array([[0.5, -0.5j], [0.5j, 0.5]]), atol=1e-15
        )
        assert np.allclose(
            y.projectors[1], np.array([[0.5, 0.5j], [-0.5j, 0.5]]), atol=1e-15
        )
        for m in (x, y, z):
            assert np.allclose(sum(m.projectors), np.eye(2), atol=1e-15)

    def test_labels(self):
        for label in "xyz":
            check_measurement_invariants(meas.pauli_setting(label))
        with pytest.raises(ValueError, match="label"):
            meas.pauli_setting("w")


class TestQuditMeasurement:
    def test_computational_basis(self):
        m = meas.qudit_measurement(np.eye(3))
        for i in range(3):
            expected = np.zeros((3, 3))
            expected[i, i] = 1.0
            assert np.allclose(m.projectors[i], expected, atol=1e-15)

    def test_random_unitary_columns(self):
        # Oracle: Gram-Schmidt produces an orthonormal set; the derived
        # measurement must satisfy every invariant.
        rng = np.random.default_rng(8)
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        basis = []
        for col in g.T:
            v = col.copy()
            for u in basis:
                v -= (u.conj() @ v) * u
            basis.append(v / np.linalg.norm(v))
        check_measurement_invariants(meas.qudit_measurement(basis))

    def test_qubit_special_case(self):
        m = meas.qudit_measurement(np.eye(2))
        z = meas.qubit_measurement((0, 0, 1))
        for a, b in zip(m.projectors, z.projectors):
            assert np.allclose(a, b, atol=1e-15)

    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValueError, match="orthonormal"):
            meas.qudit_measurement([np.array([1, 0]), np.array([1, 1]) / np.sqrt(2)])


class TestRandomSampling:
    def test_directions_and_bases_valid(self):
        rng = np.random.default_rng(55)
        for _ in range(100):
            check_measurement_invariants(meas.qubit_measurement(meas.random_direction(rng)))
        for dim in (2, 3, 4):
            for _ in range(30):
                check_measurement_invariants(meas.random_qudit_measurement(dim, rng))

    def test_born_probabilities_sum_to_one(self):
        rng = np.random.default_rng(56)
        rho, _ = random_separable(3, 2, 4, seed=77)
        for _ in range(20):
            m_a = meas.random_qudit_measurement(3, rng)
            m_b = meas.qubit_measurement(meas.random_direction(rng))
            total = sum(
                born_joint(rho, m_a, m_b, a, b) for a in range(3) for b in range(2)
            )
            assert total == pytest.approx(1.0, abs=1e-12)
