import math

import numpy as np
import pytest

from steermap import linalg, mapping, witnesses
from steermap.mapping import INV_SQRT3
from steermap.states import make_density, random_separable, werner


class TestMaps:
    def test_mu_endpoints(self):
        tau, _ = random_separable(2, 2, 3, seed=1)
        prime = mapping.bob_biased_partner(tau, 0.3)
        assert np.array_equal(mapping.map_m(tau, prime, 1.0).mat, tau.mat)
        assert np.array_equal(mapping.map_m(tau, prime, 0.0).mat, prime.mat)
        assert np.array_equal(mapping.map_n(tau, prime, 1.0).mat, tau.mat)

    @pytest.mark.parametrize("p,mu", [(0.9, 0.5), (1.0, INV_SQRT3), (0.4, 0.2)])
    def test_werner_closure(self, p, mu):
        # Mixing toward the maximally mixed partner rescales visibility.
        mixed = mapping.map_m(werner(p), mapping.bob_biased_partner(werner(p), 0.0), mu)
        assert np.max(np.abs(mixed.mat - werner(mu * p).mat)) < 1e-14

    def test_map_n_werner(self):
        mixed = mapping.map_n(werner(0.9), mapping.alice_biased_partner(werner(0.9), 0.0), INV_SQRT3)
        assert np.max(np.abs(mixed.mat - werner(0.9 * INV_SQRT3).mat)) < 1e-14
        assert abs(np.trace(mixed.mat).real - 1.0) < 1e-12

    def test_dim_mismatch(self):
        a, _ = random_separable(2, 2, 2, seed=2)
        b, _ = random_separable(3, 2, 2, seed=3)
        with pytest.raises(ValueError, match="mismatch"):
            mapping.map_m(a, b, 0.5)

    def test_mu_out_of_range(self):
        tau, _ = random_separable(2, 2, 2, seed=4)
        with pytest.raises(ValueError, match="mu"):
            mapping.map_m(tau, tau, 1.5)

    def test_outputs_validate(self):
        rng = np.random.default_rng(6)
        for seed in range(5):
            tau, _ = random_separable(3, 2, 4, seed=seed)
            prime = mapping.bob_biased_partner(tau, rng.uniform(0, 1))
            mapping.map_m(tau, prime, rng.uniform(0, 1))  # make_density inside


class TestPartners:
    def test_bob_side_unbiased(self):
        tau, _ = random_separable(3, 2, 4, seed=8)
        prime = mapping.bob_biased_partner(tau, 0.0)
        expected = linalg.kron(tau.reduced_a(), np.eye(2) / 2)
        assert np.max(np.abs(prime.mat - expected)) < 1e-14

    def test_bob_side_full_bias(self):
        tau, _ = random_separable(3, 2, 4, seed=9)
        prime = mapping.bob_biased_partner(tau, 1.0)
        expected = linalg.kron(tau.reduced_a(), np.diag([1.0, 0.0]))
        assert np.max(np.abs(prime.mat - expected)) < 1e-14

    def test_partner_is_unentangled(self):
        for c in (0.0, 0.5, 1.0):
            tau, _ = random_separable(2, 2, 4, seed=11)
            assert witnesses.negativity(mapping.bob_biased_partner(tau, c)) <= 1e-12

    def test_alice_side(self):
        rho, _ = random_separable(2, 3, 4, seed=12)
        prime = mapping.alice_biased_partner(rho, 0.0)
        expected = linalg.kron(np.eye(2) / 2, rho.reduced_b())
        assert np.max(np.abs(prime.mat - expected)) < 1e-14
        full = mapping.alice_biased_partner(rho, 1.0)
        expected = linalg.kron(np.diag([1.0, 0.0]), rho.reduced_b())
        assert np.max(np.abs(full.mat - expected)) < 1e-14

    def test_wrong_side_rejected(self):
        rho, _ = random_separable(3, 2, 2, seed=13)
        with pytest.raises(ValueError, match="Alice"):
            mapping.alice_biased_partner(rho, 0.5)
        rho, _ = random_separable(2, 3, 2, seed=14)
        with pytest.raises(ValueError, match="Bob"):
            mapping.bob_biased_partner(rho, 0.5)


class TestAnalyticBound:
    def test_endpoints(self):
        assert mapping.analytic_c_max(0.0) == pytest.approx(1.0, abs=1e-15)
        assert mapping.analytic_c_max(INV_SQRT3) == pytest.approx(0.0, abs=1e-12)

    def test_half(self):
        # (sqrt(1 - 0.5) - 0.5) / 0.5 = sqrt(2) - 1, by substitution.
        assert mapping.analytic_c_max(0.5) == pytest.approx(math.sqrt(2) - 1, abs=1e-14)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            mapping.analytic_c_max(INV_SQRT3 + 1e-6)
        with pytest.raises(ValueError):
            mapping.analytic_c_max(-0.1)


class TestHiddenBloch:
    def test_unbiased_responses(self):
        r = mapping.hidden_bloch_vector(0.5, 0.5, 0.5, 0.4, 0.0)
        assert (r.rx, r.ry, r.rz) == (0.0, 0.0, 0.0)

    def test_top_vertex(self):
        mu, c = 0.3, 0.2
        r = mapping.hidden_bloch_vector(1.0, 1.0, 1.0, mu, c)
        assert (r.rx, r.ry, r.rz) == pytest.approx((mu, mu, mu + c * (1 - mu)))

    def test_saturation_point(self):
        r = mapping.hidden_bloch_vector(0.0, 0.0, 0.0, INV_SQRT3, 0.0)
        assert (r.rx, r.ry, r.rz) == pytest.approx((-INV_SQRT3,) * 3)
        assert r.norm_sq() == pytest.approx(1.0, abs=1e-12)

    def test_range_check(self):
        with pytest.raises(ValueError, match="px"):
            mapping.hidden_bloch_vector(1.2, 0.5, 0.5, 0.3, 0.0)


class TestFeasible:
    def test_known_points(self):
        assert mapping.feasible(INV_SQRT3, 0.0)
        assert not mapping.feasible(INV_SQRT3 + 1e-6, 0.0)
        assert mapping.feasible(0.5, 0.414)
        assert not mapping.feasible(0.5, 0.415)
        assert not mapping.feasible(0.7, 0.0)  # 3 mu^2 = 1.47 at the top vertex

    def test_vertex_values_match_hidden_bloch(self):
        # The inlined vertex loop must agree with the public formula.
        mu, c = 0.41, 0.23
        worst = max(
            mapping.hidden_bloch_vector(px, py, pz, mu, c).norm_sq()
            for px in (0.0, 1.0)
            for py in (0.0, 1.0)
            for pz in (0.0, 1.0)
        )
        assert mapping.feasible(mu, c) == (worst <= 1.0 + 1e-12)

    def test_monotone_in_c(self):
        for mu in np.linspace(0, 1, 50):
            allowed = [mapping.feasible(float(mu), float(c)) for c in np.linspace(0, 1, 50)]
            # Once infeasible, stays infeasible as c grows.
            assert all(a or not b for a, b in zip(allowed, allowed[1:]))

    def test_monotone_in_mu_at_zero_bias(self):
        allowed = [mapping.feasible(float(mu), 0.0) for mu in np.linspace(0, 1, 50)]
        assert all(a or not b for a, b in zip(allowed, allowed[1:]))

    def test_matches_analytic_bound(self):
        for mu in np.linspace(0.0, INV_SQRT3, 60):
            bound = mapping.analytic_c_max(float(mu))
            for c in np.linspace(0.0, 1.0, 60):
                expected = c <= bound + 1e-9
                assert mapping.feasible(float(mu), float(c)) == expected, (mu, c)


class TestRegionScan:
    def test_grid_and_endpoints(self):
        points = mapping.region_scan(50, 1e-10)
        assert len(points) == 50
        assert points[0].mu == 0.0
        assert points[-1].mu == pytest.approx(INV_SQRT3, abs=1e-15)
        assert points[0].c_analytic == pytest.approx(1.0, abs=1e-12)
        assert points[0].c_numeric == pytest.approx(1.0, abs=1e-9)
        assert points[-1].c_analytic == pytest.approx(0.0, abs=1e-12)
        assert points[-1].c_numeric == pytest.approx(0.0, abs=1e-9)

    def test_bisection_tracks_analytic(self):
        tol = 1e-10
        points = mapping.region_scan(50, tol)
        worst = max(pt.abs_err for pt in points)
        assert worst <= 2 * tol

    def test_deterministic(self):
        a = mapping.region_scan(20, 1e-8)
        b = mapping.region_scan(20, 1e-8)
        assert a == b

    def test_csv_format(self):
        text = mapping.region_to_csv(mapping.region_scan(5, 1e-8))
        lines = text.strip().split("\n")
        assert lines[0] == "mu,c_max_numeric,c_max_analytic,abs_err"
        assert len(lines) == 6
        first = lines[1].split(",")
        assert float(first[0]) == 0.0
        assert float(first[2]) == 1.0

    def test_validates_args(self):
        with pytest.raises(ValueError):
            mapping.region_scan(1, 1e-8)
        with pytest.raises(ValueError):
            mapping.c_max_numeric(0.3, tol=0.0)


class TestMapParams:
    def test_accepts_and_rejects(self):
        mapping.MapParams(0.5, 0.5)
        with pytest.raises(ValueError):
            mapping.MapParams(1.2, 0.0)
        with pytest.raises(ValueError):
            mapping.MapParams(0.5, -0.1)
