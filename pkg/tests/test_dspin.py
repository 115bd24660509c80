import math

import numpy as np
import pytest

from superapp.apps.qaoa_limits.bitstrings import AngleVector
from superapp.apps.qaoa_limits.dspin import (
    DSpinConfig,
    composition_weight_total,
    compositions,
    dense_p1_energy,
    dense_to_diluted_gamma,
    diluted_p1_energy,
    diluted_p1_energy_closed_form,
    multinomial,
    per_interaction,
)
from superapp.apps.qaoa_limits.exceptions import InvalidParameterError, ResourceGuardError
from superapp.apps.qaoa_limits.infinite_limit import er_energy_per_vertex, sk_energy_per_vertex


def angle_pairs(seed, count=6):
    return np.random.default_rng(seed).uniform(-math.pi, math.pi, size=(count, 2))


class TestCombinatorics:
    @pytest.mark.parametrize('D', [1, 2, 3, 4, 5])
    def test_composition_count(self, D):
        assert sum(1 for _ in compositions(D, 8)) == math.comb(D + 7, 7)

    @pytest.mark.parametrize('D', [2, 3, 4, 5, 6])
    def test_weights_total_eight_to_the_d(self, D):
        assert composition_weight_total(D) == 8 ** D

    def test_multinomial_large_totals_use_log_gamma(self):
        assert multinomial([15, 15]) == pytest.approx(math.comb(30, 15), rel=1e-9)
        assert multinomial([2, 3, 1]) == 60


class TestConfig:
    @pytest.mark.parametrize('D', [1, 0, 2.5])
    def test_rejects_bad_arity(self, D):
        with pytest.raises(InvalidParameterError):
            DSpinConfig(D, 3.0)

    def test_diluted_model_needs_degree(self):
        with pytest.raises(InvalidParameterError):
            diluted_p1_energy(0.1, 0.2, DSpinConfig(3))

    def test_composition_sum_guards_arity(self):
        with pytest.raises(ResourceGuardError):
            diluted_p1_energy(0.1, 0.2, DSpinConfig(13, 2.0))


class TestDiluted:
    @pytest.mark.parametrize('D', [2, 3, 4, 5])
    def test_composition_sum_matches_closed_form(self, D):
        for d in (1.0, 3.0, 6.5):
            cfg = DSpinConfig(D, d)
            for beta, gamma in angle_pairs(D):
                assert diluted_p1_energy(beta, gamma, cfg) == pytest.approx(
                    diluted_p1_energy_closed_form(beta, gamma, cfg), abs=1e-10
                )

    def test_two_spin_case_is_erdos_renyi(self):
        for d in (2.0, 4.0):
            for beta, gamma in angle_pairs(7):
                expected = er_energy_per_vertex(AngleVector((beta,), (gamma,)), d)
                assert diluted_p1_energy(beta, gamma, DSpinConfig(2, d)) == pytest.approx(expected, abs=1e-10)

    @pytest.mark.parametrize('D', [2, 3, 4])
    def test_vanishes_at_zero_angles(self, D):
        cfg = DSpinConfig(D, 3.0)
        assert abs(diluted_p1_energy(0.4, 0.0, cfg)) < 1e-12
        assert abs(diluted_p1_energy(0.0, 0.7, cfg)) < 1e-12

    @pytest.mark.parametrize('D', [2, 3, 4])
    def test_sign_symmetries(self, D):
        cfg = DSpinConfig(D, 3.0)
        beta, gamma = 0.3, 0.8
        energy = diluted_p1_energy_closed_form(beta, gamma, cfg)
        assert diluted_p1_energy_closed_form(-beta, -gamma, cfg) == pytest.approx(energy, abs=1e-12)
        assert diluted_p1_energy_closed_form(beta, -gamma, cfg) == pytest.approx(-energy, abs=1e-12)

    def test_per_interaction_rescales_by_arity_over_degree(self):
        cfg = DSpinConfig(3, 6.0)
        assert per_interaction(-1.2, cfg) == pytest.approx(-0.6)


class TestDense:
    def test_two_spin_case_is_sherrington_kirkpatrick(self):
        for beta, gamma in angle_pairs(11):
            expected = sk_energy_per_vertex(AngleVector((beta,), (gamma,)))
            assert dense_p1_energy(beta, gamma, 2) == pytest.approx(expected, abs=1e-12)

    def test_rejects_single_spin_interactions(self):
        with pytest.raises(InvalidParameterError):
            dense_p1_energy(0.1, 0.2, 1)

    @pytest.mark.parametrize('D', [2, 3, 4])
    def test_large_degree_limit_of_diluted_model(self, D):
        beta, gamma = -0.35, 0.9
        target = dense_p1_energy(beta, gamma, D)

        def error(d):
            cfg = DSpinConfig(D, d)
            diluted = diluted_p1_energy_closed_form(beta, dense_to_diluted_gamma(gamma, D, d), cfg)
            return abs(diluted / math.sqrt(math.factorial(D - 1) * d) - target)

        errors = [error(d) for d in (10.0, 100.0, 1000.0, 10000.0)]
        assert all(later < earlier for earlier, later in zip(errors, errors[1:]))
        assert errors[-1] < 1e-2
