import itertools
import math

import numpy as np
import pytest

from superapp.apps.qaoa_limits.bitstrings import AngleVector
from superapp.apps.qaoa_limits.exceptions import InvalidParameterError, NumericalConsistencyError
from superapp.apps.qaoa_limits.infinite_limit import (
    DegreeDistribution,
    _real_part,
    chung_lu_energy_per_vertex,
    compute_r_chung_lu,
    compute_r_er,
    compute_r_sk,
    er_energy_per_vertex,
    sk_energy_per_vertex,
    transfer_sk_to_er,
    walsh_hadamard,
    xor_convolve,
)

D4_OPTIMUM_GAMMA = math.acos((math.sqrt(65) - 1) / 8)
D4_OPTIMUM_ENERGY = -0.58789


def random_angles(p, seed, scale=math.pi):
    rng = np.random.default_rng(seed)
    return AngleVector.from_flat(rng.uniform(-scale, scale, 2 * p))


def er_p1(beta, gamma, d):
    return d / 2 * math.sin(2 * beta) * math.sin(gamma) * math.exp(-d * (1 - math.cos(gamma)))


def sk_p1(beta, gamma):
    return gamma / 2 * math.sin(2 * beta) * math.exp(-gamma ** 2 / 2)


class TestTransforms:
    def test_walsh_hadamard_is_self_inverse_up_to_scale(self):
        values = np.random.default_rng(0).normal(size=32)
        assert np.allclose(walsh_hadamard(walsh_hadamard(values)) / 32, values)

    def test_xor_convolution_matches_direct_sum(self):
        rng = np.random.default_rng(1)
        values = rng.normal(size=16) + 1j * rng.normal(size=16)
        kernel = rng.normal(size=16)
        direct = np.array([sum(values[t] * kernel[s ^ t] for t in range(16)) for s in range(16)])
        assert np.allclose(xor_convolve(values, kernel), direct)

    def test_rejects_non_power_of_two(self):
        with pytest.raises(InvalidParameterError):
            walsh_hadamard(np.ones(12))


class TestDegreeDistribution:
    def test_parse_fractions(self):
        dist = DegreeDistribution.parse('4:2/3,9:1/3')
        assert dist.degrees == (4.0, 9.0)
        assert dist.probabilities == pytest.approx((2 / 3, 1 / 3))
        assert dist.mean_degree == pytest.approx(17 / 3)
        assert dist.max_degree == 9.0
        assert len(dist) == 2

    @pytest.mark.parametrize('text', ['4:1/2,9:1/3', '4', '4:x', '-1:1', '4:1/0'])
    def test_parse_rejects_bad_input(self, text):
        with pytest.raises(InvalidParameterError):
            DegreeDistribution.parse(text)

    def test_round_trips_through_text(self):
        dist = DegreeDistribution.parse('3:0.25,5:0.75')
        assert DegreeDistribution.parse(str(dist)) == dist


class TestErdosRenyi:
    @pytest.mark.parametrize('p', [1, 2, 3, 4])
    def test_zero_gamma_gives_unit_r_and_zero_energy(self, p):
        angles = AngleVector(random_angles(p, p).betas, (0.0,) * p)
        assert np.allclose(compute_r_er(angles, 3.0).values, 1.0)
        assert abs(er_energy_per_vertex(angles, 3.0)) < 1e-12

    @pytest.mark.parametrize('p', [1, 2, 3, 4])
    def test_r_is_invariant_under_flip_and_complement(self, p):
        r_table = compute_r_er(random_angles(p, 10 + p), 4.0)
        values = r_table.values
        structure = r_table.table.structure
        full = structure.size - 1
        np.testing.assert_allclose(values[structure.flip], values, rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(values[np.arange(structure.size) ^ full], values, rtol=1e-10, atol=1e-12)

    def test_depth_one_r_values(self):
        beta, gamma, d = 0.4, 0.9, 2.5
        r_table = compute_r_er(AngleVector((beta,), (gamma,)), d)
        level = r_table.table.structure.level
        assert np.allclose(r_table.values[level == 1], 1.0)
        assert np.allclose(r_table.values[level == 0], math.exp(-d * (1 - math.cos(gamma))))

    @pytest.mark.parametrize('d', [1.0, 3.0, 4.0, 7.5])
    def test_depth_one_closed_form(self, d):
        rng = np.random.default_rng(int(d * 10))
        for beta, gamma in rng.uniform(-math.pi, math.pi, size=(10, 2)):
            energy = er_energy_per_vertex(AngleVector((beta,), (gamma,)), d)
            assert energy == pytest.approx(er_p1(beta, gamma, d), abs=1e-12)

    def test_degree_four_optimum(self):
        energy = er_energy_per_vertex(AngleVector((-math.pi / 4,), (D4_OPTIMUM_GAMMA,)), 4.0)
        assert energy == pytest.approx(er_p1(-math.pi / 4, D4_OPTIMUM_GAMMA, 4.0), abs=1e-12)
        assert energy == pytest.approx(D4_OPTIMUM_ENERGY, abs=1e-4)
        for beta, gamma in itertools.product((-0.02, 0.02), repeat=2):
            nearby = AngleVector((-math.pi / 4 + beta,), (D4_OPTIMUM_GAMMA + gamma,))
            assert er_energy_per_vertex(nearby, 4.0) > energy

    @pytest.mark.parametrize('p', [1, 2, 3, 4])
    def test_weights_sum_to_zero(self, p):
        r_table = compute_r_er(random_angles(p, 20 + p), 3.0)
        assert abs(r_table.weights().sum()) < 1e-10

    def test_energy_is_deterministic(self):
        angles = random_angles(3, 7)
        assert er_energy_per_vertex(angles, 4.0) == er_energy_per_vertex(angles, 4.0)

    def test_rejects_negative_degree(self):
        with pytest.raises(InvalidParameterError):
            er_energy_per_vertex(random_angles(1, 0), -1.0)


class TestSherringtonKirkpatrick:
    def test_depth_one_closed_form(self):
        rng = np.random.default_rng(3)
        for beta, gamma in rng.uniform(-math.pi, math.pi, size=(10, 2)):
            energy = sk_energy_per_vertex(AngleVector((beta,), (gamma,)))
            assert energy == pytest.approx(sk_p1(beta, gamma), abs=1e-12)

    def test_depth_one_optimum(self):
        energy = sk_energy_per_vertex(AngleVector((-math.pi / 4,), (1.0,)))
        assert energy == pytest.approx(-1 / math.sqrt(4 * math.e), abs=1e-12)
        assert energy == pytest.approx(-0.30327, abs=1e-5)

    @pytest.mark.parametrize('p', [1, 2, 3, 4])
    def test_zero_gamma(self, p):
        angles = AngleVector(random_angles(p, p).betas, (0.0,) * p)
        assert np.allclose(compute_r_sk(angles).values, 1.0)
        assert abs(sk_energy_per_vertex(angles)) < 1e-12

    @pytest.mark.parametrize('p', [1, 2, 3])
    def test_weights_sum_to_zero(self, p):
        assert abs(compute_r_sk(random_angles(p, 30 + p)).weights().sum()) < 1e-10

    @pytest.mark.parametrize('p', [1, 2, 3])
    def test_large_degree_limit_of_erdos_renyi(self, p):
        sk_angles = random_angles(p, 40 + p, scale=1.0)
        target = sk_energy_per_vertex(sk_angles)

        def error(d):
            rescaled = transfer_sk_to_er(sk_angles, d)
            return abs(er_energy_per_vertex(rescaled, d) / math.sqrt(d) - target)

        errors = [error(d) for d in (16, 64, 256, 1024)]
        assert errors[-1] <= 0.25 * errors[1] + 1e-9
        assert errors[2] < errors[0]
        assert errors[-1] < 0.05

    @pytest.mark.parametrize('p', [1, 2, 3])
    def test_transfer_of_optimal_angles_from_degree_four(self, sk_optimum, p):
        sk_angles, sk_energy = sk_optimum(p)

        def error(d):
            rescaled = transfer_sk_to_er(sk_angles, d)
            return abs(er_energy_per_vertex(rescaled, d) / math.sqrt(d) - sk_energy)

        errors = [error(d) for d in (4, 16, 64, 256)]
        assert errors[0] < 0.15 * abs(sk_energy)
        assert errors[1] < errors[0] and errors[2] < errors[1] and errors[3] < errors[2]
        assert errors[3] < 0.01 * abs(sk_energy)

    @pytest.mark.parametrize('p', [2, 3])
    def test_er_r_values_approach_sk_ones(self, p):
        sk_angles = random_angles(p, 50 + p, scale=1.0)
        sk_values = compute_r_sk(sk_angles).values

        def gap(d):
            return np.max(np.abs(compute_r_er(transfer_sk_to_er(sk_angles, d), d).values - sk_values))

        assert gap(10_000) < 0.1 * gap(100) + 1e-9


class TestChungLu:
    @pytest.mark.parametrize('p', [1, 2, 3])
    def test_single_label_matches_erdos_renyi(self, p):
        angles = random_angles(p, 60 + p)
        expected = er_energy_per_vertex(angles, 4.0)
        assert chung_lu_energy_per_vertex(angles, DegreeDistribution.single(4.0)) == pytest.approx(expected, abs=1e-10)

    def test_identical_labels_match_erdos_renyi(self):
        angles = random_angles(2, 70)
        dist = DegreeDistribution((3.0, 3.0), (0.4, 0.6))
        assert chung_lu_energy_per_vertex(angles, dist) == pytest.approx(er_energy_per_vertex(angles, 3.0), abs=1e-10)

    def test_top_level_r_is_one(self):
        dist = DegreeDistribution.parse('4:2/3,9:1/3')
        r_table = compute_r_chung_lu(random_angles(3, 71), dist)
        top = r_table.table.structure.level == 3
        assert r_table.values.shape == (2, r_table.table.structure.size)
        assert np.allclose(r_table.values[:, top], 1.0)

    def test_zero_gamma(self):
        angles = AngleVector((0.3, -0.2), (0.0, 0.0))
        assert abs(chung_lu_energy_per_vertex(angles, DegreeDistribution.parse('4:2/3,9:1/3'))) < 1e-12

    def test_depth_one_mixture(self):
        # at p=1 each label contributes its own ER closed form, weighted by q_l d_l / mean
        beta, gamma = -0.6, 0.5
        dist = DegreeDistribution.parse('4:2/3,9:1/3')
        r_table = compute_r_chung_lu(AngleVector((beta,), (gamma,)), dist)
        level = r_table.table.structure.level
        for row, d in zip(r_table.values, dist.degrees):
            assert np.allclose(row[level == 0], math.exp(-d * (1 - math.cos(gamma))))


class TestTransfer:
    def test_unit_degree_is_identity(self):
        angles = random_angles(3, 80)
        assert transfer_sk_to_er(angles, 1.0) == angles

    def test_scales_gammas_only(self):
        angles = AngleVector((0.1, 0.2), (0.8, -0.4))
        transferred = transfer_sk_to_er(angles, 4.0)
        assert transferred.betas == angles.betas
        assert transferred.gammas == pytest.approx((0.4, -0.2))

    @pytest.mark.parametrize('d', [0.0, -2.0, float('inf')])
    def test_rejects_non_positive_degree(self, d):
        with pytest.raises(InvalidParameterError):
            transfer_sk_to_er(random_angles(1, 0), d)


class TestRealPart:
    def test_accepts_rounding_residue(self):
        assert _real_part(2.0 + 1e-12j, 'value') == 2.0

    def test_rejects_large_residue(self):
        with pytest.raises(NumericalConsistencyError):
            _real_part(1.0 + 1e-3j, 'value')

    def test_rejects_non_finite(self):
        with pytest.raises(NumericalConsistencyError):
            _real_part(complex(float('nan'), 0), 'value')
