import math

import numpy as np
import pytest

from superapp.apps.qaoa_limits.bitstrings import (
    AngleVector,
    BitstringTable,
    b_coefficient,
    bitstring_structure,
    is_odd,
    level_of_symmetry,
    partial_flip,
    phi,
)
from superapp.apps.qaoa_limits.exceptions import InvalidParameterError


def random_angles(p, seed):
    rng = np.random.default_rng(seed)
    return AngleVector.from_flat(rng.uniform(-math.pi, math.pi, 2 * p))


class TestAngleVector:
    def test_requires_matching_lengths(self):
        with pytest.raises(InvalidParameterError):
            AngleVector((0.1, 0.2), (0.3,))

    def test_requires_at_least_one_layer(self):
        with pytest.raises(InvalidParameterError):
            AngleVector((), ())

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidParameterError):
            AngleVector((0.1,), (float('nan'),))

    def test_flat_layout_is_betas_then_gammas(self):
        angles = AngleVector.from_flat([1.0, 2.0, 3.0, 4.0])
        assert angles.betas == (1.0, 2.0)
        assert angles.gammas == (3.0, 4.0)
        assert angles.p == 2

    def test_from_dict_checks_declared_depth(self):
        with pytest.raises(InvalidParameterError):
            AngleVector.from_dict({'p': 3, 'betas': [0.1], 'gammas': [0.2]})


class TestLevelAndFlip:
    # strings are written s_4 ... s_0, most significant bit first
    @pytest.mark.parametrize('text, level', [('01001', 0), ('10100', 1), ('01010', 2)])
    def test_level_examples(self, text, level):
        assert level_of_symmetry(int(text, 2), 2) == level

    @pytest.mark.parametrize('text, flipped', [('01001', '01101'), ('01010', '10101')])
    def test_flip_examples(self, text, flipped):
        assert partial_flip(int(text, 2), 2) == int(flipped, 2)

    def test_level_zero_flip_only_touches_center(self):
        for value in range(1 << 7):
            if level_of_symmetry(value, 3) == 0:
                assert partial_flip(value, 3) == value ^ (1 << 3)

    @pytest.mark.parametrize('p', [1, 2, 3, 4])
    def test_flip_changes_parity_and_is_involution(self, p):
        for value in range(1 << (2 * p + 1)):
            flipped = partial_flip(value, p)
            assert partial_flip(flipped, p) == value
            assert level_of_symmetry(flipped, p) == level_of_symmetry(value, p)
            if level_of_symmetry(value, p) < p:
                assert is_odd(flipped, p) != is_odd(value, p)

    def test_rejects_out_of_range_value(self):
        with pytest.raises(InvalidParameterError):
            level_of_symmetry(1 << 5, 2)


class TestStructure:
    @pytest.mark.parametrize('p', [1, 2, 3, 4])
    def test_matches_scalar_functions(self, p):
        structure = bitstring_structure(p)
        for value in range(structure.size):
            assert structure.level[value] == level_of_symmetry(value, p)
            assert structure.is_odd[value] == is_odd(value, p)
            assert structure.flip[value] == partial_flip(value, p)

    @pytest.mark.parametrize('p', [1, 2, 3, 4, 5])
    def test_order_is_total_and_level_sorted(self, p):
        structure = bitstring_structure(p)
        assert sorted(structure.order.tolist()) == list(range(structure.size))
        assert np.all(np.diff(structure.level[structure.order]) >= 0)
        for value in range(structure.size):
            if structure.is_odd[value] and structure.level[value] < p:
                assert structure.order_index[structure.flip[value]] == structure.order_index[value] + 1

    def test_lower_odd_lists_odd_strings_below_top(self):
        structure = bitstring_structure(3)
        lower = structure.lower_odd()
        assert np.all(structure.is_odd[lower])
        assert np.all(structure.level[lower] < 3)
        assert lower.size == int(np.sum(structure.level < 3)) // 2


class TestKernels:
    def test_mixer_weight_uses_half_angles(self):
        beta = 0.7
        angles = AngleVector((beta,), (0.3,))
        # s = 010: both mixer pairs disagree
        assert b_coefficient(0b010, angles) == pytest.approx(-math.sin(beta / 2) ** 2)
        assert b_coefficient(0b000, angles) == pytest.approx(math.cos(beta / 2) ** 2)

    def test_zero_beta_selects_constant_paths(self):
        table = BitstringTable.build(AngleVector((0.0, 0.0), (0.4, 0.9)))
        bits = table.structure.bits
        constant = np.all(bits[:, :2] == bits[:, 1:3], axis=1) & np.all(bits[:, 3:] == bits[:, 2:4], axis=1)
        assert np.allclose(table.b, np.where(constant, 1.0, 0.0))

    @pytest.mark.parametrize('x, expected', [(0b000, 0.0), (0b001, 1.0), (0b100, -1.0), (0b101, 0.0), (0b010, 0.0)])
    def test_phi_at_depth_one(self, x, expected):
        gamma = 0.83
        assert phi(x, AngleVector((0.2,), (gamma,))) == pytest.approx(expected * gamma)

    @pytest.mark.parametrize('p', [1, 2, 3])
    def test_table_matches_scalar_kernels(self, p):
        angles = random_angles(p, seed=p)
        table = BitstringTable.build(angles)
        for value in range(table.structure.size):
            assert table.b[value] == pytest.approx(b_coefficient(value, angles), abs=1e-14)
            assert table.phi[value] == pytest.approx(phi(value, angles), abs=1e-14)

    @pytest.mark.parametrize('p', [1, 2, 3, 4, 5, 6])
    def test_signed_top_level_sum_is_two(self, p):
        for seed in range(20):
            table = BitstringTable.build(random_angles(p, seed))
            top = table.structure.level == p
            assert abs(table.signed_b()[top].sum() - 2) < 1e-12

    @pytest.mark.parametrize('p', [2, 3, 4, 5, 6])
    def test_signed_middle_levels_cancel(self, p):
        for seed in range(20):
            table = BitstringTable.build(random_angles(p, seed))
            level = table.structure.level
            signed = table.signed_b()
            for lowest in range(p):
                middle = (level > lowest) & (level < p)
                assert abs(signed[middle].sum()) < 1e-12

    @pytest.mark.parametrize('p', [1, 2, 3, 4])
    def test_flip_preserves_mixer_weight(self, p):
        table = BitstringTable.build(random_angles(p, seed=11))
        assert np.array_equal(table.b[table.structure.flip], table.b)

    @pytest.mark.parametrize('p', [1, 2, 3])
    def test_phi_invariant_under_flip_of_earlier_string(self, p):
        table = BitstringTable.build(random_angles(p, seed=5))
        structure = table.structure
        for s in range(structure.size):
            for t in range(structure.size):
                if structure.order_index[s] < structure.order_index[t]:
                    assert table.phi[structure.flip[s] ^ t] == pytest.approx(table.phi[s ^ t], abs=1e-13)

    @pytest.mark.parametrize('p', [1, 2, 3])
    def test_phi_odd_under_full_complement(self, p):
        table = BitstringTable.build(random_angles(p, seed=9))
        full = table.structure.size - 1
        x = np.arange(table.structure.size)
        assert np.allclose(table.phi[x ^ full], -table.phi[x], atol=1e-14)
