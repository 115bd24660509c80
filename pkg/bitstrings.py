"""
Combinatorics of the length-(2p+1) bitstrings that index every
infinite-size energy formula.

Bit j of the integer value is s_j (s_0 is the least significant bit). Bits
s_0..s_{p-1} follow the ket side of the QAOA circuit from |+> outwards,
s_p is the measured bit, and s_{2p-j} mirrors s_j on the bra side.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from superapp.apps.qaoa_limits.exceptions import InvalidParameterError

logger = logging.getLogger(__name__)

# B uses cos(beta_j/2), sin(beta_j/2) and phi uses gamma_j/2
ANGLE_SCALE = 0.5


@dataclass(frozen=True)
class AngleVector:
    betas: tuple
    gammas: tuple

    def __post_init__(self):
        betas = tuple(float(b) for b in self.betas)
        gammas = tuple(float(g) for g in self.gammas)
        if len(betas) != len(gammas) or not betas:
            raise InvalidParameterError(
                f'Angle vectors need p >= 1 betas and as many gammas, got {len(betas)} and {len(gammas)}'
            )
        if not all(math.isfinite(a) for a in betas + gammas):
            raise InvalidParameterError(f'Angles must be finite, got betas={betas} gammas={gammas}')
        object.__setattr__(self, 'betas', betas)
        object.__setattr__(self, 'gammas', gammas)

    @property
    def p(self):
        return len(self.betas)

    @classmethod
    def from_flat(cls, values):
        values = np.asarray(values, dtype=float).ravel()
        if values.size % 2:
            raise InvalidParameterError(f'A flat angle vector has even length, got {values.size}')
        p = values.size // 2
        return cls(tuple(values[:p]), tuple(values[p:]))

    def to_flat(self):
        return np.array(self.betas + self.gammas, dtype=float)

    def with_gammas(self, gammas):
        return AngleVector(self.betas, tuple(gammas))

    def as_dict(self):
        return {'p': self.p, 'betas': list(self.betas), 'gammas': list(self.gammas)}

    @classmethod
    def from_dict(cls, data):
        try:
            angles = cls(tuple(data['betas']), tuple(data['gammas']))
        except (KeyError, TypeError) as e:
            raise InvalidParameterError(f'Angle data needs "betas" and "gammas" lists: {e}')
        if 'p' in data and int(data['p']) != angles.p:
            raise InvalidParameterError(f'Angle data declares p={data["p"]} but holds {angles.p} layers')
        return angles


def _bit(value, j):
    return (value >> j) & 1


def _check_depth(value, p):
    if p < 1:
        raise InvalidParameterError(f'QAOA depth p must be >= 1, got {p}')
    if not 0 <= value < 1 << (2 * p + 1):
        raise InvalidParameterError(f'Bitstring {value} does not fit in {2 * p + 1} bits')


def level_of_symmetry(value, p):
    """Largest j <= p such that s_{p+k} = s_{p-k} for every k <= j."""
    _check_depth(value, p)
    for k in range(1, p + 1):
        if _bit(value, p + k) != _bit(value, p - k):
            return k - 1
    return p


def is_odd(value, p):
    _check_depth(value, p)
    return _bit(value, 0) != _bit(value, p)


def partial_flip(value, p):
    """Complement bits p-L(s) .. p+L(s)."""
    level = level_of_symmetry(value, p)
    mask = ((1 << (2 * level + 1)) - 1) << (p - level)
    return value ^ mask


def b_coefficient(value, angles):
    p = angles.p
    _check_depth(value, p)
    result = 1 + 0j
    for j, beta in enumerate(angles.betas):
        cos_half = math.cos(ANGLE_SCALE * beta)
        sin_half = 1j * math.sin(ANGLE_SCALE * beta)
        for a, b in ((j, j + 1), (2 * p - j, 2 * p - j - 1)):
            result *= cos_half if _bit(value, a) == _bit(value, b) else sin_half
    return result


def phi(value, angles):
    """Phase accumulated by the cost layers along the path encoded by value."""
    p = angles.p
    _check_depth(value, p)
    total = 0.0
    for j, gamma in enumerate(angles.gammas):
        bra = 1 - 2 * _bit(value, 2 * p - j)
        ket = 1 - 2 * _bit(value, j)
        total += ANGLE_SCALE * gamma * (bra - ket)
    return total


@dataclass(frozen=True)
class BitstringStructure:
    """Angle-independent metadata for every bitstring of depth p."""

    p: int
    bits: np.ndarray
    level: np.ndarray
    is_odd: np.ndarray
    flip: np.ndarray
    order: np.ndarray
    order_index: np.ndarray

    @property
    def size(self):
        return self.level.size

    @property
    def center_sign(self):
        """(-1)^{s_p} for every s."""
        return 1 - 2 * self.bits[:, self.p]

    def odd_sign(self):
        return np.where(self.is_odd, -1, 1)

    def lower_odd(self):
        """Odd strings below level p in table order; each is followed by its flip."""
        ordered = self.order
        mask = self.is_odd[ordered] & (self.level[ordered] < self.p)
        return ordered[mask]

    def symmetric(self):
        """Strings at level p (the fully mirror-symmetric ones) in table order."""
        ordered = self.order
        return ordered[self.level[ordered] == self.p]


def _freeze(*arrays):
    for array in arrays:
        array.setflags(write=False)


@lru_cache(maxsize=16)
def bitstring_structure(p):
    if p < 1:
        raise InvalidParameterError(f'QAOA depth p must be >= 1, got {p}')
    width = 2 * p + 1
    values = np.arange(1 << width, dtype=np.int64)
    bits = (values[:, None] >> np.arange(width)) & 1

    # column k-1 compares s_{p+k} with s_{p-k}; the level is the leading run of matches
    mirrored = bits[:, p + 1:] == bits[:, p - 1::-1]
    level = np.cumprod(mirrored, axis=1).sum(axis=1)
    odd = bits[:, 0] != bits[:, p]
    # complement the 2L+1 bits centred on s_p
    flip = values ^ (((1 << (2 * level + 1)) - 1) << (p - level))

    # odd strings grouped by increasing level, each directly followed by its flip,
    # then the level-p strings; recursions over this order only look backwards
    order = []
    for current in range(p):
        for value in values[(level == current) & odd]:
            order.extend((value, flip[value]))
    order.extend(values[level == p])
    order = np.array(order, dtype=np.int64)
    order_index = np.empty_like(order)
    order_index[order] = np.arange(order.size)

    _freeze(bits, level, odd, flip, order, order_index)
    logger.debug(f'Built bitstring structure for p={p} ({values.size} strings)')
    return BitstringStructure(p, bits, level, odd, flip, order, order_index)


@dataclass(frozen=True)
class BitstringTable:
    """
    Per-bitstring B coefficients and XOR-indexed phases for one angle vector.

    phi depends only on s xor t, so it is stored as a vector: phi[s ^ t].
    """

    angles: AngleVector
    structure: BitstringStructure
    b: np.ndarray
    phi: np.ndarray

    @classmethod
    def build(cls, angles):
        structure = bitstring_structure(angles.p)
        p = angles.p
        bits = structure.bits

        b = np.ones(structure.size, dtype=complex)
        # one mixer factor per neighbouring bit pair on each side: cos when equal, i sin when not
        for j, beta in enumerate(angles.betas):
            cos_half = math.cos(ANGLE_SCALE * beta)
            sin_half = 1j * math.sin(ANGLE_SCALE * beta)
            for a, c in ((j, j + 1), (2 * p - j, 2 * p - j - 1)):
                b *= np.where(bits[:, a] == bits[:, c], cos_half, sin_half)

        # layer j contributes gamma_j/2 (bra spin - ket spin)
        spins = 1 - 2 * bits
        phases = np.zeros(structure.size)
        for j, gamma in enumerate(angles.gammas):
            phases += ANGLE_SCALE * gamma * (spins[:, 2 * p - j] - spins[:, j])

        _freeze(b, phases)
        return cls(angles, structure, b, phases)

    @property
    def p(self):
        return self.angles.p

    def signed_b(self):
        """(-1)^{s odd} B_s."""
        return self.structure.odd_sign() * self.b

    def weights(self):
        """(-1)^{s odd} (-1)^{s_p} B_s, the vector entering the energy quadratic forms."""
        return self.structure.center_sign * self.signed_b()
