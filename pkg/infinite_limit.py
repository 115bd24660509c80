"""
Infinite-size energy of level-p QAOA on sparse random graphs (Erdos-Renyi,
pseudo Chung-Lu) and on the Sherrington-Kirkpatrick model.

Every formula here is a quadratic form in the per-bitstring weights
(-1)^{s odd}(-1)^{s_p} B_s R_s with a kernel that depends on s xor t only,
so all pair sums are XOR convolutions evaluated with a Walsh-Hadamard
transform.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from superapp.apps.qaoa_limits.bitstrings import AngleVector, BitstringTable
from superapp.apps.qaoa_limits.exceptions import InvalidParameterError, NumericalConsistencyError

logger = logging.getLogger(__name__)

IMAG_RESIDUE_TOLERANCE = 1e-8

KIND_ER = 'er'
KIND_SK = 'sk'
KIND_CHUNG_LU = 'chung-lu'


def walsh_hadamard(values):
    """
    Unnormalized Walsh-Hadamard transform of a vector whose length is a power of two.

    Args:
        values: real or complex 1-D array

    Returns:
        complex array of the same length
    """
    out = np.array(values, dtype=complex)
    size = out.size
    if size & (size - 1):
        raise InvalidParameterError(f'Walsh-Hadamard transform needs a power-of-two length, got {size}')
    half = 1
    while half < size:
        out = out.reshape(-1, 2, half)
        out = np.stack((out[:, 0] + out[:, 1], out[:, 0] - out[:, 1]), axis=1)
        half *= 2
    return out.reshape(size)


def xor_convolve(values, kernel):
    """Return c with c[s] = sum_t values[t] * kernel[s ^ t]."""
    values = np.asarray(values)
    kernel = np.asarray(kernel)
    if values.shape != kernel.shape:
        raise InvalidParameterError(f'XOR convolution operands differ in shape: {values.shape} vs {kernel.shape}')
    return _convolve_transformed(values, walsh_hadamard(kernel))


def _convolve_transformed(values, kernel_hat):
    return walsh_hadamard(walsh_hadamard(values) * kernel_hat) / kernel_hat.size


def _real_part(value, what, tolerance=None):
    tolerance = IMAG_RESIDUE_TOLERANCE if tolerance is None else tolerance
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NumericalConsistencyError(f'{what} is not finite: {value}')
    if abs(value.imag) > tolerance * max(1.0, abs(value.real)):
        raise NumericalConsistencyError(
            f'{what} has imaginary residue {value.imag:.3e} (real part {value.real:.6g})'
        )
    return value.real


def _check_degree(d, name='d'):
    if not math.isfinite(d) or d < 0:
        raise InvalidParameterError(f'{name} must be a finite non-negative number, got {d}')


@dataclass(frozen=True)
class DegreeDistribution:
    """Expected-degree mixture of a pseudo Chung-Lu ensemble."""

    degrees: tuple
    probabilities: tuple

    def __post_init__(self):
        degrees = tuple(float(d) for d in self.degrees)
        probabilities = tuple(float(q) for q in self.probabilities)
        if not degrees or len(degrees) != len(probabilities):
            raise InvalidParameterError('A degree distribution needs one probability per degree')
        if any(not math.isfinite(d) or d <= 0 for d in degrees):
            raise InvalidParameterError(f'Expected degrees must be positive, got {degrees}')
        if any(not 0 <= q <= 1 for q in probabilities):
            raise InvalidParameterError(f'Label probabilities must lie in [0, 1], got {probabilities}')
        if abs(math.fsum(probabilities) - 1) > 1e-12:
            raise InvalidParameterError(f'Label probabilities must sum to 1, got {math.fsum(probabilities)}')
        object.__setattr__(self, 'degrees', degrees)
        object.__setattr__(self, 'probabilities', probabilities)

    @classmethod
    def single(cls, d):
        return cls((d,), (1.0,))

    @classmethod
    def parse(cls, text):
        """
        Parse "d1:q1,d2:q2,..." where each q may be a fraction such as 2/3.
        """
        degrees, probabilities = [], []
        try:
            for item in text.split(','):
                degree, probability = item.split(':')
                degrees.append(float(Fraction(degree.strip())))
                probabilities.append(Fraction(probability.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidParameterError(f'Cannot parse degree distribution "{text}": {e}')
        if sum(probabilities) != 1 and abs(float(sum(probabilities)) - 1) > 1e-12:
            raise InvalidParameterError(f'Label probabilities in "{text}" sum to {sum(probabilities)}')
        return cls(tuple(degrees), tuple(float(q) for q in probabilities))

    @property
    def mean_degree(self):
        return math.fsum(d * q for d, q in zip(self.degrees, self.probabilities))

    @property
    def max_degree(self):
        return max(self.degrees)

    def __len__(self):
        return len(self.degrees)

    def __str__(self):
        return ','.join(f'{d:g}:{q:.12g}' for d, q in zip(self.degrees, self.probabilities))


@dataclass(frozen=True)
class RTable:
    """
    Output of a level-descending recursion.

    values has shape (2^{2p+1},) for the ER and SK kinds and
    (labels, 2^{2p+1}) for Chung-Lu.
    """

    table: BitstringTable
    kind: str
    values: np.ndarray
    parameter: object = None

    @property
    def p(self):
        return self.table.p

    def weights(self):
        return self.table.weights() * self.values


def _labelled_recursion(table, degrees, relative_weights):
    """
    Shared ER / Chung-Lu recursion.

    R_(s,l) = exp(-d_l (1 - base_s/2) + (d_l/2) sum_{L(s)<L(t)<p} c_t e^{i phi(s^t)}),
    c_t = (-1)^{t odd} B_t sum_l' relative_weights_l' R_(t,l').
    """
    structure = table.structure
    p = table.p
    signed_b = table.signed_b()
    kernel_hat = walsh_hadamard(np.exp(1j * table.phi))

    # base_s = sum over level-p strings t of (-1)^{t odd} B_t e^{i phi(s^t)}
    top = structure.level == p
    base = _convolve_transformed(np.where(top, signed_b, 0), kernel_hat)
    degrees = np.asarray(degrees, dtype=float)[:, None]
    relative_weights = np.asarray(relative_weights, dtype=float)

    exponent = -degrees * (1 - 0.5 * base)
    values = np.exp(exponent)
    # level p-1 is final here; no level lies strictly between it and p
    carried = np.zeros(structure.size, dtype=complex)
    for level in range(p - 2, -1, -1):
        upper = structure.level == level + 1
        # carried is never reset, so it holds every level above the current one
        carried[upper] = signed_b[upper] * (relative_weights @ values[:, upper])
        middle = _convolve_transformed(carried, kernel_hat)
        current = structure.level == level
        values[:, current] = np.exp(exponent[:, current] + 0.5 * degrees * middle[current])
    return values


def compute_r_er(angles, d):
    _check_degree(d)
    table = BitstringTable.build(angles)
    values = _labelled_recursion(table, [d], [1.0])[0]
    values.setflags(write=False)
    return RTable(table, KIND_ER, values, parameter=float(d))


def er_energy_per_vertex(angles, d, tolerance=None):
    """
    Infinite-size expected MaxCut-QAOA energy per vertex, lim E<H>/n with
    H = sum over edges of Z_u Z_v, on Erdos-Renyi graphs of average degree d.
    """
    r_table = compute_r_er(angles, d)
    weights = r_table.weights()
    pair_sum = weights @ xor_convolve(weights, np.exp(1j * r_table.table.phi))
    return _real_part(d / 8 * pair_sum, f'ER energy (p={angles.p}, d={d})', tolerance)


def compute_r_sk(angles):
    table = BitstringTable.build(angles)
    structure = table.structure
    signed_b = table.signed_b()
    kernel_hat = walsh_hadamard(table.phi ** 2)

    # same descent as the labelled recursion with kernel phi^2 and weight -1/4
    top = structure.level == table.p
    exponent = -0.25 * _convolve_transformed(np.where(top, signed_b, 0), kernel_hat)
    values = np.exp(exponent)
    carried = np.zeros(structure.size, dtype=complex)
    for level in range(table.p - 2, -1, -1):
        upper = structure.level == level + 1
        carried[upper] = signed_b[upper] * values[upper]
        middle = _convolve_transformed(carried, kernel_hat)
        current = structure.level == level
        values[current] = np.exp(exponent[current] - 0.25 * middle[current])
    values.setflags(write=False)
    return RTable(table, KIND_SK, values)


def sk_energy_per_vertex(angles, tolerance=None):
    """Infinite-size SK-QAOA energy per vertex, couplings N(0, 1)/sqrt(n) over pairs i<j."""
    r_table = compute_r_sk(angles)
    weights = r_table.weights()
    pair_sum = weights @ xor_convolve(weights, 1j * r_table.table.phi)
    return _real_part(pair_sum / 8, f'SK energy (p={angles.p})', tolerance)


def compute_r_chung_lu(angles, dist):
    table = BitstringTable.build(angles)
    mean = dist.mean_degree
    relative = [q * d / mean for d, q in zip(dist.degrees, dist.probabilities)]
    values = _labelled_recursion(table, dist.degrees, relative)
    values.setflags(write=False)
    return RTable(table, KIND_CHUNG_LU, values, parameter=dist)


def chung_lu_energy_per_vertex(angles, dist, tolerance=None):
    r_table = compute_r_chung_lu(angles, dist)
    scale = np.array([q * d for d, q in zip(dist.degrees, dist.probabilities)])
    # each string carries its label average sum_l q_l d_l R_(s,l)
    mixed = r_table.table.weights() * (scale @ r_table.values)
    pair_sum = mixed @ xor_convolve(mixed, np.exp(1j * r_table.table.phi))
    return _real_part(pair_sum / (8 * dist.mean_degree), f'Chung-Lu energy (p={angles.p}, dist={dist})', tolerance)


def transfer_sk_to_er(sk_angles, d):
    """
    Map SK-optimal angles to degree-d MaxCut angles: betas unchanged,
    gammas divided by sqrt(d).
    """
    if not math.isfinite(d) or d <= 0:
        raise InvalidParameterError(f'Angle transfer needs d > 0, got {d}')
    root = math.sqrt(d)
    return AngleVector(sk_angles.betas, tuple(g / root for g in sk_angles.gammas))
