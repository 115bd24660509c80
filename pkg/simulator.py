"""
Statevector simulation of QAOA for small Ising instances.

Conventions: qubit k is bit k of the basis index, Z|0> = +|0>, and layer j
applies exp(-i gamma_j/2 H) followed by exp(-i beta_j/2 sum_k X_k).
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from superapp.apps.qaoa_limits.exceptions import (
    InvalidParameterError,
    NumericalConsistencyError,
    ResourceGuardError,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_QUBITS = 26


@dataclass(frozen=True)
class IsingHamiltonian:
    """H(z) = sum over terms of coupling * prod_{k in subset} (-1)^{z_k}."""

    n: int
    terms: tuple

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameterError(f'Qubit count must be a positive integer, got {self.n}')
        seen = set()
        terms = []
        for subset, coupling in self.terms:
            subset = tuple(int(k) for k in subset)
            if not subset or list(subset) != sorted(set(subset)):
                raise InvalidParameterError(f'Term subset {subset} must be non-empty, sorted and duplicate-free')
            if subset[0] < 0 or subset[-1] >= self.n:
                raise InvalidParameterError(f'Term subset {subset} is out of range for n={self.n}')
            if subset in seen:
                raise InvalidParameterError(f'Term subset {subset} appears twice')
            if not math.isfinite(coupling):
                raise InvalidParameterError(f'Coupling of {subset} is not finite: {coupling}')
            seen.add(subset)
            terms.append((subset, float(coupling)))
        object.__setattr__(self, 'terms', tuple(terms))

    @classmethod
    def from_edges(cls, n, edges, couplings=None):
        if couplings is None:
            couplings = [1.0] * len(edges)
        return cls(n, tuple((tuple(sorted(edge)), c) for edge, c in zip(edges, couplings)))

    @property
    def is_unit_two_body(self):
        return all(len(subset) == 2 and coupling == 1.0 for subset, coupling in self.terms)

    @property
    def has_integer_couplings(self):
        return all(float(coupling).is_integer() for _, coupling in self.terms)

    @property
    def has_even_arity(self):
        return all(len(subset) % 2 == 0 for subset, _ in self.terms)

    def diagonal(self):
        """H(z) for every basis index z."""
        indices = np.arange(1 << self.n, dtype=np.int64)
        values = np.zeros(indices.size)
        for subset, coupling in self.terms:
            parity = np.zeros(indices.size, dtype=np.int64)
            for k in subset:
                parity ^= (indices >> k) & 1
            values += coupling * (1 - 2 * parity)
        return values


@dataclass(frozen=True)
class Statevector:
    amplitudes: np.ndarray

    @property
    def n(self):
        return int(self.amplitudes.size).bit_length() - 1

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class CutStatistics:
    expected_cut: float
    best_sampled_cut: int
    shots: int

    def as_dict(self):
        return {'expected_cut': self.expected_cut, 'best_sampled_cut': self.best_sampled_cut, 'shots': self.shots}


def _check_size(h, max_qubits):
    if h.n > max_qubits:
        raise ResourceGuardError(f'Statevector simulation limited to {max_qubits} qubits, got {h.n}')


def _apply_mixer(state, n, beta):
    cos_half = math.cos(beta / 2)
    sin_half = -1j * math.sin(beta / 2)
    for k in range(n):
        view = state.reshape(-1, 2, 1 << k)
        low, high = view[:, 0], view[:, 1]
        state = np.stack((cos_half * low + sin_half * high, sin_half * low + cos_half * high), axis=1).reshape(-1)
    return state


def qaoa_state(h, angles, max_qubits=DEFAULT_MAX_QUBITS, diagonal=None):
    """
    Prepare the level-p QAOA state starting from |+>^n.

    Args:
        h: IsingHamiltonian
        angles: AngleVector
        max_qubits: refuse larger instances
        diagonal: precomputed h.diagonal(), reused across angle evaluations

    Returns:
        Statevector
    """
    _check_size(h, max_qubits)
    if diagonal is None:
        diagonal = h.diagonal()
    state = np.full(1 << h.n, 2 ** (-h.n / 2), dtype=complex)
    for layer, (beta, gamma) in enumerate(zip(angles.betas, angles.gammas)):
        state = state * np.exp(-0.5j * gamma * diagonal)
        state = _apply_mixer(state, h.n, beta)
        if not np.all(np.isfinite(state)):
            raise NumericalConsistencyError(f'Non-finite amplitudes after layer {layer}')
    return Statevector(state)


def expected_energy(h, angles, max_qubits=DEFAULT_MAX_QUBITS, diagonal=None):
    _check_size(h, max_qubits)
    if diagonal is None:
        diagonal = h.diagonal()
    state = qaoa_state(h, angles, max_qubits=max_qubits, diagonal=diagonal)
    return float(state.probabilities() @ diagonal)


def cut_statistics(h, angles, shots=1000, seed=None, max_qubits=DEFAULT_MAX_QUBITS):
    """
    Expected and best-sampled cut size of a MaxCut Hamiltonian (unit couplings).
    """
    if not h.is_unit_two_body:
        raise InvalidParameterError('Cut statistics need a MaxCut Hamiltonian with unit two-body couplings')
    if shots < 1:
        raise InvalidParameterError(f'shots must be >= 1, got {shots}')
    _check_size(h, max_qubits)
    edge_count = len(h.terms)
    diagonal = h.diagonal()
    state = qaoa_state(h, angles, max_qubits=max_qubits, diagonal=diagonal)
    probabilities = state.probabilities()
    expected_cut = (edge_count - float(probabilities @ diagonal)) / 2

    rng = np.random.default_rng(seed)
    draws = rng.choice(probabilities.size, size=shots, p=probabilities / probabilities.sum())
    best = int(round((edge_count - diagonal[draws].min()) / 2))
    logger.debug(f'Cut statistics over {shots} shots: expected {expected_cut:.4f}, best {best}')
    return CutStatistics(expected_cut, best, shots)
