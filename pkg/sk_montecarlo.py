"""
Finite-size SK-QAOA energies.

SkEnergySampler draws unbiased single-sample estimates of E<H>/n for
couplings N(0, 1)/sqrt(n) over pairs i<j. Every ordered bitstring pair
(s, t) with phi(s ^ t) != 0 gets its own Poisson draws and the energy is
Re{(i/8) sum_{s,t} ...}, so the pair contributions of one sample are
independent and variance_upper_bound() bounds the variance of a single
sample.

Intensities are lambda_r = (n/2) B_r (A_{F(r)} - A_r) and the closing
power is taken of half the level-p sum. Multiplicities start at zero.
The flip term A_{F(r)} carries phi(t ^ F(r)) by default (FLIP_TERM_PAIRED);
FLIP_TERM_LITERAL uses phi(F(r)) in its place, which is already biased
at p = 1 and is kept for comparison.

exact_sk_energy_p1 evaluates the finite-n configuration sum at p=1 and is
the oracle the sampler is checked against.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from superapp.apps.qaoa_limits.bitstrings import BitstringTable
from superapp.apps.qaoa_limits.exceptions import (
    InvalidParameterError,
    NumericalConsistencyError,
    ResourceGuardError,
    SamplerDegenerationError,
)
from superapp.apps.qaoa_limits.infinite_limit import _real_part, xor_convolve

logger = logging.getLogger(__name__)

DEFAULT_MAX_EXACT_N = 2048
PAIR_CHUNK = 4096
MAX_LOG_FLOAT = 709.0

FLIP_TERM_PAIRED = 'paired'
FLIP_TERM_LITERAL = 'literal'
FLIP_TERMS = (FLIP_TERM_PAIRED, FLIP_TERM_LITERAL)


@dataclass(frozen=True)
class EnergyEstimate:
    mean: float
    std_error: float
    n_samples: int
    variance_bound: float = None
    samples: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.n_samples < 1 or self.std_error < 0:
            raise InvalidParameterError(
                f'Invalid estimate: n_samples={self.n_samples}, std_error={self.std_error}'
            )
        if self.variance_bound is not None and self.variance_bound < 0:
            raise InvalidParameterError(f'Variance bound must be non-negative, got {self.variance_bound}')

    @property
    def std_bound(self):
        return None if self.variance_bound is None else math.sqrt(self.variance_bound)

    @property
    def mean_std_bound(self):
        """Bound on the standard deviation of the mean of n_samples samples."""
        return None if self.variance_bound is None else math.sqrt(self.variance_bound / self.n_samples)

    def as_dict(self):
        return {
            'mean': self.mean,
            'std_error': self.std_error,
            'n_samples': self.n_samples,
            'variance_bound': self.variance_bound,
            'std_bound': self.std_bound,
            'mean_std_bound': self.mean_std_bound,
        }


class SkEnergySampler:
    """Importance sampler for the finite-n SK-QAOA energy at fixed (n, angles)."""

    def __init__(self, n, angles, flip_term=FLIP_TERM_PAIRED):
        if int(n) != n or n < 2:
            raise InvalidParameterError(f'SK sampling needs an integer n >= 2, got {n}')
        if flip_term not in FLIP_TERMS:
            raise InvalidParameterError(f'flip_term must be one of {FLIP_TERMS}, got {flip_term!r}')
        self.n = int(n)
        self.angles = angles
        self.flip_term = flip_term
        self.table = BitstringTable.build(angles)

        structure = self.table.structure
        self.strings = np.arange(structure.size)
        self.phi_squared = self.table.phi ** 2
        self.signed_b = self.table.signed_b()
        self.representatives = structure.lower_odd()
        self.flips = structure.flip[self.representatives]
        self.symmetric = structure.symmetric()

        u, v = np.divmod(np.arange(structure.size ** 2), structure.size)
        keep = self.table.phi[u ^ v] != 0
        self.u, self.v = u[keep], v[keep]
        phase = self.table.phi[self.u ^ self.v]
        self.coefficients = (
            structure.center_sign[self.u] * structure.center_sign[self.v]
            * self.signed_b[self.u] * self.signed_b[self.v]
            * phase * np.exp(-phase ** 2 / (2 * self.n))
        )
        logger.debug(
            f'SK sampler ready: n={self.n}, p={angles.p}, {self.u.size} ordered pairs, '
            f'{self.representatives.size} Poisson levels, {flip_term} flip term'
        )

    def _pair_weights(self, u, v, rng):
        n = self.n
        # exponent[k, x] = phi(u_k ^ x)^2 + phi(v_k ^ x)^2 + sum_r m_r phi(r ^ x)^2
        exponent = self.phi_squared[u[:, None] ^ self.strings] + self.phi_squared[v[:, None] ^ self.strings]
        log_weight = np.zeros(u.size)
        phase = np.zeros(u.size)
        drawn = np.zeros(u.size, dtype=np.int64)

        for representative, flipped in zip(self.representatives, self.flips):
            flipped_exponent = exponent[:, flipped]
            if self.flip_term == FLIP_TERM_LITERAL:
                flipped_exponent = flipped_exponent - self.phi_squared[v ^ flipped] + self.phi_squared[flipped]
            intensity = (n / 2) * self.table.b[representative] * (
                np.exp(-flipped_exponent / (2 * n)) - np.exp(-exponent[:, representative] / (2 * n))
            )
            magnitude = np.abs(intensity)
            if not np.all(np.isfinite(magnitude)):
                raise SamplerDegenerationError(f'Poisson intensity is not finite (n={n}, p={self.angles.p})')
            try:
                counts = rng.poisson(magnitude)
            except ValueError as e:
                raise SamplerDegenerationError(f'Poisson draw failed for intensity up to {magnitude.max():.3e}: {e}')
            # reweight by e^{|lambda|} (lambda/|lambda|)^m
            log_weight += magnitude
            phase += counts * np.angle(intensity)
            drawn += counts
            # later levels see the drawn multiplicity through every A_x
            exponent += counts[:, None] * self.phi_squared[representative ^ self.strings]

        # (n-1)!/((n-2-m)! n^{m+1}) (Q/2)^{n-2-m}; pairs with m > n-2 contribute zero
        remaining = n - 2 - drawn
        valid = remaining >= 0
        closing = np.zeros(u.size, dtype=complex)
        if np.any(valid):
            rest = remaining[valid]
            symmetric_sum = (
                np.exp(-exponent[valid][:, self.symmetric] / (2 * n)) @ self.signed_b[self.symmetric]
            )
            log_falling = gammaln(n) - gammaln(rest + 1) - (drawn[valid] + 1) * math.log(n)
            with np.errstate(over='ignore', invalid='ignore'):
                closing[valid] = (
                    np.exp(log_weight[valid] + log_falling + 1j * phase[valid]) * (symmetric_sum / 2) ** rest
                )
        return closing

    def sample(self, rng):
        """One draw of the estimator using the given numpy Generator."""
        total = 0j
        for start in range(0, self.u.size, PAIR_CHUNK):
            chunk = slice(start, start + PAIR_CHUNK)
            weights = self._pair_weights(self.u[chunk], self.v[chunk], rng)
            total += self.coefficients[chunk] @ weights
        value = (0.125j * total).real
        if not math.isfinite(value):
            raise SamplerDegenerationError(f'Sample is not finite (n={self.n}, p={self.angles.p})')
        return float(value)


def sample_sk_energy(n, angles, rng_seed, flip_term=FLIP_TERM_PAIRED):
    return SkEnergySampler(n, angles, flip_term).sample(np.random.default_rng(rng_seed))


def estimate_sk_energy(n, angles, n_samples, seed, threads=1, with_bound=True, flip_term=FLIP_TERM_PAIRED):
    """
    Average independent samples; sample i uses the i-th child of
    SeedSequence(seed), so results do not depend on the thread count.

    Args:
        n: number of spins
        angles: AngleVector
        n_samples: number of samples, at least 2
        seed: master seed
        threads: worker threads
        with_bound: attach variance_upper_bound(angles)
        flip_term: FLIP_TERM_PAIRED or FLIP_TERM_LITERAL

    Returns:
        EnergyEstimate with the raw samples attached
    """
    if n_samples < 2:
        raise InvalidParameterError(f'An estimate needs at least 2 samples, got {n_samples}')
    sampler = SkEnergySampler(n, angles, flip_term)
    streams = np.random.SeedSequence(seed).spawn(n_samples)

    def draw(stream):
        return sampler.sample(np.random.default_rng(stream))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            values = np.fromiter(executor.map(draw, streams), dtype=float, count=n_samples)
    else:
        values = np.fromiter(map(draw, streams), dtype=float, count=n_samples)

    std_error = float(values.std(ddof=1) / math.sqrt(n_samples))
    bound = variance_upper_bound(angles) if with_bound else None
    logger.info(f'SK estimate n={n} p={angles.p}: {values.mean():.6f} +- {std_error:.2e} ({n_samples} samples)')
    values.setflags(write=False)
    return EnergyEstimate(float(values.mean()), std_error, n_samples, bound, values)


def log_variance_upper_bound(angles):
    """
    Natural log of variance_upper_bound(angles), finite where the bound
    itself overflows a float. -inf when the bound is zero.
    """
    table = BitstringTable.build(angles)
    structure = table.structure
    phi_squared = table.phi ** 2
    b_abs = np.abs(table.b)
    listed = structure.lower_odd()
    flips = structure.flip[listed]

    # gap[j, k] = |phi(r_j ^ r_k)^2 - phi(r_j ^ F(r_k))^2|
    gap = np.abs(phi_squared[listed[:, None] ^ listed] - phi_squared[listed[:, None] ^ flips])

    # log R^; level-p strings stay at R^ = 1
    log_r = np.zeros(structure.size)
    start = 0.25 * gap @ b_abs[listed]
    log_r[listed] = start
    log_r[flips] = start

    # backwards over the list: R^_s feeds every earlier t and its flip
    for k in range(listed.size - 1, 0, -1):
        current = log_r[listed[k]]
        if current > MAX_LOG_FLOAT:
            logger.warning(f'Variance bound overflows at p={angles.p} (log R^ = {current:.1f})')
            return math.inf
        increment = 0.25 * math.exp(current) * b_abs[listed[k]] * gap[:k, k]
        log_r[listed[:k]] += increment
        log_r[flips[:k]] = log_r[listed[:k]]

    if not np.all(np.isfinite(log_r)):
        return math.inf
    # (1/8) sum_{s,t} phi(s ^ t)^2 |B_s| R^_s |B_t| R^_t, shifted by the largest log R^
    shift = float(log_r.max())
    weights = b_abs * np.exp(log_r - shift)
    quadratic = float(np.real(weights @ xor_convolve(weights, phi_squared)))
    if quadratic <= 0:
        return -math.inf
    return math.log(quadratic) + 2 * shift - math.log(8)


def variance_upper_bound(angles):
    """
    Upper bound on the variance of one SkEnergySampler sample, independent of n.

    Returns inf when the bound overflows a float.
    """
    log_bound = log_variance_upper_bound(angles)
    if log_bound == -math.inf:
        return 0.0
    return math.exp(log_bound) if log_bound < MAX_LOG_FLOAT else math.inf


def exact_sk_energy_p1(n, angles, max_n=DEFAULT_MAX_EXACT_N):
    """
    Exact E<H>/n of p=1 QAOA on SK instances of size n, averaged over couplings.

    The configuration sum only depends on (s_2, s_0) of each spin's path, so
    spins are grouped into four classes. The two classes with s_2 != s_0
    carry zero total weight and hold at most one spin in any nonzero term,
    leaving O(n) terms.
    """
    if angles.p != 1:
        raise InvalidParameterError(f'The exact configuration sum is only available at p=1, got p={angles.p}')
    if int(n) != n or n < 2:
        raise InvalidParameterError(f'n must be an integer >= 2, got {n}')
    n = int(n)
    if n > max_n:
        raise ResourceGuardError(f'Exact SK sum limited to n <= {max_n}, got {n}')

    table = BitstringTable.build(angles)
    bits = table.structure.bits
    signed_b = table.signed_b()
    class_of = 2 * bits[:, 2] + bits[:, 0]
    class_weight = np.array([signed_b[class_of == c].sum() for c in range(4)])
    center_weight = np.array([(table.structure.center_sign * signed_b)[class_of == c].sum() for c in range(4)])
    class_bits = np.array([[c >> 1, c & 1] for c in range(4)])
    spins = 1 - 2 * class_bits
    half_gamma = 0.5 * angles.gammas[0]
    # phases[c, c'] for spins in classes c and c'
    phases = half_gamma * (
        spins[:, None, 0] * spins[None, :, 0] - spins[:, None, 1] * spins[None, :, 1]
    )

    free = [c for c in range(4) if abs(class_weight[c]) > 1e-14]
    empty = [c for c in range(4) if c not in free]
    if len(free) != 2:
        raise NumericalConsistencyError(f'Expected two weighted classes at p=1, found {len(free)}')

    total = 0j
    for capped in np.ndindex(*(2,) * len(empty)):
        rest = n - sum(capped)
        counts = np.zeros((4, rest + 1), dtype=np.int64)
        for c, k in zip(empty, capped):
            counts[c] = k
        counts[free[0]] = np.arange(rest + 1)
        counts[free[1]] = rest - np.arange(rest + 1)

        log_multinomial = gammaln(n + 1) - gammaln(counts + 1).sum(axis=0) - n * math.log(2)
        gaussian = np.zeros(rest + 1)
        for c in range(4):
            for c2 in range(c + 1, 4):
                gaussian -= phases[c, c2] ** 2 * counts[c] * counts[c2] / (2 * n)

        with np.errstate(invalid='ignore', divide='ignore'):
            powers = np.where(counts == 0, 1, class_weight[:, None] ** np.maximum(counts, 0))
            reduced = np.where(counts >= 1, class_weight[:, None] ** np.maximum(counts - 1, 0), 0)
        observable = np.zeros(rest + 1, dtype=complex)
        for c in range(4):
            for c2 in range(c + 1, 4):
                if phases[c, c2] == 0:
                    continue
                others = np.prod(np.delete(powers, [c, c2], axis=0), axis=0)
                observable += phases[c, c2] * others * (
                    counts[c] * center_weight[c] * reduced[c] * counts[c2] * center_weight[c2] * reduced[c2]
                )
        total += np.sum(np.exp(log_multinomial + gaussian) * observable)

    return _real_part(1j * total / n ** 2, f'exact SK energy (n={n})')
