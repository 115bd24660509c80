import logging
import math

from superapp.apps.qaoa_limits.exceptions import ResourceGuardError
from superapp.apps.qaoa_limits.infinite_limit import sk_energy_per_vertex
from superapp.apps.qaoa_limits.sk_montecarlo import (
    FLIP_TERM_PAIRED,
    estimate_sk_energy,
    exact_sk_energy_p1,
    log_variance_upper_bound,
)

logger = logging.getLogger(__name__)


def run_mc_estimate(n, angles, samples, seed, threads=1, force=False, max_p_without_force=3,
                    max_exact_n=2048, max_p_infinite=6, flip_term=FLIP_TERM_PAIRED):
    """
    Estimate the finite-size SK energy and put it next to the infinite-size
    value and, at p=1, the exact finite-n value.

    Args:
        n: number of spins
        angles: AngleVector
        samples: number of Monte-Carlo samples
        seed: master seed
        threads: sampling threads
        force: allow depths whose variance bound makes the estimate unusable
        max_p_without_force: deepest p sampled without force
        flip_term: flip term of the Poisson intensities, see SkEnergySampler

    Returns:
        (estimate, result dict)
    """
    if angles.p > max_p_without_force:
        if not force:
            raise ResourceGuardError(
                f'Monte-Carlo at p={angles.p} has an astronomically large variance bound; pass --force to run it anyway'
            )
        logger.warning(f'Forced Monte-Carlo at p={angles.p}; the variance bound is expected to be useless')

    estimate = estimate_sk_energy(n, angles, samples, seed, threads=threads, flip_term=flip_term)
    result = {
        'n': n,
        'angles': angles.as_dict(),
        'flip_term': flip_term,
        'estimate': estimate.as_dict(),
        # survives where the bound itself overflows
        'log10_variance_bound': log_variance_upper_bound(angles) / math.log(10),
    }
    if angles.p <= max_p_infinite:
        result['infinite_size_energy'] = sk_energy_per_vertex(angles)
    if angles.p == 1 and n <= max_exact_n:
        result['exact_energy'] = exact_sk_energy_p1(n, angles, max_n=max_exact_n)
    return estimate, result
