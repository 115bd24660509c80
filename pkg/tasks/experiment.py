import logging
import math

import numpy as np

from superapp.apps.qaoa_limits.angle_tools import (
    SUBSETS,
    accepted_generators,
    attempts_to_beat,
    angle_distance,
    minimize,
    multi_restart,
    random_baseline_distance,
    standardize,
    verify_symmetry_generators,
)
from superapp.apps.qaoa_limits.bitstrings import AngleVector
from superapp.apps.qaoa_limits.exceptions import InvalidParameterError, ResourceGuardError
from superapp.apps.qaoa_limits.infinite_limit import (
    chung_lu_energy_per_vertex,
    er_energy_per_vertex,
    sk_energy_per_vertex,
    transfer_sk_to_er,
)
from superapp.apps.qaoa_limits.simulator import expected_energy
from superapp.apps.qaoa_limits.tasks.predict import two_degree_distribution
from superapp.apps.qaoa_limits.tasks.simulate import ENSEMBLE_CHUNG_LU, ENSEMBLE_ER, sample_instance

logger = logging.getLogger(__name__)

GUESS_SK_TRANSFER = 'sk-transfer'
GUESS_INFINITE = 'infinite'
GUESS_ER_MEAN_DEGREE = 'er-mean-degree'
GUESS_SOURCES = (GUESS_SK_TRANSFER, GUESS_INFINITE, GUESS_ER_MEAN_DEGREE)

SYMMETRY_CHECK_ANGLES = 3


def guessed_angles(ensemble, p, d=None, dist=None, source=GUESS_SK_TRANSFER, restarts=20, seed=0, budget=1000,
                   threads=1):
    """
    Instance-independent angles for an ensemble: SK-optimal angles
    transferred to the mean degree, the optimum of the ensemble's own
    infinite-size energy, or the Erdos-Renyi optimum at the mean degree.
    """
    mean_degree = d if ensemble == ENSEMBLE_ER else dist.mean_degree
    if source == GUESS_SK_TRANSFER:
        optimum = multi_restart(sk_energy_per_vertex, p, restarts, seed, budget=budget, threads=threads)
        return transfer_sk_to_er(optimum.best_angles, mean_degree)
    if source == GUESS_ER_MEAN_DEGREE:
        def f(angles):
            return er_energy_per_vertex(angles, mean_degree)

        return multi_restart(f, p, restarts, seed, budget=budget, threads=threads).best_angles
    if source == GUESS_INFINITE:
        def f(angles):
            if ensemble == ENSEMBLE_ER:
                return er_energy_per_vertex(angles, d)
            return chung_lu_energy_per_vertex(angles, dist)

        return multi_restart(f, p, restarts, seed, budget=budget, threads=threads).best_angles
    raise InvalidParameterError(f'Unknown guess source "{source}". Available sources: {", ".join(GUESS_SOURCES)}')


def _instance_seeds(seed, instances):
    for child in np.random.SeedSequence(seed).spawn(instances):
        graph_seed, restart_seed = child.generate_state(2)
        yield int(graph_seed), int(restart_seed)


def check_symmetries(hamiltonian, p, seed=0, samples=SYMMETRY_CHECK_ANGLES):
    """verify_symmetry_generators on one simulated instance at a few random angle sets."""
    diagonal = hamiltonian.diagonal()
    rng = np.random.default_rng(seed)
    angle_samples = [AngleVector.from_flat(x) for x in rng.uniform(-math.pi, math.pi, size=(samples, 2 * p))]
    return verify_symmetry_generators(
        [lambda angles: expected_energy(hamiltonian, angles, diagonal=diagonal)], angle_samples, tolerance=1e-8
    )


def run_instance(hamiltonian, guess, restarts, restart_seed, budget=1000, threads=1, generators=None):
    """
    Compare warm-starting from the guess against random restarts on one instance.

    Returns:
        dict with the guess energy, the optimized-from-guess energy, the best
        random-restart energy, attempts needed to beat the guess-started run
        and guess-to-optimum distances under the given symmetry generators
    """
    diagonal = hamiltonian.diagonal()

    def f(angles):
        return expected_energy(hamiltonian, angles, diagonal=diagonal)

    p = guess.p
    from_guess = minimize(f, p, guess, budget=budget)
    random_runs = multi_restart(f, p, restarts, restart_seed, budget=budget, threads=threads)
    best_angles = (
        from_guess.best_angles if from_guess.best_value <= random_runs.best_value else random_runs.best_angles
    )

    canonical_guess = standardize(guess, generators=generators)
    canonical_best = standardize(best_angles, generators=generators)
    return {
        'edges': len(hamiltonian.terms),
        'guess_energy': f(guess),
        'from_guess_energy': from_guess.best_value,
        'best_random_energy': random_runs.best_value,
        'guess_at_least_as_good': from_guess.best_value <= random_runs.best_value + 1e-9,
        'attempts_to_beat': attempts_to_beat(random_runs.trace, from_guess.best_value),
        'distances': {subset: angle_distance(canonical_guess, canonical_best, subset) for subset in SUBSETS},
    }


def run_experiment(ensemble, n=16, p=3, instances=50, restarts=200, seed=0, d=4.0, dist=None,
                   source=GUESS_SK_TRANSFER, budget=1000, threads=1, max_qubits=20, baseline_samples=20_000):
    """
    Guessed-angles experiment over random instances of an ensemble.

    Instances and restart points depend only on seed, so runs that differ
    only in source compare guesses on the same graphs.

    Args:
        ensemble: er or chung-lu
        n: vertices per instance
        p: QAOA depth
        instances: number of random instances
        restarts: random restarts per instance
        seed: master seed; instance i uses the i-th SeedSequence child
        source: how the guess is obtained (GUESS_SOURCES)

    Returns:
        dict with the guess, per-instance rows and a summary
    """
    if ensemble not in (ENSEMBLE_ER, ENSEMBLE_CHUNG_LU):
        raise InvalidParameterError(f'Experiments run on er or chung-lu ensembles, got {ensemble}')
    if ensemble == ENSEMBLE_CHUNG_LU and dist is None:
        raise InvalidParameterError('Ensemble chung-lu needs --dist')
    if n > max_qubits:
        raise ResourceGuardError(f'Experiment instances limited to n <= {max_qubits}, got {n}')
    if instances < 1 or restarts < 1:
        raise InvalidParameterError('instances and restarts must be >= 1')

    guess = guessed_angles(ensemble, p, d=d, dist=dist, source=source, seed=seed, budget=budget, threads=threads)
    logger.info(f'Guessed angles for {ensemble} at p={p}: {guess.as_dict()}')

    rows = []
    symmetries = generators = None
    for index, (graph_seed, restart_seed) in enumerate(_instance_seeds(seed, instances)):
        _, hamiltonian = sample_instance(ensemble, n, graph_seed, d=d, dist=dist)
        if symmetries is None:
            symmetries = check_symmetries(hamiltonian, p, seed=graph_seed)
            generators = accepted_generators(symmetries)
            logger.info(f'Standardizing with {", ".join(generators) or "no"} symmetry generators')
        row = run_instance(hamiltonian, guess, restarts, restart_seed, budget=budget, threads=threads,
                           generators=generators)
        row['instance'] = index
        rows.append(row)
        logger.info(
            f'Instance {index}: guess {row["guess_energy"]:.4f}, from guess {row["from_guess_energy"]:.4f}, '
            f'best random {row["best_random_energy"]:.4f}'
        )

    attempts = [row['attempts_to_beat'] for row in rows if row['attempts_to_beat'] is not None]
    summary = {
        'instances': instances,
        'fraction_guess_at_least_as_good': sum(row['guess_at_least_as_good'] for row in rows) / instances,
        'mean_attempts_to_beat': sum(attempts) / len(attempts) if attempts else math.nan,
        'never_beaten': instances - len(attempts),
        'mean_distance': {
            subset: sum(row['distances'][subset] for row in rows) / instances for subset in SUBSETS
        },
        'random_baseline_distance': {
            subset: random_baseline_distance(p, samples=baseline_samples, seed=seed, subset=subset,
                                             generators=generators)
            for subset in SUBSETS
        },
        'symmetry_generators': symmetries,
    }
    return {
        'ensemble': ensemble,
        'n': n,
        'p': p,
        'guess': guess.as_dict(),
        'guess_source': source,
        'instances': rows,
        'summary': summary,
    }


def run_q_sweep_experiment(qs, low=4.0, high=9.0, **kwargs):
    """
    run_experiment on the two-degree Chung-Lu ensembles low:q, high:1-q,
    one entry per q with the guess and the summary.
    """
    entries = []
    for q in qs:
        dist = two_degree_distribution(q, low, high)
        result = run_experiment(ENSEMBLE_CHUNG_LU, dist=dist, **kwargs)
        entries.append({
            'q': q,
            'dist': str(dist),
            'mean_degree': dist.mean_degree,
            'guess': result['guess'],
            'summary': result['summary'],
        })
    return {'ensemble': ENSEMBLE_CHUNG_LU, 'low': low, 'high': high, 'sweep': entries}
