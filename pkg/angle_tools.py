"""
Angle optimization (Nelder-Mead with random restarts) and standardization
of QAOA angles under the symmetries of the cost function.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from superapp.apps.qaoa_limits.bitstrings import AngleVector
from superapp.apps.qaoa_limits.exceptions import InvalidParameterError, NumericalConsistencyError

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1000
DEFAULT_XATOL = 1e-8
DEFAULT_FATOL = 1e-12

WEIGHT_UNWEIGHTED = 'unweighted'
WEIGHT_WEIGHTED = 'weighted'
WEIGHT_PARITIES = (WEIGHT_UNWEIGHTED, WEIGHT_WEIGHTED)

SUBSET_ALL = 'all'
SUBSET_BETAS = 'betas'
SUBSET_GAMMAS = 'gammas'
SUBSETS = (SUBSET_ALL, SUBSET_BETAS, SUBSET_GAMMAS)

GENERATOR_SIGN_FLIP = 'sign_flip'
GENERATOR_BETA_SHIFT = 'beta_shift'
GENERATOR_GAMMA_SHIFT = 'gamma_shift'
GENERATORS = (GENERATOR_SIGN_FLIP, GENERATOR_BETA_SHIFT, GENERATOR_GAMMA_SHIFT)


@dataclass(frozen=True)
class TraceEntry:
    restart: int
    value: float
    iterations: int
    evaluations: int


@dataclass(frozen=True)
class OptimizationResult:
    best_angles: AngleVector
    best_value: float
    restarts_used: int
    trace: tuple

    def as_dict(self):
        return {
            'best_angles': self.best_angles.as_dict(),
            'best_value': self.best_value,
            'restarts_used': self.restarts_used,
        }


def _checked_objective(f):
    def objective(x):
        value = f(AngleVector.from_flat(x))
        if not math.isfinite(value):
            raise NumericalConsistencyError(f'Energy functional returned {value} at {list(x)}')
        return value
    return objective


def _minimize_flat(objective, start, budget, xatol, fatol):
    bounds = [(-math.pi, math.pi)] * start.size
    start = np.clip(start, -math.pi, math.pi)
    start_value = objective(start)
    result = optimize.minimize(
        objective,
        start,
        method='Nelder-Mead',
        bounds=bounds,
        options={'maxfev': budget, 'xatol': xatol, 'fatol': fatol},
    )
    if result.fun <= start_value:
        return result.x, float(result.fun), int(result.nit), int(result.nfev)
    return start, float(start_value), int(result.nit), int(result.nfev)


def minimize(f, p, init, budget=DEFAULT_BUDGET, xatol=DEFAULT_XATOL, fatol=DEFAULT_FATOL):
    """
    Local Nelder-Mead minimization of f over the box [-pi, pi]^{2p}.

    Args:
        f: callable taking an AngleVector and returning a float
        p: QAOA depth
        init: starting AngleVector, clipped into the box
        budget: maximum number of function evaluations

    Returns:
        OptimizationResult with a single trace entry; its value never exceeds f(init clipped)
    """
    if budget < 1:
        raise InvalidParameterError(f'Optimizer budget must be >= 1, got {budget}')
    if init.p != p:
        raise InvalidParameterError(f'Initial angles have p={init.p}, expected {p}')
    x, value, iterations, evaluations = _minimize_flat(_checked_objective(f), init.to_flat(), budget, xatol, fatol)
    return OptimizationResult(AngleVector.from_flat(x), value, 1, (TraceEntry(0, value, iterations, evaluations),))


def multi_restart(f, p, n_restarts, seed, budget=DEFAULT_BUDGET, threads=1, xatol=DEFAULT_XATOL,
                  fatol=DEFAULT_FATOL):
    """
    Run minimize from n_restarts uniform random points in [-pi, pi]^{2p}.

    Starting points are drawn up front from default_rng(seed), so the trace
    does not depend on the thread count. Ties go to the lowest restart index.
    """
    if n_restarts < 1:
        raise InvalidParameterError(f'n_restarts must be >= 1, got {n_restarts}')
    if p < 1:
        raise InvalidParameterError(f'QAOA depth p must be >= 1, got {p}')
    starts = np.random.default_rng(seed).uniform(-math.pi, math.pi, size=(n_restarts, 2 * p))
    objective = _checked_objective(f)

    def run(start):
        return _minimize_flat(objective, start, budget, xatol, fatol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            outcomes = list(executor.map(run, starts))
    else:
        outcomes = [run(start) for start in starts]

    trace = tuple(
        TraceEntry(index, value, iterations, evaluations)
        for index, (_, value, iterations, evaluations) in enumerate(outcomes)
    )
    best = min(range(n_restarts), key=lambda index: (outcomes[index][1], index))
    logger.info(f'Best of {n_restarts} restarts at p={p}: {outcomes[best][1]:.8f} (restart {best})')
    return OptimizationResult(AngleVector.from_flat(outcomes[best][0]), outcomes[best][1], n_restarts, trace)


def attempts_to_beat(trace, reference):
    """1-based index of the first restart strictly below reference, or None."""
    for position, entry in enumerate(trace, start=1):
        if entry.value < reference:
            return position
    return None


@dataclass(frozen=True)
class StandardizedAngles:
    angles: AngleVector
    beta_period: float
    gamma_period: float = None
    generators: tuple = GENERATORS

    @property
    def p(self):
        return self.angles.p


def _check_generators(generators):
    unknown = set(generators) - set(GENERATORS)
    if unknown:
        raise InvalidParameterError(f'Unknown symmetry generators {sorted(unknown)}. Available: {GENERATORS}')


def _group(weight_parity, even_arity, generators=None):
    """Generators in effect plus the beta and gamma periods they induce."""
    if weight_parity not in WEIGHT_PARITIES:
        raise InvalidParameterError(f'weight_parity must be one of {WEIGHT_PARITIES}, got {weight_parity!r}')
    if generators is None:
        generators = GENERATORS
    _check_generators(generators)
    allowed = {GENERATOR_SIGN_FLIP}
    if even_arity:
        allowed.add(GENERATOR_BETA_SHIFT)
    if weight_parity == WEIGHT_UNWEIGHTED:
        allowed.add(GENERATOR_GAMMA_SHIFT)
    active = tuple(g for g in GENERATORS if g in allowed and g in generators)
    # beta -> beta + 2 pi leaves every B unchanged, so 2 pi is always a period
    beta_period = math.pi if GENERATOR_BETA_SHIFT in active else 2 * math.pi
    gamma_period = 2 * math.pi if GENERATOR_GAMMA_SHIFT in active else None
    return active, beta_period, gamma_period


def _reduce(value, period):
    """Representative of value modulo period in (-period/2, period/2]."""
    if period is None:
        return value
    half = period / 2
    if -half < value <= half:
        return value
    return half - (half - value) % period


def _reduced(angles, beta_period, gamma_period):
    return AngleVector(
        tuple(_reduce(b, beta_period) for b in angles.betas),
        tuple(_reduce(g, gamma_period) for g in angles.gammas),
    )


def _negated(angles):
    return AngleVector(tuple(-b for b in angles.betas), tuple(-g for g in angles.gammas))


def standardize(a, weight_parity=WEIGHT_UNWEIGHTED, even_arity=True, generators=None):
    """
    Canonical representative of a under sign flip, beta_j -> beta_j + pi
    (even-arity Hamiltonians, otherwise 2 pi) and gamma_j -> gamma_j + 2 pi
    (integer couplings).

    generators restricts the group, typically to accepted_generators() of a
    verify_symmetry_generators report; None means every generator the
    parity and arity allow.
    """
    if isinstance(a, StandardizedAngles):
        a = a.angles
    active, beta_period, gamma_period = _group(weight_parity, even_arity, generators)
    canonical = _reduced(a, beta_period, gamma_period)
    if GENERATOR_SIGN_FLIP in active:
        candidates = [canonical, _reduced(_negated(a), beta_period, gamma_period)]
        canonical = max(candidates, key=lambda c: tuple(round(x, 12) for x in c.gammas + c.betas))
    return StandardizedAngles(canonical, beta_period, gamma_period, active)


def _wrapped(delta, period):
    """|delta| reduced by period, divided by half the period (by pi, capped at 1, without one)."""
    delta = np.abs(np.asarray(delta, dtype=float))
    if period is None:
        return np.minimum(delta / math.pi, 1.0)
    delta = np.mod(delta, period)
    return np.minimum(delta, period - delta) / (period / 2)


def _rms(betas, gammas, subset):
    chosen = {
        SUBSET_ALL: np.concatenate((betas, gammas), axis=-1),
        SUBSET_BETAS: betas,
        SUBSET_GAMMAS: gammas,
    }[subset]
    return np.sqrt(np.mean(chosen ** 2, axis=-1))


def angle_distance(a, b, subset=SUBSET_ALL):
    """
    Normalized distance in [0, 1] between two standardized angle sets: the
    root-mean-square of per-coordinate wrapped differences of the canonical
    representatives, each divided by half its period.
    """
    if subset not in SUBSETS:
        raise InvalidParameterError(f'subset must be one of {SUBSETS}, got {subset!r}')
    if a.p != b.p:
        raise InvalidParameterError(f'Cannot compare angles of depth {a.p} and {b.p}')
    if (a.beta_period, a.gamma_period, a.generators) != (b.beta_period, b.gamma_period, b.generators):
        raise InvalidParameterError('Angles were standardized under different symmetry groups')

    betas = _wrapped(np.subtract(a.angles.betas, b.angles.betas), a.beta_period)
    gammas = _wrapped(np.subtract(a.angles.gammas, b.angles.gammas), a.gamma_period)
    return float(_rms(betas, gammas, subset))


def apply_generator(angles, generator, layer=0):
    if generator not in GENERATORS:
        raise InvalidParameterError(f'Unknown symmetry generator {generator!r}')
    if generator == GENERATOR_SIGN_FLIP:
        return _negated(angles)
    if not 0 <= layer < angles.p:
        raise InvalidParameterError(f'Layer {layer} out of range for p={angles.p}')
    betas, gammas = list(angles.betas), list(angles.gammas)
    if generator == GENERATOR_BETA_SHIFT:
        betas[layer] += math.pi
    else:
        gammas[layer] += 2 * math.pi
    return AngleVector(tuple(betas), tuple(gammas))


def verify_symmetry_generators(energy_functions, angle_samples, tolerance=1e-10):
    """
    Check every generator on every (energy function, angles, layer) combination.

    Args:
        energy_functions: callables AngleVector -> float, typically simulator energies
        angle_samples: AngleVectors to test
        tolerance: largest accepted |E(a) - E(g a)|

    Returns:
        dict generator -> {'holds': bool, 'max_deviation': float}
    """
    report = {}
    for generator in GENERATORS:
        deviation = 0.0
        for energy in energy_functions:
            for angles in angle_samples:
                reference = energy(angles)
                layers = [0] if generator == GENERATOR_SIGN_FLIP else range(angles.p)
                for layer in layers:
                    deviation = max(deviation, abs(energy(apply_generator(angles, generator, layer)) - reference))
        report[generator] = {'holds': deviation < tolerance, 'max_deviation': deviation}
        logger.info(f'Symmetry {generator}: max deviation {deviation:.2e}')
    return report


def accepted_generators(report):
    """Generators a verify_symmetry_generators report found to hold."""
    return tuple(g for g in GENERATORS if report.get(g, {}).get('holds'))


def random_baseline_distance(p, samples=100_000, seed=0, subset=SUBSET_ALL, weight_parity=WEIGHT_UNWEIGHTED,
                             even_arity=True, generators=None):
    """
    Mean angle_distance between two independent uniformly random points of
    the standardized domain: beta_j uniform over one beta period, gamma_j
    over one gamma period ([-pi, pi] without one).
    """
    if samples < 1:
        raise InvalidParameterError(f'samples must be >= 1, got {samples}')
    if subset not in SUBSETS:
        raise InvalidParameterError(f'subset must be one of {SUBSETS}, got {subset!r}')
    _, beta_period, gamma_period = _group(weight_parity, even_arity, generators)
    gamma_span = 2 * math.pi if gamma_period is None else gamma_period

    rng = np.random.default_rng(seed)
    betas = rng.uniform(-beta_period / 2, beta_period / 2, size=(2, samples, p))
    gammas = rng.uniform(-gamma_span / 2, gamma_span / 2, size=(2, samples, p))
    distances = _rms(_wrapped(betas[0] - betas[1], beta_period), _wrapped(gammas[0] - gammas[1], gamma_period), subset)
    return float(distances.mean())
