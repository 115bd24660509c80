import logging
import math

from superapp.apps.qaoa_limits.angle_tools import (
    WEIGHT_UNWEIGHTED,
    WEIGHT_WEIGHTED,
    multi_restart,
    standardize,
)
from superapp.apps.qaoa_limits.dspin import (
    DSpinConfig,
    dense_p1_energy,
    diluted_p1_energy_closed_form,
    per_interaction,
)
from superapp.apps.qaoa_limits.exceptions import InvalidParameterError, ResourceGuardError
from superapp.apps.qaoa_limits.infinite_limit import (
    DegreeDistribution,
    chung_lu_energy_per_vertex,
    er_energy_per_vertex,
    sk_energy_per_vertex,
)

logger = logging.getLogger(__name__)

MODEL_ER = 'er'
MODEL_SK = 'sk'
MODEL_CHUNG_LU = 'chung-lu'
MODEL_DILUTED_P1 = 'diluted-p1'
MODEL_DENSE_P1 = 'dense-p1'
MODELS = (MODEL_ER, MODEL_SK, MODEL_CHUNG_LU, MODEL_DILUTED_P1, MODEL_DENSE_P1)
P1_MODELS = (MODEL_DILUTED_P1, MODEL_DENSE_P1)


def energy_functional(model, p, d=None, dist=None, D=2, max_p=6, tolerance=None):
    """
    Build the infinite-size energy of a model as a function of AngleVector.

    Args:
        model: one of MODELS
        p: QAOA depth
        d: average degree (er, diluted-p1)
        dist: DegreeDistribution (chung-lu)
        D: interaction arity (diluted-p1, dense-p1)
        max_p: largest depth accepted for the recursive formulas
        tolerance: imaginary-residue tolerance

    Returns:
        callable mapping AngleVector to energy per vertex
    """
    if model not in MODELS:
        raise InvalidParameterError(f'Unknown model "{model}". Available models: {", ".join(MODELS)}')
    if model in P1_MODELS and p != 1:
        raise InvalidParameterError(f'Model {model} is only defined at p=1, got p={p}')
    if p < 1:
        raise InvalidParameterError(f'QAOA depth p must be >= 1, got {p}')
    if p > max_p:
        raise ResourceGuardError(f'Infinite-size formulas limited to p <= {max_p}, got p={p}')

    if model == MODEL_ER:
        if d is None:
            raise InvalidParameterError('Model er needs --d')
        return lambda angles: er_energy_per_vertex(angles, d, tolerance)
    if model == MODEL_SK:
        return lambda angles: sk_energy_per_vertex(angles, tolerance)
    if model == MODEL_CHUNG_LU:
        if dist is None:
            raise InvalidParameterError('Model chung-lu needs --dist')
        return lambda angles: chung_lu_energy_per_vertex(angles, dist, tolerance)
    if model == MODEL_DILUTED_P1:
        cfg = DSpinConfig(D, d)
        cfg.require_degree()
        return lambda angles: diluted_p1_energy_closed_form(angles.betas[0], angles.gammas[0], cfg, tolerance)
    cfg = DSpinConfig(D)
    return lambda angles: dense_p1_energy(angles.betas[0], angles.gammas[0], cfg.D, tolerance)


def symmetry_class(model, D=2):
    """(weight_parity, even_arity) of the Hamiltonians behind a model."""
    if model in (MODEL_ER, MODEL_CHUNG_LU):
        return WEIGHT_UNWEIGHTED, True
    if model == MODEL_DILUTED_P1:
        return WEIGHT_UNWEIGHTED, D % 2 == 0
    if model == MODEL_DENSE_P1:
        return WEIGHT_WEIGHTED, D % 2 == 0
    return WEIGHT_WEIGHTED, True


def rescale_degree(model, d=None, dist=None, D=2):
    """Degree whose square root rescales gamma, or None for the dense models."""
    if model == MODEL_ER:
        return d
    if model == MODEL_DILUTED_P1:
        return math.factorial(D - 1) * d
    if model == MODEL_CHUNG_LU:
        return dist.mean_degree
    return None


def predict_angles(model, p, d=None, dist=None, D=2, restarts=20, seed=0, budget=1000, threads=1,
                   xatol=1e-8, fatol=1e-12, max_p=6, tolerance=None):
    """
    Optimize the infinite-size energy of a model and describe the optimum.

    Returns:
        dict with the standardized optimal angles, the energy, gamma * sqrt(d)
        where a degree applies, and the restart trace
    """
    f = energy_functional(model, p, d=d, dist=dist, D=D, max_p=max_p, tolerance=tolerance)
    logger.info(f'Optimizing {model} at p={p} with {restarts} restarts')
    optimum = multi_restart(f, p, restarts, seed, budget=budget, threads=threads, xatol=xatol, fatol=fatol)
    weight_parity, even_arity = symmetry_class(model, D)
    angles = standardize(optimum.best_angles, weight_parity, even_arity).angles

    result = {
        'model': model,
        'p': p,
        'angles': angles.as_dict(),
        'energy': optimum.best_value,
        'trace': [
            {'restart': e.restart, 'value': e.value, 'iterations': e.iterations, 'evaluations': e.evaluations}
            for e in optimum.trace
        ],
    }
    degree = rescale_degree(model, d, dist, D)
    if degree is not None:
        result['rescaled_gammas'] = [g * math.sqrt(degree) for g in angles.gammas]
    if model == MODEL_DILUTED_P1:
        result['energy_per_interaction'] = per_interaction(optimum.best_value, DSpinConfig(D, d))
    return result


def relative_variation(values):
    """(max - min) / mean of |values|; 0 when all values vanish."""
    magnitudes = [abs(v) for v in values]
    mean = sum(magnitudes) / len(magnitudes)
    return 0.0 if mean == 0 else (max(values) - min(values)) / mean


def predict_sweep(model, p, degrees, D=2, **kwargs):
    """
    Optimal angles over several average degrees, with gammas rescaled by
    sqrt(d) and the relative variation of every rescaled angle across d.
    """
    if model not in (MODEL_ER, MODEL_DILUTED_P1):
        raise InvalidParameterError(f'Degree sweeps apply to er and diluted-p1, got {model}')
    rows = []
    for d in degrees:
        prediction = predict_angles(model, p, d=d, D=D, **kwargs)
        rows.append({
            'd': d,
            'energy': prediction['energy'],
            'betas': prediction['angles']['betas'],
            'gammas': prediction['angles']['gammas'],
            'rescaled_gammas': prediction['rescaled_gammas'],
        })
    variation = {
        'betas': [relative_variation([row['betas'][j] for row in rows]) for j in range(p)],
        'rescaled_gammas': [relative_variation([row['rescaled_gammas'][j] for row in rows]) for j in range(p)],
    }
    return {'model': model, 'p': p, 'rows': rows, 'relative_variation': variation}


def parse_distribution(text):
    return None if text is None else DegreeDistribution.parse(text)


def two_degree_distribution(q, low=4.0, high=9.0):
    """Chung-Lu mixture low:q, high:1-q; a label with zero probability is dropped."""
    if not 0 <= q <= 1:
        raise InvalidParameterError(f'q must lie in [0, 1], got {q}')
    labels = [(degree, weight) for degree, weight in ((low, q), (high, 1 - q)) if weight > 0]
    return DegreeDistribution(tuple(d for d, _ in labels), tuple(w for _, w in labels))


def predict_q_sweep(p, qs, low=4.0, high=9.0, **kwargs):
    """
    Chung-Lu optimal angles for the mixtures low:q, high:1-q, with gammas
    rescaled by the square root of the mean degree.
    """
    rows = []
    for q in qs:
        dist = two_degree_distribution(q, low, high)
        prediction = predict_angles(MODEL_CHUNG_LU, p, dist=dist, **kwargs)
        rows.append({
            'q': q,
            'mean_degree': dist.mean_degree,
            'energy': prediction['energy'],
            'betas': prediction['angles']['betas'],
            'gammas': prediction['angles']['gammas'],
            'rescaled_gammas': prediction['rescaled_gammas'],
        })
    variation = {
        'betas': [relative_variation([row['betas'][j] for row in rows]) for j in range(p)],
        'rescaled_gammas': [relative_variation([row['rescaled_gammas'][j] for row in rows]) for j in range(p)],
    }
    return {'model': MODEL_CHUNG_LU, 'p': p, 'low': low, 'high': high, 'rows': rows, 'relative_variation': variation}
