import logging

import numpy as np

from superapp.apps.qaoa_limits.bitstrings import AngleVector
from superapp.apps.qaoa_limits.exceptions import InvalidParameterError, ResourceGuardError
from superapp.apps.qaoa_limits.reports import rows_to_csv

logger = logging.getLogger(__name__)


def parse_axis(text):
    """Parse "start:stop:num" into a numpy linspace."""
    try:
        start, stop, num = text.split(':')
        num = int(num)
        start, stop = float(start), float(stop)
    except ValueError as e:
        raise InvalidParameterError(f'Grid axis "{text}" must look like start:stop:num: {e}')
    if num < 1:
        raise InvalidParameterError(f'Grid axis "{text}" needs at least one point')
    return np.linspace(start, stop, num)


def landscape(f, base, beta_axis, gamma_axis, layer=0, max_points=1_000_000):
    """
    Evaluate f over a (beta_layer, gamma_layer) grid with the other layers
    held at base. Rows are ordered beta-major, gamma-minor.

    Returns:
        (rows, minimum) where rows are (beta, gamma, energy) tuples and
        minimum is the lowest row
    """
    points = len(beta_axis) * len(gamma_axis)
    if points > max_points:
        raise ResourceGuardError(f'Landscape grid has {points} points; the limit is {max_points}')
    if not 0 <= layer < base.p:
        raise InvalidParameterError(f'Layer {layer} out of range for p={base.p}')

    rows = []
    for beta in beta_axis:
        for gamma in gamma_axis:
            betas, gammas = list(base.betas), list(base.gammas)
            betas[layer], gammas[layer] = float(beta), float(gamma)
            rows.append((float(beta), float(gamma), f(AngleVector(tuple(betas), tuple(gammas)))))
    minimum = min(rows, key=lambda row: row[2])
    logger.info(f'Landscape of {points} points, minimum {minimum[2]:.6f} at beta={minimum[0]:.4f} gamma={minimum[1]:.4f}')
    return rows, minimum


def landscape_csv(rows):
    return rows_to_csv(['beta', 'gamma', 'energy'], rows)
