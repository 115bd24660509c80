"""
Level-1 QAOA energies of the diluted and dense D-spin models.

Energies are per vertex (lim E<H>/n). The diluted model has n d / D
interactions on average, so per_interaction() rescales by D / d.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from superapp.apps.qaoa_limits.bitstrings import AngleVector, BitstringTable
from superapp.apps.qaoa_limits.exceptions import InvalidParameterError, ResourceGuardError
from superapp.apps.qaoa_limits.infinite_limit import _real_part

logger = logging.getLogger(__name__)

EXACT_FACTORIAL_LIMIT = 20
MAX_COMPOSITION_ARITY = 12
# p=1 strings with s_2 != s_0
LEVEL_ZERO_STRINGS = (0b001, 0b011, 0b100, 0b110)


@dataclass(frozen=True)
class DSpinConfig:
    D: int
    d: float = None

    def __post_init__(self):
        if int(self.D) != self.D or self.D < 2:
            raise InvalidParameterError(f'Interaction arity D must be an integer >= 2, got {self.D}')
        object.__setattr__(self, 'D', int(self.D))
        if self.d is not None:
            if not math.isfinite(self.d) or self.d <= 0:
                raise InvalidParameterError(f'Degree parameter d must be positive, got {self.d}')
            object.__setattr__(self, 'd', float(self.d))

    def require_degree(self):
        if self.d is None:
            raise InvalidParameterError('The diluted D-spin model needs a degree parameter d')
        return self.d


def compositions(total, parts):
    """Yield every tuple of `parts` non-negative integers summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in compositions(total - head, parts - 1):
            yield (head,) + tail


def multinomial(counts):
    total = sum(counts)
    if total <= EXACT_FACTORIAL_LIMIT:
        result = math.factorial(total)
        for count in counts:
            result //= math.factorial(count)
        return result
    return math.exp(gammaln(total + 1) - sum(gammaln(c + 1) for c in counts))


def _check_angles(beta, gamma):
    if not (math.isfinite(beta) and math.isfinite(gamma)):
        raise InvalidParameterError(f'Angles must be finite, got beta={beta} gamma={gamma}')


def diluted_p1_energy(beta, gamma, cfg, tolerance=None):
    """
    Infinite-size p=1 energy of the diluted D-spin model, summed over the
    8-part compositions of D.

    Args:
        beta: mixer angle
        gamma: cost angle
        cfg: DSpinConfig with d set

    Returns:
        Energy per vertex
    """
    _check_angles(beta, gamma)
    d = cfg.require_degree()
    if cfg.D > MAX_COMPOSITION_ARITY:
        raise ResourceGuardError(f'Composition sum for D={cfg.D} exceeds the supported arity {MAX_COMPOSITION_ARITY}')

    table = BitstringTable.build(AngleVector((beta,), (gamma,)))
    structure = table.structure
    odd = structure.is_odd
    center = structure.bits[:, 1]
    rho = math.exp(-d * (1 - math.cos(gamma)))

    total = 0j
    for counts in compositions(cfg.D, 8):
        counts = np.array(counts)
        sign = (-1) ** int(counts[odd].sum() + counts @ center)
        parity_xor = 0
        for s in np.flatnonzero(counts % 2):
            parity_xor ^= int(s)
        damping = rho ** int(counts[list(LEVEL_ZERO_STRINGS)].sum())
        product = 1 + 0j
        for s in np.flatnonzero(counts):
            product *= complex(table.b[s]) ** int(counts[s])
        total += multinomial(counts.tolist()) * sign * np.exp(1j * table.phi[parity_xor]) * product * damping

    energy = d / (2 ** cfg.D * cfg.D) * total
    return _real_part(energy, f'diluted D-spin energy (D={cfg.D}, d={d})', tolerance)


def diluted_p1_energy_closed_form(beta, gamma, cfg, tolerance=None):
    _check_angles(beta, gamma)
    d = cfg.require_degree()
    rho = math.exp(-d * (1 - math.cos(gamma)))
    plus = complex(math.cos(beta), math.sin(beta) * rho) ** cfg.D
    minus = complex(math.cos(beta), -math.sin(beta) * rho) ** cfg.D
    energy = -1j * d * math.sin(gamma) / (2 * cfg.D) * (plus - minus)
    return _real_part(energy, f'diluted D-spin closed form (D={cfg.D}, d={d})', tolerance)


def dense_p1_energy(beta, gamma, D, tolerance=None):
    """
    Infinite-size p=1 energy of the dense D-spin model with couplings
    N(0, 1) * sqrt((D-1)!) / n^{(D-1)/2} over D-subsets. D=2 is the SK model.
    """
    _check_angles(beta, gamma)
    cfg = DSpinConfig(D)
    kappa = math.exp(-gamma ** 2 / (2 * math.factorial(cfg.D - 1)))
    plus = complex(math.cos(beta), math.sin(beta) * kappa) ** cfg.D
    minus = complex(math.cos(beta), -math.sin(beta) * kappa) ** cfg.D
    energy = -1j * gamma / (2 * math.factorial(cfg.D)) * (plus - minus)
    return _real_part(energy, f'dense D-spin energy (D={cfg.D})', tolerance)


def dense_to_diluted_gamma(gamma, D, d):
    """Diluted-model gamma whose energy approaches the dense one at gamma as d grows."""
    cfg = DSpinConfig(D, d)
    return gamma / math.sqrt(math.factorial(cfg.D - 1) * cfg.d)


def per_interaction(energy_per_vertex, cfg):
    return energy_per_vertex * cfg.D / cfg.require_degree()


def composition_weight_total(D):
    """Sum of multinomial weights over all 8-part compositions of D; equals 8^D."""
    return sum(multinomial(c) for c in compositions(D, 8))
