import pytest

from superapp.apps.qaoa_limits.bitstrings import AngleVector

# Optimal infinite-size SK angles (this package's sign and half-angle convention)
SK_OPTIMA = {
    1: (AngleVector((-0.785398,), (1.0,)), -0.303265),
    2: (AngleVector((-0.99193, -0.53808), (0.76349, 1.33100)), -0.407545),
    3: (AngleVector((-1.09995, -0.73504, -0.42175), (0.65938, 1.13759, 1.28119)), -0.472619),
    4: (AngleVector((-1.1420, -0.8352, -0.6056, -0.3458), (0.5898, 1.0288, 1.1172, 1.2858)), -0.515679),
}


@pytest.fixture(scope='session')
def sk_optimum():
    """p -> (optimal SK angles, infinite-size energy per vertex)."""
    return SK_OPTIMA.__getitem__
