import copy
import os

from deepmerge import always_merger
from django.core.exceptions import ImproperlyConfigured

THREADS_ENV_VAR = 'QAOA_LIMITS_THREADS'

DEFAULT_QAOA_LIMITS = {
    'THREADS': None,
    'SCHEMA_VERSION': 1,
    'LIMITS': {
        'MAX_P_INFINITE': 6,
        'MAX_SIMULATOR_QUBITS': 26,
        'MAX_EXPERIMENT_QUBITS': 20,
        'MAX_EXACT_SK_N': 2048,
        'MAX_LANDSCAPE_POINTS': 1_000_000,
        'MAX_MC_P_WITHOUT_FORCE': 3,
    },
    'OPTIMIZER': {
        'BUDGET': 1000,
        'XATOL': 1e-8,
        'FATOL': 1e-12,
        'RESTARTS': 20,
    },
    'MONTE_CARLO': {
        'SAMPLES': 1000,
    },
    'TOLERANCES': {
        'IMAG_RESIDUE': 1e-8,
    },
}


def extend_superapp_settings(main_settings):
    main_settings['INSTALLED_APPS'] = [
        'superapp.apps.qaoa_limits',
    ] + main_settings.get('INSTALLED_APPS', [])

    main_settings.update(
        always_merger.merge(
            {
                'QAOA_LIMITS': copy.deepcopy(DEFAULT_QAOA_LIMITS),
            },
            main_settings,
        )
    )


def qaoa_settings():
    """
    Return the effective QAOA_LIMITS configuration.

    Project settings are merged over the defaults, so a project only needs to
    declare the keys it changes.

    Returns:
        dict with the same layout as DEFAULT_QAOA_LIMITS

    Raises:
        ImproperlyConfigured: if a limit or tolerance is out of range
    """
    from django.conf import settings

    merged = always_merger.merge(
        copy.deepcopy(DEFAULT_QAOA_LIMITS),
        copy.deepcopy(getattr(settings, 'QAOA_LIMITS', {})),
    )
    _validate(merged)
    return merged


def _validate(config):
    for key, value in config['LIMITS'].items():
        if not isinstance(value, int) or value < 1:
            raise ImproperlyConfigured(f'QAOA_LIMITS.LIMITS.{key} must be a positive integer, got {value!r}')
    optimizer = config['OPTIMIZER']
    if optimizer['BUDGET'] < 1 or optimizer['RESTARTS'] < 1:
        raise ImproperlyConfigured('QAOA_LIMITS.OPTIMIZER budget and restarts must be >= 1')
    if optimizer['XATOL'] <= 0 or optimizer['FATOL'] <= 0:
        raise ImproperlyConfigured('QAOA_LIMITS.OPTIMIZER tolerances must be positive')
    if config['MONTE_CARLO']['SAMPLES'] < 2:
        raise ImproperlyConfigured('QAOA_LIMITS.MONTE_CARLO.SAMPLES must be >= 2')
    if config['TOLERANCES']['IMAG_RESIDUE'] <= 0:
        raise ImproperlyConfigured('QAOA_LIMITS.TOLERANCES.IMAG_RESIDUE must be positive')
    threads = config['THREADS']
    if threads is not None and (not isinstance(threads, int) or threads < 1):
        raise ImproperlyConfigured(f'QAOA_LIMITS.THREADS must be a positive integer or None, got {threads!r}')


def resolve_threads(requested=None):
    """
    Worker count for parallel loops: explicit flag, then the
    QAOA_LIMITS_THREADS environment variable, then settings, then the
    number of available cores.
    """
    if requested is not None:
        if requested < 1:
            raise ImproperlyConfigured(f'--threads must be >= 1, got {requested}')
        return requested

    from_env = os.environ.get(THREADS_ENV_VAR)
    if from_env:
        try:
            threads = int(from_env)
        except ValueError:
            raise ImproperlyConfigured(f'{THREADS_ENV_VAR} must be an integer, got {from_env!r}')
        if threads < 1:
            raise ImproperlyConfigured(f'{THREADS_ENV_VAR} must be >= 1, got {threads}')
        return threads

    configured = qaoa_settings()['THREADS']
    if configured is not None:
        return configured
    return os.cpu_count() or 1
