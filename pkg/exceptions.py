class QaoaLimitsError(Exception):
    """Base class for every error raised by the qaoa_limits app."""

    exit_code = 1


class InvalidParameterError(QaoaLimitsError, ValueError):
    exit_code = 2


class NumericalConsistencyError(QaoaLimitsError, ArithmeticError):
    """A computed quantity violated a structural guarantee (e.g. a residual
    imaginary part on a real energy)."""

    exit_code = 3


class SamplerDegenerationError(NumericalConsistencyError):
    pass


class ResourceGuardError(QaoaLimitsError):
    exit_code = 4
