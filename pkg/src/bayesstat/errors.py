"""Exception hierarchy shared by every module."""


class BayesStatError(Exception):
    """Base class for library errors."""


class InputError(BayesStatError, ValueError):
    """Malformed or out-of-domain input."""


class UndefinedStateError(BayesStatError):
    """A posterior summary was requested before any stage was observed."""


class CalibrationError(BayesStatError):
    """No candidate on the calibration grid satisfied the requested mode."""


class SingularKernelError(BayesStatError):
    """Cholesky factorization failed even after the largest jitter."""


class BandEmptyError(InputError):
    """A distance band holds no location pairs."""


class ConditioningError(BayesStatError):
    """Conditioning on an event of zero estimated probability."""
