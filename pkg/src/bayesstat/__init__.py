"""Recursive Bayesian characterization of stochastic processes.

Stationarity detection for time series, spatial and space-time data,
MCMC convergence diagnosis, point-process characterization and
oscillation-frequency recovery, all driven by stage-wise conjugate
posterior recursions.
"""

__version__ = "0.1.0"

from .errors import (
    BayesStatError,
    InputError,
    UndefinedStateError,
    CalibrationError,
    SingularKernelError,
)

__all__ = [
    "__version__",
    "BayesStatError",
    "InputError",
    "UndefinedStateError",
    "CalibrationError",
    "SingularKernelError",
]
