"""Fiber optical parametric amplifiers in hybrid WDM/TDM passive optical networks.

Closed-form OPA gain and pulse-source models, a coupled-wave ODE oracle
for the gain, PON capacity/delay/bit-rate figures of merit, and a sweep
engine that tabulates all of them.
"""

__version__ = "0.1.0"

from .core import FiberProfile, table1_profile  # noqa: E402
from .errors import (  # noqa: E402
    ConfigError,
    DomainError,
    GainOverflowError,
    IntegrationError,
    NumericalError,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "FiberProfile",
    "GainOverflowError",
    "IntegrationError",
    "NumericalError",
    "table1_profile",
]
