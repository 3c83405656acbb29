"""Exception types shared by every module.

The CLI maps these onto exit codes, so new failure modes should subclass
one of them rather than raising bare ``ValueError``.
"""


class OpaponError(Exception):
    """Base class for all package errors."""


class DomainError(OpaponError, ValueError):
    """An input lies outside the domain of a model equation."""


class ConfigError(OpaponError, ValueError):
    """A configuration, preset or sweep request is invalid."""


class NumericalError(OpaponError, ArithmeticError):
    """A computation could not produce a finite, physical result."""


class GainOverflowError(NumericalError, OverflowError):
    """Gain would exceed the physical ceiling (see ``MAX_GAIN_DB``)."""

    def __init__(self, gain_db, **inputs):
        self.gain_db = gain_db
        self.inputs = inputs
        detail = ", ".join(f"{k}={v:.6g}" for k, v in inputs.items())
        super().__init__(
            f"gain of {gain_db:.1f} dB exceeds the 300 dB ceiling; "
            f"unphysical input ({detail})"
        )


class IntegrationError(NumericalError):
    """ODE integration stopped before reaching the requested length."""

    def __init__(self, message, z_reached):
        self.z_reached = z_reached
        super().__init__(f"{message} (reached z = {z_reached:.6g} m)")
