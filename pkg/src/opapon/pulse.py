"""Parametric amplifier as a pulse source.

With a CW signal and a pump modulated as P(t) = P0 cos^2(omega_m t), the
high-gain output is close to a chirped Gaussian whose width is set by the
curvature of the gain at the pump peak. All quantities are SI here; the
CLI reports the pulse width in ps/ns.
"""

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, GainOverflowError, NumericalError
from .gain import MAX_GAIN_DB, gain_parameter

# fraction of |4 gamma P0| tolerated past the band edges before rejecting
_BAND_SLACK = 1e-12


@dataclass(frozen=True)
class PumpModulation:
    p0: float  # peak pump power, W
    omega_m: float  # modulation angular frequency, rad/s

    def __post_init__(self):
        if not self.p0 > 0:
            raise DomainError(f"peak pump power must be > 0, got {self.p0}")
        if not self.omega_m > 0:
            raise DomainError(f"modulation frequency must be > 0, got {self.omega_m}")

    @classmethod
    def from_frequency(cls, p0, f_m):
        return cls(p0, 2.0 * math.pi * f_m)

    def power(self, t):
        return self.p0 * math.cos(self.omega_m * t) ** 2


@dataclass(frozen=True)
class PulseParams:
    g0: float  # 1/m
    t0: float  # s
    a0: float  # sqrt(W)
    chirp_c: float = 0.0

    def __post_init__(self):
        if self.g0 < 0:
            raise DomainError(f"g0 must be >= 0, got {self.g0}")
        if not self.t0 > 0:
            raise DomainError(f"pulse width must be > 0, got {self.t0}")


def peak_gain_param(delta_beta, gamma, p0):
    """Gain parameter at the pump peak, sqrt(-delta_beta (delta_beta/4 + gamma P0)).

    Raises DomainError outside the gain band [-4 gamma P0, 0].
    """
    edge = -4.0 * gamma * p0
    slack = _BAND_SLACK * abs(edge)
    if delta_beta > slack or delta_beta < edge - slack:
        raise DomainError(
            f"delta_beta = {delta_beta:.6g} 1/m is outside the gain band "
            f"[{edge:.6g}, 0] 1/m"
        )
    _, g_squared = gain_parameter(delta_beta, gamma, p0)
    return math.sqrt(max(g_squared, 0.0))


def pump_curvature(mod):
    """Second time derivative of P0 cos^2(omega_m t) at t = 0, in W/s^2."""
    return -2.0 * mod.p0 * mod.omega_m ** 2


def pulse_width(delta_beta, gamma, mod, length):
    """Pulse width T0 in seconds: sqrt(2 g0 / (delta_beta gamma P0'' L)).

    T0^2 scales as 1/L and T0 as 1/omega_m.
    """
    if not length > 0:
        raise DomainError(f"length must be > 0 m, got {length}")
    if not delta_beta < 0:
        raise DomainError(f"pulse width needs delta_beta < 0, got {delta_beta}")
    g0 = peak_gain_param(delta_beta, gamma, mod.p0)
    curvature = pump_curvature(mod)
    denom = delta_beta * gamma * curvature * length
    radicand = 2.0 * g0 / denom if denom != 0 else math.nan
    if not radicand > 0 or not math.isfinite(radicand):
        signs = ", ".join(
            f"{name} {'+' if v > 0 else '-' if v < 0 else '0'}"
            for name, v in (("g0", g0), ("delta_beta", delta_beta), ("gamma", gamma),
                            ("P0''", curvature), ("L", length))
        )
        raise NumericalError(f"non-positive pulse-width radicand ({signs})")
    return math.sqrt(radicand)


def pulse_amplitude(g0, length):
    """Peak amplitude A0 = exp(g0 L) / g0."""
    if not g0 > 0:
        raise DomainError(f"g0 must be > 0, got {g0}")
    if length < 0:
        raise DomainError(f"length must be >= 0 m, got {length}")
    # power ceiling: 20 log10(A0) <= MAX_GAIN_DB
    level_db = 20.0 * (g0 * length / math.log(10.0) - math.log10(g0))
    if level_db > MAX_GAIN_DB:
        raise GainOverflowError(level_db, g0=g0, length=length)
    return math.exp(g0 * length) / g0


def gaussian_envelope(params, t):
    """Chirped Gaussian A0 exp(-(1 + iC)/2 (t/T0)^2)."""
    x = t / params.t0
    return params.a0 * cmath.exp(-(1.0 + 1j * params.chirp_c) / 2.0 * x * x)


def fwhm(t0):
    """Full width at half maximum of |A|^2 for a Gaussian of width T0."""
    return 2.0 * math.sqrt(math.log(2.0)) * t0


def design_pulse(delta_beta, gamma, mod, length, chirp_c=0.0):
    """Convenience wrapper returning PulseParams for one operating point."""
    g0 = peak_gain_param(delta_beta, gamma, mod.p0)
    t0 = pulse_width(delta_beta, gamma, mod, length)
    return PulseParams(g0=g0, t0=t0, a0=pulse_amplitude(g0, length), chirp_c=chirp_c)
