"""Analytic single-pump parametric gain in the undepleted-pump limit.

Conventions: ``delta_beta`` is the linear phase mismatch in 1/m, ``gamma``
is in W^-1 m^-1 and ``length`` in m unless a function says otherwise.
The gain band is ``-4 gamma P < delta_beta < 0``; perfect phase matching
(total mismatch kappa = 0) sits at ``delta_beta = -2 gamma P``.
"""

import math
from dataclasses import dataclass

from .core import DISP_SLOPE_TO_SI, SPEED_OF_LIGHT, effective_length, um
from .errors import DomainError, GainOverflowError

MAX_GAIN_DB = 300.0

HYPERBOLIC = "hyperbolic"
DEGENERATE = "degenerate"
OSCILLATORY = "oscillatory"

# |g^2| below this fraction of (gamma P)^2 counts as exactly degenerate
_DEGENERATE_RTOL = 64 * 2.220446049250313e-16

_LN10 = math.log(10.0)


@dataclass(frozen=True)
class PhaseMatchInput:
    lambda0: float  # um
    lambda_p: float  # um
    lambda_s: float  # um
    disp_slope: float  # ps/(nm^2 km)

    def __post_init__(self):
        for name in ("lambda0", "lambda_p", "lambda_s"):
            value = getattr(self, name)
            if not 1.0 < value < 2.0:
                raise DomainError(f"{name} = {value} um is outside (1.0, 2.0) um")
        if self.disp_slope <= 0:
            raise DomainError(f"disp_slope must be > 0, got {self.disp_slope}")


@dataclass(frozen=True)
class GainBreakdown:
    delta_beta: float  # 1/m
    k: float  # 1/m
    g_squared: float  # 1/m^2
    regime: str
    gain_linear: float
    gain_db: float

    def to_dict(self):
        return {
            "delta_beta": self.delta_beta,
            "k": self.k,
            "g_squared": self.g_squared,
            "regime": self.regime,
            "gain_linear": self.gain_linear,
            "gain_db": self.gain_db,
        }


def phase_mismatch(pm):
    """Linear phase mismatch (1/m) from the dispersion slope around lambda0.

    ``-(2 pi c / lambda0^2) S (lambda_p - lambda0) (lambda_p - lambda_s)^2``
    """
    l0 = pm.lambda0 * um
    lp = pm.lambda_p * um
    ls = pm.lambda_s * um
    slope = pm.disp_slope * DISP_SLOPE_TO_SI
    return -(2.0 * math.pi * SPEED_OF_LIGHT / l0 ** 2) * slope * (lp - l0) * (lp - ls) ** 2


def phase_matched_delta_beta(gamma, p_pump):
    """The linear mismatch that cancels the nonlinear phase shift (kappa = 0)."""
    return -2.0 * gamma * p_pump


def gain_parameter(delta_beta, gamma, p_pump):
    """Return ``(k, g_squared)``.

    k = delta_beta + 2 gamma P is the total phase mismatch. g^2 is evaluated
    in the factored form -delta_beta (delta_beta/4 + gamma P), which is
    algebraically identical to (gamma P)^2 - k^2/4 but returns exact zeros at
    both band edges.
    """
    if gamma < 0:
        raise DomainError(f"gamma must be >= 0, got {gamma}")
    if p_pump < 0:
        raise DomainError(f"pump power must be >= 0, got {p_pump}")
    k = delta_beta + 2.0 * gamma * p_pump
    g_squared = -delta_beta * (delta_beta / 4.0 + gamma * p_pump)
    return k, g_squared


def classify(g_squared, gamma, p_pump):
    scale = (gamma * p_pump) ** 2
    if abs(g_squared) <= _DEGENERATE_RTOL * scale:
        return DEGENERATE
    return HYPERBOLIC if g_squared > 0 else OSCILLATORY


def _log_sinh(x):
    # log(sinh(x)) for x > 0 without overflow
    if x < 20.0:
        return math.log(math.sinh(x))
    return x - math.log(2.0) + math.log1p(-math.exp(-2.0 * x))


def signal_gain(delta_beta, gamma, p_pump, length):
    """Signal power gain G = 1 + (gamma P h)^2 for every phase-matching regime.

    h is sinh(gL)/g when g^2 > 0, L when g^2 = 0 and sin(|g|L)/|g| when
    g^2 < 0. Raises GainOverflowError above ``MAX_GAIN_DB``.
    """
    if length < 0:
        raise DomainError(f"length must be >= 0 m, got {length}")
    k, g_squared = gain_parameter(delta_beta, gamma, p_pump)
    regime = classify(g_squared, gamma, p_pump)
    gp = gamma * p_pump

    if regime == HYPERBOLIC:
        g = math.sqrt(g_squared)
        gl = g * length
        if gl > 1.0 and gp > 0.0:
            # (gamma P h)^2 >= G - 1; check the ceiling in log space first
            log10_term = 2.0 * (math.log(gp) + _log_sinh(gl) - math.log(g)) / _LN10
            if 10.0 * log10_term > MAX_GAIN_DB:
                raise GainOverflowError(
                    10.0 * log10_term,
                    delta_beta=delta_beta, gamma=gamma, p_pump=p_pump, length=length,
                )
        h = math.sinh(gl) / g if gl != 0.0 else length
    elif regime == DEGENERATE:
        h = length
    else:
        g = math.sqrt(-g_squared)
        h = math.sin(g * length) / g

    gain = 1.0 + (gp * h) ** 2
    gain_db = 10.0 * math.log10(gain) if math.isfinite(gain) else math.inf
    if gain_db > MAX_GAIN_DB:
        raise GainOverflowError(
            gain_db, delta_beta=delta_beta, gamma=gamma, p_pump=p_pump, length=length
        )
    return GainBreakdown(
        delta_beta=delta_beta,
        k=k,
        g_squared=g_squared,
        regime=regime,
        gain_linear=gain,
        gain_db=gain_db,
    )


def gain_series(delta_beta, gamma, p_pump, length, terms):
    """Gain from the truncated Maclaurin series of sinh(gL)/(gL).

    G = 1 + (gamma P L)^2 [sum_{n<terms} (g^2 L^2)^n / (2n+1)!]^2. With
    g^2 < 0 the series alternates and converges to the oscillatory form.
    """
    if terms < 1:
        raise DomainError(f"terms must be >= 1, got {terms}")
    _, g_squared = gain_parameter(delta_beta, gamma, p_pump)
    x = g_squared * length ** 2
    bracket = 0.0
    term = 1.0
    for n in range(int(terms)):
        bracket += term
        term *= x / ((2 * n + 2) * (2 * n + 3))
    return 1.0 + (gamma * p_pump * length) ** 2 * bracket ** 2


def high_gain_approx(gamma, p_pump, length):
    """Perfect-phase-matching, high-gain limit G ~ exp(2 gamma P L) / 4.

    Only meaningful for gamma P L >> 1; at gamma P L = 0 it returns 0.25.
    """
    if gamma < 0 or p_pump < 0 or length < 0:
        raise DomainError("gamma, pump power and length must be >= 0")
    exponent = 2.0 * gamma * p_pump * length
    gain_db = 10.0 * (exponent / _LN10 - math.log10(4.0))
    if gain_db > MAX_GAIN_DB:
        raise GainOverflowError(gain_db, gamma=gamma, p_pump=p_pump, length=length)
    return 0.25 * math.exp(exponent)


# 10 log10(1/4); commonly rounded to -6 dB
HIGH_GAIN_OFFSET_DB = -10.0 * math.log10(4.0)


def gain_db_slope_form(p_pump, length, s_p, *, alpha_db=None, rounded_offset=False):
    """High-gain gain in dB from the parametric gain slope: P L S_p + offset.

    Args:
        p_pump: pump power in W.
        length: fiber length in km.
        s_p: parametric gain slope in dB/(W km).
        alpha_db: if given, ``length`` is replaced by the effective length
            of a fiber with this attenuation (dB/km).
        rounded_offset: use the rounded -6 dB offset instead of the exact
            10 log10(1/4) = -6.0206 dB.

    Small P L S_p gives negative dB values; this is an artifact of the
    high-gain approximation and is not clamped.
    """
    if p_pump <= 0 or length <= 0 or s_p <= 0:
        raise DomainError("pump power, length and gain slope must all be > 0")
    if alpha_db is not None:
        length = effective_length(alpha_db, length)
    offset = -6.0 if rounded_offset else HIGH_GAIN_OFFSET_DB
    return p_pump * length * s_p + offset
