"""Numerical integration of the three-wave pump/signal/idler equations.

This is the independent check on the closed-form gain in ``opapon.gain``:
it keeps pump depletion, self- and cross-phase modulation, and makes no
small-signal assumption. The four-wave-mixing terms couple each sideband
to the conjugate of its partner, which is what conserves total power.

Units: amplitudes in sqrt(W), gamma in W^-1 m^-1, z and length in m.
"""

import cmath
import math
from dataclasses import dataclass

from .errors import ConfigError, DomainError, IntegrationError

RK4 = "rk4"
ADAPTIVE = "adaptive"

DEFAULT_STEPS = 4096


@dataclass(frozen=True)
class ThreeWaveState:
    a_p: complex
    a_s: complex
    a_i: complex
    z: float = 0.0

    @property
    def powers(self):
        return abs(self.a_p) ** 2, abs(self.a_s) ** 2, abs(self.a_i) ** 2

    @property
    def total_power(self):
        return sum(self.powers)

    def rotated(self, phase):
        """Multiply every amplitude by exp(i phase)."""
        r = cmath.exp(1j * phase)
        return ThreeWaveState(self.a_p * r, self.a_s * r, self.a_i * r, self.z)


@dataclass(frozen=True)
class OdeConfig:
    """Integrator settings.

    ``step`` is the fixed RK4 step in m; None means length / 4096.
    ``rtol``/``atol`` apply to the adaptive Dormand-Prince 5(4) pair.
    """

    method: str = RK4
    step: float | None = None
    rtol: float = 1e-10
    atol: float = 1e-14
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.method not in (RK4, ADAPTIVE):
            raise ConfigError(f"unknown ODE method {self.method!r}")
        if self.step is not None and not self.step > 0:
            raise ConfigError(f"ODE step must be > 0, got {self.step}")
        if not (self.rtol > 0 and self.atol > 0):
            raise ConfigError("ODE tolerances must be > 0")
        if int(self.max_steps) < 1:
            raise ConfigError(f"max_steps must be >= 1, got {self.max_steps}")


def _rhs(z, ap, as_, ai, gamma, delta_beta):
    pp = (ap * ap.conjugate()).real
    ps = (as_ * as_.conjugate()).real
    pi = (ai * ai.conjugate()).real
    ph = cmath.exp(1j * delta_beta * z)
    ig = 1j * gamma
    dap = ig * ((pp + 2.0 * (ps + pi)) * ap + 2.0 * as_ * ai * ap.conjugate() * ph)
    pump_sq = ap * ap * ph.conjugate()
    das = ig * ((ps + 2.0 * (pp + pi)) * as_ + ai.conjugate() * pump_sq)
    dai = ig * ((pi + 2.0 * (pp + ps)) * ai + as_.conjugate() * pump_sq)
    return dap, das, dai


def _rk4(y, z0, length, gamma, delta_beta, cfg):
    h_nominal = cfg.step if cfg.step is not None else length / DEFAULT_STEPS
    n = max(1, math.ceil(length / h_nominal - 1e-9))
    h = length / n
    ap, as_, ai = y
    steps = min(n, int(cfg.max_steps))
    for j in range(steps):
        z = z0 + j * h
        k1 = _rhs(z, ap, as_, ai, gamma, delta_beta)
        k2 = _rhs(z + h / 2, ap + h / 2 * k1[0], as_ + h / 2 * k1[1], ai + h / 2 * k1[2],
                  gamma, delta_beta)
        k3 = _rhs(z + h / 2, ap + h / 2 * k2[0], as_ + h / 2 * k2[1], ai + h / 2 * k2[2],
                  gamma, delta_beta)
        k4 = _rhs(z + h, ap + h * k3[0], as_ + h * k3[1], ai + h * k3[2],
                  gamma, delta_beta)
        ap = ap + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        as_ = as_ + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        ai = ai + h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
    if steps < n:
        raise IntegrationError(
            f"fixed-step RK4 needs {n} steps but max_steps = {cfg.max_steps}",
            z0 + steps * h,
        )
    return ap, as_, ai


# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


def _dopri(y, z0, length, gamma, delta_beta, cfg):
    z_end = z0 + length
    z = z0
    y = list(y)
    scale = max(abs(gamma) * sum(abs(v) ** 2 for v in y), abs(delta_beta), 1e-300)
    h = min(length, 0.01 / scale)
    accepted = 0
    while z < z_end:
        if accepted >= cfg.max_steps:
            raise IntegrationError(f"adaptive integrator exhausted {cfg.max_steps} steps", z)
        h = min(h, z_end - z)
        ks = []
        for stage in range(7):
            yi = [
                y[m] + h * sum(a * ks[j][m] for j, a in enumerate(_DP_A[stage]))
                for m in range(3)
            ]
            ks.append(_rhs(z + _DP_C[stage] * h, *yi, gamma, delta_beta))
        y5 = [y[m] + h * sum(b * k[m] for b, k in zip(_DP_B5, ks)) for m in range(3)]
        y4 = [y[m] + h * sum(b * k[m] for b, k in zip(_DP_B4, ks)) for m in range(3)]
        err = max(
            abs(y5[m] - y4[m]) / (cfg.atol + cfg.rtol * max(abs(y[m]), abs(y5[m])))
            for m in range(3)
        )
        if err <= 1.0:
            z = z_end if z_end - z <= h else z + h
            y = y5
            accepted += 1
        factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h *= factor
        if h < 1e-15 * max(1.0, abs(z)):
            raise IntegrationError("adaptive step size underflow", z)
    return tuple(y)


def propagate(initial, gamma, delta_beta, length, config=None):
    """Integrate the three coupled amplitude equations from ``initial.z``
    over ``length`` metres and return the final state."""
    if length < 0:
        raise DomainError(f"length must be >= 0 m, got {length}")
    cfg = config or OdeConfig()
    y = (complex(initial.a_p), complex(initial.a_s), complex(initial.a_i))
    if length == 0:
        return ThreeWaveState(*y, z=initial.z)
    if cfg.method == RK4:
        out = _rk4(y, initial.z, length, gamma, delta_beta, cfg)
    else:
        out = _dopri(y, initial.z, length, gamma, delta_beta, cfg)
    return ThreeWaveState(*out, z=initial.z + length)


def gain_oracle(p_pump, p_signal0, gamma, delta_beta, length, config=None):
    """Signal gain |A_s(L)|^2 / P_s(0) from direct integration.

    The idler starts empty and all seeds have zero phase.
    """
    if p_signal0 <= 0:
        raise DomainError(f"seed signal power must be > 0, got {p_signal0}")
    if p_pump < 0:
        raise DomainError(f"pump power must be >= 0, got {p_pump}")
    start = ThreeWaveState(math.sqrt(p_pump), math.sqrt(p_signal0), 0.0)
    end = propagate(start, gamma, delta_beta, length, config)
    return abs(end.a_s) ** 2 / p_signal0


def undepleted_pump(p_pump, gamma, z):
    """Pump amplitude with only self-phase modulation: sqrt(P) exp(i gamma P z)."""
    return math.sqrt(p_pump) * cmath.exp(1j * gamma * p_pump * z)
