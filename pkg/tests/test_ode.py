import cmath
import math

import pytest

from opapon.errors import ConfigError, DomainError, IntegrationError
from opapon.gain import signal_gain
from opapon.ode import (
    ADAPTIVE,
    OdeConfig,
    ThreeWaveState,
    gain_oracle,
    propagate,
    undepleted_pump,
)

GAMMA = 0.015  # 1/(W m)


def test_no_coupling_leaves_amplitudes_unchanged():
    start = ThreeWaveState(1.0 + 0.5j, 0.1j, 0.02)
    end = propagate(start, 0.0, -0.03, 1234.0)
    assert (end.a_p, end.a_s, end.a_i) == (start.a_p, start.a_s, start.a_i)
    assert end.z == 1234.0


def test_pump_alone_matches_spm_solution():
    p, L = 1.3, 400.0
    end = propagate(ThreeWaveState(math.sqrt(p), 0, 0), GAMMA, -0.02, L)
    assert abs(end.a_p) == pytest.approx(math.sqrt(p), rel=1e-12)
    phase = cmath.phase(end.a_p / math.sqrt(p))
    expected = math.remainder(GAMMA * p * L, 2 * math.pi)
    assert phase == pytest.approx(expected, abs=1e-9)
    assert end.a_p == pytest.approx(undepleted_pump(p, GAMMA, L), abs=1e-9)


def test_kappa_zero_gain_matches_closed_form():
    g_ode = gain_oracle(1.0, 1e-8, GAMMA, -2 * GAMMA, 200.0)
    g_exact = signal_gain(-2 * GAMMA, GAMMA, 1.0, 200.0).gain_linear
    assert g_exact == pytest.approx(101.3578, rel=1e-6)
    assert g_ode == pytest.approx(g_exact, rel=0.01)


def test_depletion_lowers_gain():
    tight = OdeConfig(step=200.0 / 16384)
    g_small = gain_oracle(1.0, 0.1, GAMMA, -2 * GAMMA, 200.0, tight)
    g_exact = signal_gain(-2 * GAMMA, GAMMA, 1.0, 200.0).gain_linear
    assert g_small < g_exact


def test_zero_length_gain_is_one():
    assert gain_oracle(1.0, 1e-8, GAMMA, -0.01, 0.0) == 1.0


def test_adaptive_agrees_with_rk4():
    args = (1.0, 1e-8, GAMMA, -GAMMA, 300.0)
    fixed = gain_oracle(*args)
    adaptive = gain_oracle(*args, OdeConfig(method=ADAPTIVE, rtol=1e-11))
    assert adaptive == pytest.approx(fixed, rel=1e-7)


def test_phase_covariance():
    start = ThreeWaveState(1.0, 0.2 + 0.1j, 0.05j)
    phi = 0.7
    a = propagate(start, GAMMA, -0.02, 250.0).rotated(phi)
    b = propagate(start.rotated(phi), GAMMA, -0.02, 250.0)
    for x, y in ((a.a_p, b.a_p), (a.a_s, b.a_s), (a.a_i, b.a_i)):
        assert abs(x - y) <= 1e-9


def test_power_conserved_with_strong_seeds():
    start = ThreeWaveState(1.0, 0.5, 0.3j)
    end = propagate(start, GAMMA, -0.025, 500.0)
    assert end.total_power == pytest.approx(start.total_power, rel=1e-6)


def test_deterministic():
    start = ThreeWaveState(1.0, 1e-4, 0.0)
    a = propagate(start, GAMMA, -0.02, 300.0)
    b = propagate(start, GAMMA, -0.02, 300.0)
    assert a == b


def test_step_exhaustion_reports_position():
    with pytest.raises(IntegrationError) as info:
        propagate(ThreeWaveState(1, 1e-4, 0), GAMMA, 0.0, 100.0,
                  OdeConfig(step=1.0, max_steps=10))
    assert info.value.z_reached == pytest.approx(10.0)
    with pytest.raises(IntegrationError):
        propagate(ThreeWaveState(1, 1e-4, 0), GAMMA, 0.0, 100.0,
                  OdeConfig(method=ADAPTIVE, max_steps=2))


@pytest.mark.parametrize("kw", [dict(method="euler"), dict(step=0.0), dict(rtol=0.0),
                                dict(max_steps=0)])
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        OdeConfig(**kw)


def test_domain_checks():
    with pytest.raises(DomainError):
        propagate(ThreeWaveState(1, 0, 0), GAMMA, 0, -1)
    with pytest.raises(DomainError):
        gain_oracle(1.0, 0.0, GAMMA, 0, 10)
