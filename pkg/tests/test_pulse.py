import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

import oracles
from opapon.errors import DomainError, GainOverflowError, NumericalError
from opapon.gain import gain_parameter
from opapon.pulse import (
    PulseParams,
    PumpModulation,
    design_pulse,
    fwhm,
    gaussian_envelope,
    peak_gain_param,
    pulse_amplitude,
    pulse_width,
    pump_curvature,
)

GAMMA = 0.015
MOD = PumpModulation.from_frequency(1.0, 10e9)

# tests/oracles.py, 50 digits
T0_DESK = 4.1093629604099987e-12
CURVATURE_10GHZ = -7.8956835208714869e21
A0_EXAMPLE = 120536.16096373755


def test_peak_gain_param_examples():
    assert peak_gain_param(0.0, GAMMA, 1.0) == 0.0
    assert peak_gain_param(-2 * GAMMA, GAMMA, 1.0) == pytest.approx(GAMMA, rel=1e-15)
    assert peak_gain_param(-4 * GAMMA, GAMMA, 1.0) == 0.0


@pytest.mark.parametrize("db", [0.001, -4.01 * GAMMA])
def test_peak_gain_param_outside_band(db):
    with pytest.raises(DomainError, match="gain band"):
        peak_gain_param(db, GAMMA, 1.0)


@given(st.floats(-4 * GAMMA, 0.0), st.floats(0.1, 2.0))
def test_peak_gain_param_single_source_of_truth(db, p0):
    db = db * p0
    _, g2 = gain_parameter(db, GAMMA, p0)
    g0 = peak_gain_param(db, GAMMA, p0)
    assert g0 == pytest.approx(math.sqrt(max(g2, 0.0)), rel=1e-12, abs=1e-300)


def test_pump_curvature_value_and_finite_difference():
    assert pump_curvature(MOD) == pytest.approx(CURVATURE_10GHZ, rel=1e-14)
    dt = 1e-15
    fd = (MOD.power(dt) - 2 * MOD.power(0.0) + MOD.power(-dt)) / dt ** 2
    assert fd == pytest.approx(pump_curvature(MOD), rel=1e-3)


def test_pump_curvature_scaling():
    double = PumpModulation(1.0, 2 * MOD.omega_m)
    assert pump_curvature(double) == pytest.approx(4 * pump_curvature(MOD), rel=1e-15)
    assert pump_curvature(PumpModulation(0.3, 1.0)) < 0


def test_pulse_width_desk_example():
    ref = oracles.pulse_width(-2 * GAMMA, GAMMA, 1, 10e9, 500)
    assert float(ref) == pytest.approx(T0_DESK, rel=1e-15)
    t0 = pulse_width(-2 * GAMMA, GAMMA, MOD, 500.0)
    assert t0 == pytest.approx(T0_DESK, rel=1e-12)
    assert t0 == pytest.approx(4.11e-12, rel=0.005)


def test_pulse_width_inverse_length():
    t1 = pulse_width(-2 * GAMMA, GAMMA, MOD, 250.0)
    t2 = pulse_width(-2 * GAMMA, GAMMA, MOD, 500.0)
    assert (t2 / t1) ** 2 == pytest.approx(0.5, rel=1e-9)


def test_pulse_width_power_laws():
    lengths = np.logspace(2, 3, 11)
    t = [pulse_width(-2 * GAMMA, GAMMA, MOD, L) for L in lengths]
    slope, intercept = np.polyfit(np.log(lengths), np.log(t), 1)
    resid = np.log(t) - (slope * np.log(lengths) + intercept)
    assert slope == pytest.approx(-0.5, abs=1e-9)
    assert np.max(np.abs(resid)) < 1e-9

    omegas = np.logspace(10, 11, 11)
    t = [pulse_width(-2 * GAMMA, GAMMA, PumpModulation(1.0, w), 500.0) for w in omegas]
    slope, intercept = np.polyfit(np.log(omegas), np.log(t), 1)
    resid = np.log(t) - (slope * np.log(omegas) + intercept)
    assert slope == pytest.approx(-1.0, abs=1e-9)
    assert np.max(np.abs(resid)) < 1e-9


def test_pulse_width_diverges_near_zero_mismatch():
    # g0 ~ sqrt(|db|) there, so T0 ~ |db|^(-1/4)
    mismatch = np.array([1e-6, 1e-8, 1e-10, 1e-12])
    widths = [pulse_width(-d, GAMMA, MOD, 500.0) for d in mismatch]
    assert all(a < b for a, b in zip(widths, widths[1:]))
    slope = np.polyfit(np.log(mismatch), np.log(widths), 1)[0]
    assert slope == pytest.approx(-0.25, abs=1e-3)


def test_pulse_width_errors():
    with pytest.raises(DomainError):
        pulse_width(0.0, GAMMA, MOD, 500.0)
    with pytest.raises(DomainError):
        pulse_width(-0.01, GAMMA, MOD, 0.0)
    with pytest.raises(NumericalError, match="radicand"):
        pulse_width(-4 * GAMMA, GAMMA, MOD, 500.0)


def test_pulse_amplitude():
    assert pulse_amplitude(1.0, 0.0) == 1.0
    assert pulse_amplitude(0.015, 500.0) == pytest.approx(A0_EXAMPLE, rel=1e-12)
    a = [pulse_amplitude(0.015, L) for L in (10, 100, 1000)]
    assert a == sorted(a)
    with pytest.raises(GainOverflowError):
        pulse_amplitude(0.015, 1e5)
    with pytest.raises(DomainError):
        pulse_amplitude(0.0, 10.0)


def test_envelope_basics():
    p = PulseParams(g0=0.015, t0=4e-12, a0=2.0, chirp_c=3.0)
    assert gaussian_envelope(p, 0.0) == 2.0
    assert abs(gaussian_envelope(p, p.t0)) == pytest.approx(2.0 * math.exp(-0.5), rel=1e-15)
    for t in (1e-13, 2e-12, 7e-12):
        a, b = gaussian_envelope(p, t), gaussian_envelope(p, -t)
        assert abs(a) == pytest.approx(abs(b), rel=1e-15)
        assert a == pytest.approx(b, rel=1e-15)


def test_fwhm_by_bisection():
    p = PulseParams(g0=0.015, t0=4e-12, a0=1.0, chirp_c=-1.5)
    half = brentq(lambda t: abs(gaussian_envelope(p, t)) ** 2 - 0.5, 0.0, 10 * p.t0, xtol=1e-30)
    assert 2 * half == pytest.approx(fwhm(p.t0), rel=1e-10)
    assert fwhm(1.0) == pytest.approx(2 * math.sqrt(math.log(2)), rel=1e-15)


def test_design_pulse():
    p = design_pulse(-2 * GAMMA, GAMMA, MOD, 500.0)
    assert p.g0 == pytest.approx(GAMMA)
    assert p.t0 == pytest.approx(T0_DESK, rel=1e-12)
    assert p.a0 == pytest.approx(A0_EXAMPLE, rel=1e-12)


def test_modulation_validation():
    with pytest.raises(DomainError):
        PumpModulation(0.0, 1.0)
    with pytest.raises(DomainError):
        PumpModulation(1.0, 0.0)
