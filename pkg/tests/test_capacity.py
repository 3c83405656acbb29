import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from opapon.capacity import (
    PonConfig,
    RangeWarning,
    SpectralPlan,
    bandwidth_per_user,
    channel_spacing,
    check_ranges,
    mtdm_bit_rate_channel,
    mtdm_bit_rate_core,
    mtdm_bit_rate_link,
    network_delay,
    service_window,
)
from opapon.errors import ConfigError, DomainError

T0_DESK_NS = 4.1093629604099987e-3


def test_bandwidth_examples():
    assert bandwidth_per_user(PonConfig(t_laser=0.0)) == pytest.approx(0.15625, rel=1e-15)
    cfg = PonConfig()
    assert bandwidth_per_user(cfg) == pytest.approx(0.125, rel=1e-15)
    assert bandwidth_per_user(cfg) == pytest.approx(
        cfg.data_rate_d * cfg.slot_t / service_window(cfg), rel=1e-15)


def test_bandwidth_increases_with_slot():
    slots = [10e-6, 50e-6, 100e-6, 1e-3]
    bw = [bandwidth_per_user(PonConfig(slot_t=s)) for s in slots]
    assert bw == sorted(bw) and len(set(bw)) == len(bw)


def test_bandwidth_decreases_with_switching_time():
    bw = [bandwidth_per_user(PonConfig(t_laser=t)) for t in (0, 5e-6, 25e-6, 1e-4)]
    assert all(a > b for a, b in zip(bw, bw[1:]))


def test_bandwidth_zero_denominator():
    with pytest.raises(DomainError):
        bandwidth_per_user(PonConfig(slot_t=0.0, t_laser=0.0))


def test_service_window_examples():
    assert service_window(PonConfig()) == pytest.approx(2e-3, rel=1e-15)
    cfg = PonConfig(k_lasers=256, t_laser=0.0)
    assert service_window(cfg) == cfg.slot_t


def test_network_delay_examples():
    assert network_delay(PonConfig(utilization_rho=0.0)) == 0.0
    assert network_delay(PonConfig()) == pytest.approx(12.8e-3, rel=1e-15)
    assert network_delay(PonConfig(utilization_rho=0.8)) == pytest.approx(
        2 * network_delay(PonConfig(utilization_rho=0.4)), rel=1e-15)


@pytest.mark.parametrize("field, values", [
    ("utilization_rho", (0.1, 0.5, 0.9)),
    ("w_users", (16, 128, 256)),
    ("t_tx", (10e-6, 100e-6, 1e-3)),
    ("t_laser", (0.0, 25e-6, 100e-6)),
])
def test_delay_strictly_increasing(field, values):
    delays = [network_delay(PonConfig(**{field: v})) for v in values]
    assert all(a < b for a, b in zip(delays, delays[1:]))


def test_channel_spacing():
    assert channel_spacing(SpectralPlan(n_links=1)) == pytest.approx(0.15, rel=1e-13)
    assert channel_spacing(SpectralPlan(n_links=24)) * 1e3 == pytest.approx(6.25, rel=1e-12)
    for n in (1, 7, 24):
        assert n * channel_spacing(SpectralPlan(n_links=n)) == pytest.approx(0.15, rel=1e-13)


def test_link_bands_partition_the_plan():
    plan = SpectralPlan(n_links=5)
    assert plan.link_band(1)[0] == pytest.approx(1.5)
    assert plan.link_band(5)[1] == pytest.approx(1.65)
    assert plan.outer_link_center() == pytest.approx(sum(plan.link_band(5)) / 2)
    with pytest.raises(DomainError):
        plan.link_band(6)


def test_bit_rates():
    assert mtdm_bit_rate_channel(0.25) == 1.0
    assert mtdm_bit_rate_channel(T0_DESK_NS) == pytest.approx(60.8, rel=0.005)
    assert mtdm_bit_rate_channel(0.1) == pytest.approx(2 * mtdm_bit_rate_channel(0.2))
    assert mtdm_bit_rate_link(0.3, 1) == mtdm_bit_rate_channel(0.3)
    assert mtdm_bit_rate_link(T0_DESK_NS, 16) == pytest.approx(973, rel=0.001)
    assert mtdm_bit_rate_link(0.3, 8) == pytest.approx(8 * mtdm_bit_rate_link(0.3, 1))
    assert mtdm_bit_rate_core(0.3, 1, 16) == pytest.approx(1000 * mtdm_bit_rate_link(0.3, 16))
    assert mtdm_bit_rate_core(T0_DESK_NS, 24, 16) == pytest.approx(2.336e7, rel=0.001)


@given(st.floats(1e-4, 10), st.integers(1, 24), st.integers(1, 64))
def test_core_link_identity(t0, n_links, n_ch):
    core = mtdm_bit_rate_core(t0, n_links, n_ch)
    assert core == pytest.approx(1000 * n_links * mtdm_bit_rate_link(t0, n_ch), rel=1e-12)


@pytest.mark.parametrize("call", [
    lambda: mtdm_bit_rate_channel(0.0),
    lambda: mtdm_bit_rate_link(-1.0, 4),
    lambda: mtdm_bit_rate_link(1.0, 0),
    lambda: mtdm_bit_rate_core(1.0, 2.5, 4),
])
def test_bit_rate_domain(call):
    with pytest.raises(DomainError):
        call()


@pytest.mark.parametrize("kw", [dict(k_lasers=0), dict(utilization_rho=1.5),
                                dict(t_laser=-1e-6), dict(data_rate_d=0.0), dict(n_in=2.5)])
def test_pon_config_validation(kw):
    with pytest.raises(ConfigError):
        PonConfig(**kw)


def test_spectral_plan_validation():
    with pytest.raises(ConfigError):
        SpectralPlan(lambda_start=1.6, lambda_end=1.5)
    with pytest.raises(ConfigError):
        SpectralPlan(n_links=0)


def test_range_check_warns_not_rejects():
    with pytest.warns(RangeWarning, match="p_pump"):
        msgs = check_ranges(p_pump=2.0, n_links=12)
    assert len(msgs) == 1
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert check_ranges(lambda_s=1.55, lambda_p=1.5, n_links=24, p_pump=0.5) == []
