"""Hybrid WDM/TDM PON figures of merit.

Times are in seconds, data rates in Gbit/s and wavelengths in um. The
bit-rate functions take the pulse width in ns, matching the way pulse
sources are specified in practice.
"""

import warnings
from dataclasses import asdict, dataclass

from .errors import ConfigError, DomainError

# nominal operating ranges; values outside only trigger a warning
NOMINAL_RANGES = {
    "lambda_s": (1.5, 1.65),  # um
    "lambda_p": (1.4, 1.55),  # um
    "n_links": (1, 24),
    "p_pump": (0.5, 1.4),  # W
}


class RangeWarning(UserWarning):
    """A parameter is outside the nominal operating range of the model."""


def check_ranges(**values):
    """Warn for every value outside ``NOMINAL_RANGES``; return the messages."""
    messages = []
    for name, value in values.items():
        if name not in NOMINAL_RANGES or value is None:
            continue
        lo, hi = NOMINAL_RANGES[name]
        if not lo <= value <= hi:
            msg = f"{name} = {value} is outside the nominal range [{lo}, {hi}]"
            warnings.warn(msg, RangeWarning, stacklevel=2)
            messages.append(msg)
    return messages


@dataclass(frozen=True)
class PonConfig:
    k_lasers: int = 16
    n_in: int = 16
    m_out: int = 16
    w_users: int = 256
    data_rate_d: float = 2.5  # Gbit/s
    slot_t: float = 100e-6  # s
    t_laser: float = 25e-6  # s
    utilization_rho: float = 0.8
    t_tx: float = 100e-6  # s

    def __post_init__(self):
        errors = []
        for name in ("k_lasers", "n_in", "m_out", "w_users"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                errors.append(f"{name} must be an integer >= 1 (got {value})")
        if not 0.0 <= self.utilization_rho <= 1.0:
            errors.append(f"utilization_rho must be in [0, 1] (got {self.utilization_rho})")
        for name in ("slot_t", "t_laser", "t_tx"):
            if getattr(self, name) < 0:
                errors.append(f"{name} must be >= 0 (got {getattr(self, name)})")
        if not self.data_rate_d > 0:
            errors.append(f"data_rate_d must be > 0 (got {self.data_rate_d})")
        if errors:
            raise ConfigError("; ".join(errors))

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class SpectralPlan:
    lambda_start: float = 1.5  # um
    lambda_end: float = 1.65  # um
    n_links: int = 24
    n_channels: int = 16

    def __post_init__(self):
        if not self.lambda_end > self.lambda_start:
            raise ConfigError("lambda_end must exceed lambda_start")
        for name in ("n_links", "n_channels"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ConfigError(f"{name} must be an integer >= 1 (got {value})")

    def to_dict(self):
        return asdict(self)

    def link_band(self, link):
        """(start, end) wavelengths in um of the 1-based ``link``."""
        if not 1 <= link <= self.n_links:
            raise DomainError(f"link {link} outside 1..{self.n_links}")
        spacing = channel_spacing(self)
        start = self.lambda_start + (link - 1) * spacing
        return start, start + spacing

    def outer_link_center(self):
        """Center wavelength of the last (longest-wavelength) link, in um."""
        return self.lambda_end - channel_spacing(self) / 2.0


def service_window(cfg):
    """Time between two services of the same ONU: (N M / K)(T + T_laser)."""
    return cfg.n_in * cfg.m_out / cfg.k_lasers * (cfg.slot_t + cfg.t_laser)


def bandwidth_per_user(cfg):
    """Minimum guaranteed bandwidth per user, K d T / (N M (T + T_laser)).

    Equivalently d T / service_window(cfg).
    """
    busy = cfg.slot_t + cfg.t_laser
    if busy <= 0:
        raise DomainError("slot_t + t_laser must be > 0")
    return cfg.k_lasers * cfg.data_rate_d * cfg.slot_t / (cfg.n_in * cfg.m_out * busy)


def network_delay(cfg):
    """Average wait before an active ONU is served: rho (W/2)(T_tx + T_laser)."""
    return cfg.utilization_rho * cfg.w_users / 2.0 * (cfg.t_tx + cfg.t_laser)


def channel_spacing(plan):
    """Width of each link's share of the signal band, in um."""
    return (plan.lambda_end - plan.lambda_start) / plan.n_links


def _check_t0(t0):
    if not t0 > 0:
        raise DomainError(f"pulse width must be > 0 ns, got {t0}")


def _check_count(name, n):
    if int(n) != n or n < 1:
        raise DomainError(f"{name} must be an integer >= 1, got {n}")


def mtdm_bit_rate_channel(t0):
    """Bit rate per channel in Gbit/s for a pulse width ``t0`` in ns."""
    _check_t0(t0)
    return 0.25 / t0


def mtdm_bit_rate_link(t0, n_channels):
    """Bit rate per link in Gbit/s."""
    _check_t0(t0)
    _check_count("n_channels", n_channels)
    return 0.25 * n_channels / t0


def mtdm_bit_rate_core(t0, n_links, n_channels):
    """Total bit rate per fiber core in Mbit/s."""
    _check_t0(t0)
    _check_count("n_links", n_links)
    _check_count("n_channels", n_channels)
    return 0.25 * 1000.0 * n_links * n_channels / t0
