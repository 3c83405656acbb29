"""Units, fiber physics primitives and the built-in fiber presets.

Everything is computed in SI internally. The user-facing units follow the
usual fiber-optics conventions: km for lengths, um for wavelengths,
W^-1 km^-1 for the nonlinear coefficient and dB/km for attenuation.
"""

import math
from dataclasses import asdict, dataclass, replace

from scipy.constants import c as SPEED_OF_LIGHT  # m/s

from .errors import ConfigError, DomainError

# unit multipliers to SI
km = 1.0e3
um = 1.0e-6
nm = 1.0e-9
ps = 1.0e-12
ns = 1.0e-9
us = 1.0e-6
ms = 1.0e-3
GHz = 1.0e9

# dB gain per unit of (gamma * P * L) in the high-gain phase-matched limit
DB_PER_NEPER_SQUARED = 10.0 * math.log10(math.e ** 2)

# ps/(nm^2 km) -> s/m^3
DISP_SLOPE_TO_SI = ps / (nm ** 2 * km)


def db_to_linear(value_db):
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value):
    return 10.0 * math.log10(value)


def attenuation_db_to_linear(alpha_db):
    """Convert a power attenuation in dB/km to the exponential rate in 1/km."""
    if alpha_db < 0:
        raise DomainError(f"attenuation must be >= 0 dB/km, got {alpha_db}")
    return alpha_db * math.log(10.0) / 10.0


def nonlinear_coefficient(n2, wavelength, a_eff):
    """Kerr nonlinear coefficient gamma = 2 pi n2 / (lambda A_eff).

    Args:
        n2: nonlinear refractive index in m^2/W.
        wavelength: optical wavelength in um.
        a_eff: effective mode area in um^2.

    Returns:
        gamma in W^-1 km^-1.
    """
    if n2 <= 0 or wavelength <= 0 or a_eff <= 0:
        raise DomainError(
            f"n2, wavelength and a_eff must all be > 0 "
            f"(got {n2}, {wavelength}, {a_eff})"
        )
    gamma_si = 2.0 * math.pi * n2 / (wavelength * um * a_eff * um ** 2)
    return gamma_si * km


def effective_length(alpha_db, length):
    """Loss-limited interaction length (1 - exp(-alpha L)) / alpha, in km.

    The lossless case returns ``length`` exactly instead of dividing by zero.
    """
    if length < 0:
        raise DomainError(f"length must be >= 0 km, got {length}")
    alpha = attenuation_db_to_linear(alpha_db)
    if alpha == 0.0:
        return float(length)
    # -expm1 keeps full precision when alpha*L is small; the min() absorbs
    # division rounding for vanishing lengths
    return min(-math.expm1(-alpha * length) / alpha, float(length))


def parametric_gain_slope(gamma):
    """Gain slope S_p in dB/(W km) for a nonlinear coefficient in W^-1 km^-1."""
    if gamma <= 0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    return DB_PER_NEPER_SQUARED * gamma


@dataclass(frozen=True)
class FiberProfile:
    """Physical parameters of one fiber type.

    ``disp_slope`` is the dispersion slope used for phase matching and is a
    different quantity from the parametric gain slope ``s_p``.
    """

    name: str
    alpha_db: float  # dB/km
    a_eff: float  # um^2
    gamma: float  # W^-1 km^-1
    s_p: float  # dB/(W km)
    lambda0: float = 1.55  # um
    disp_slope: float = 0.07  # ps/(nm^2 km)

    def __post_init__(self):
        checks = {
            "alpha_db": self.alpha_db >= 0,
            "a_eff": self.a_eff > 0,
            "gamma": self.gamma > 0,
            "s_p": self.s_p > 0,
            "lambda0": self.lambda0 > 0,
            "disp_slope": self.disp_slope > 0,
        }
        bad = [k for k, ok in checks.items() if not ok]
        if bad:
            raise ConfigError(f"invalid fiber profile {self.name!r}: {', '.join(bad)}")

    @property
    def gamma_si(self):
        """Nonlinear coefficient in W^-1 m^-1."""
        return self.gamma / km

    @property
    def alpha_linear(self):
        """Attenuation in 1/km."""
        return attenuation_db_to_linear(self.alpha_db)

    def effective_length(self, length):
        return effective_length(self.alpha_db, length)

    def to_dict(self):
        return asdict(self)

    def with_overrides(self, **fields):
        return replace(self, **fields)


# disp_slope and lambda0 are not tabulated for the presets; these are
# typical catalogue values and can be overridden from the config file
_PRESETS = {
    "SMF": FiberProfile("SMF", alpha_db=0.2, a_eff=85.0, gamma=1.8, s_p=16.0,
                        lambda0=1.55, disp_slope=0.07),
    "HNLF": FiberProfile("HNLF", alpha_db=0.7, a_eff=12.0, gamma=15.0, s_p=131.0,
                         lambda0=1.55, disp_slope=0.03),
}

FIBER_KINDS = tuple(_PRESETS)


def table1_profile(kind):
    """Return the built-in SMF or HNLF profile (case-insensitive)."""
    try:
        return _PRESETS[str(kind).upper()]
    except KeyError:
        raise ConfigError(
            f"unknown fiber preset {kind!r}; expected one of {', '.join(FIBER_KINDS)}"
        ) from None


def fiber_from_dict(data):
    """Build a profile from a config entry.

    Accepts a preset name, a full inline profile, or ``{"preset": name, ...}``
    with field overrides.
    """
    if isinstance(data, FiberProfile):
        return data
    if isinstance(data, str):
        return table1_profile(data)
    if not isinstance(data, dict):
        raise ConfigError(f"fiber must be a preset name or an object, got {data!r}")
    data = dict(data)
    fields = set(FiberProfile.__dataclass_fields__)
    unknown = set(data) - fields - {"preset"}
    if unknown:
        raise ConfigError(f"unknown fiber keys: {', '.join(sorted(unknown))}")
    try:
        if "preset" in data:
            base = table1_profile(data.pop("preset"))
            return base.with_overrides(**{k: _as_field(k, v) for k, v in data.items()})
        return FiberProfile(**{k: _as_field(k, v) for k, v in data.items()})
    except TypeError as exc:
        raise ConfigError(f"incomplete fiber profile: {exc}") from None


def _as_field(key, value):
    if key == "name":
        return str(value)
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"fiber field {key!r} must be numeric, got {value!r}") from None
