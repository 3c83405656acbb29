"""Tool configuration: JSON file, environment default and unit-suffixed values."""

import json
import math
import os
import re
from dataclasses import dataclass, field

from .capacity import PonConfig, SpectralPlan
from .core import FiberProfile, fiber_from_dict
from .errors import ConfigError
from .ode import OdeConfig
from .pulse import PumpModulation

CONFIG_ENV_VAR = "OPAPON_CONFIG"

_TIME_UNITS = {"ns": 1e-9, "us": 1e-6, "µs": 1e-6, "ms": 1e-3, "s": 1.0}
_FREQ_UNITS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-zµ]+)\s*$")


def _parse_quantity(text, units, kind):
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        if text == 0:
            return 0.0
        raise ConfigError(f"{kind} {text!r} needs a unit suffix ({', '.join(units)})")
    s = str(text).strip()
    try:
        bare = float(s)
    except ValueError:
        bare = None
    if bare is not None:
        # zero is the same in every unit
        if bare == 0.0:
            return 0.0
        raise ConfigError(f"{kind} {text!r} needs a unit suffix ({', '.join(units)})")
    m = _QUANTITY.match(s)
    if not m:
        raise ConfigError(f"cannot parse {kind} {text!r}")
    unit = m.group(2)
    key = unit if unit in units else unit.lower()
    if key not in units:
        raise ConfigError(f"unknown {kind} unit {unit!r}; use one of {', '.join(units)}")
    return float(m.group(1)) * units[key]


def parse_duration(text):
    """'100us' -> 1e-4 s. Bare numbers other than 0 are rejected."""
    return _parse_quantity(text, _TIME_UNITS, "duration")


def parse_frequency(text):
    """'10GHz' -> 1e10 Hz. Bare numbers other than 0 are rejected."""
    return _parse_quantity(text, _FREQ_UNITS, "frequency")


@dataclass(frozen=True)
class OutputConfig:
    path: str = "."
    format: str = "csv"

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ConfigError(f"output format must be csv or json, got {self.format!r}")


@dataclass(frozen=True)
class ToolConfig:
    fiber: FiberProfile = field(default_factory=lambda: fiber_from_dict("HNLF"))
    pon: PonConfig = field(default_factory=PonConfig)
    plan: SpectralPlan = field(default_factory=SpectralPlan)
    pump: PumpModulation = field(
        default_factory=lambda: PumpModulation.from_frequency(1.0, 10e9)
    )
    ode: OdeConfig = field(default_factory=OdeConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self):
        """JSON-ready echo of the effective configuration."""
        ode = self.ode
        return {
            "fiber": self.fiber.to_dict(),
            "pon": self.pon.to_dict(),
            "plan": self.plan.to_dict(),
            "pump": {"p0": self.pump.p0, "f_m": f"{self.pump.omega_m / (2 * math.pi):.12g}Hz"},
            "ode": {"method": ode.method, "step": ode.step, "rtol": ode.rtol,
                    "atol": ode.atol, "max_steps": ode.max_steps},
            "output": {"path": self.output.path, "format": self.output.format},
        }


_SECTIONS = ("fiber", "pon", "plan", "pump", "ode", "output")
_PON_TIMES = ("slot_t", "t_laser", "t_tx")


def _check_keys(section, data, allowed):
    if not isinstance(data, dict):
        raise ConfigError(f"config section {section!r} must be an object")
    unknown = set(data) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown keys in {section!r}: {', '.join(sorted(unknown))}")


def _build(cls, section, kwargs):
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid {section!r} section: {exc}") from None


def config_from_dict(data, base=None):
    """Merge ``data`` over ``base`` (defaults when None). Unknown keys are rejected."""
    base = base or ToolConfig()
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    _check_keys("config", data, _SECTIONS)
    parts = {}

    if "fiber" in data:
        parts["fiber"] = fiber_from_dict(data["fiber"])

    if "pon" in data:
        pon = data["pon"]
        _check_keys("pon", pon, PonConfig.__dataclass_fields__)
        kw = base.pon.to_dict()
        for k, v in pon.items():
            kw[k] = parse_duration(v) if k in _PON_TIMES else v
        parts["pon"] = _build(PonConfig, "pon", kw)

    if "plan" in data:
        _check_keys("plan", data["plan"], SpectralPlan.__dataclass_fields__)
        parts["plan"] = _build(SpectralPlan, "plan", {**base.plan.to_dict(), **data["plan"]})

    if "pump" in data:
        pump = data["pump"]
        _check_keys("pump", pump, ("p0", "omega_m", "f_m"))
        if "omega_m" in pump and "f_m" in pump:
            raise ConfigError("give either pump.omega_m or pump.f_m, not both")
        p0 = float(pump.get("p0", base.pump.p0))
        omega = base.pump.omega_m
        if "omega_m" in pump:
            omega = float(pump["omega_m"])
        elif "f_m" in pump:
            omega = 2 * math.pi * parse_frequency(pump["f_m"])
        parts["pump"] = _build(PumpModulation, "pump", {"p0": p0, "omega_m": omega})

    if "ode" in data:
        _check_keys("ode", data["ode"], OdeConfig.__dataclass_fields__)
        cur = base.ode
        kw = {"method": cur.method, "step": cur.step, "rtol": cur.rtol,
              "atol": cur.atol, "max_steps": cur.max_steps}
        kw.update(data["ode"])
        parts["ode"] = _build(OdeConfig, "ode", kw)

    if "output" in data:
        _check_keys("output", data["output"], ("path", "format"))
        kw = {"path": base.output.path, "format": base.output.format, **data["output"]}
        parts["output"] = _build(OutputConfig, "output", kw)

    merged = {name: getattr(base, name) for name in _SECTIONS}
    merged.update(parts)
    return ToolConfig(**merged)


def load_config(path=None):
    """Load the JSON config at ``path``, else ``$OPAPON_CONFIG``, else defaults."""
    path = path or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return ToolConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return config_from_dict(data)
