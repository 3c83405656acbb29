"""Parameter sweeps and the figure presets built on them.

A sweep evaluates one *target* on a grid: one swept parameter (linearly
spaced, ascending) times an optional series parameter (one curve per
value, in declaration order). Parameters are passed around in the
user-facing units listed in ``PARAMETERS``.
"""

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .capacity import (
    PonConfig,
    SpectralPlan,
    bandwidth_per_user,
    mtdm_bit_rate_channel,
    mtdm_bit_rate_core,
    mtdm_bit_rate_link,
    network_delay,
    service_window,
)
from .core import GHz, fiber_from_dict, km, ms, ns, ps, us
from .errors import ConfigError, NumericalError, OpaponError
from .gain import PhaseMatchInput, phase_matched_delta_beta, phase_mismatch, signal_gain
from .pulse import PumpModulation, pulse_width

# name -> unit label
PARAMETERS = {
    "fiber": "",
    "gamma": "1/(W km)",
    "lambda0": "um",
    "disp_slope": "ps/(nm^2 km)",
    "p_pump": "W",
    "length": "km",
    "delta_beta": "1/m",
    "phase_matched": "-",
    "lambda_p": "um",
    "lambda_s": "um",
    "p0": "W",
    "f_m": "GHz",
    "n_links": "-",
    "n_channels": "-",
    "lambda_start": "um",
    "lambda_end": "um",
    "k_lasers": "-",
    "n_in": "-",
    "m_out": "-",
    "w_users": "-",
    "data_rate_d": "Gbit/s",
    "slot_t": "us",
    "t_laser": "us",
    "utilization_rho": "-",
    "t_tx": "us",
}

COUNT_PARAMETERS = {"n_links", "n_channels", "k_lasers", "n_in", "m_out", "w_users"}

CSV_DIGITS = 12


# ---------------------------------------------------------------- targets

def _fiber(params):
    profile = fiber_from_dict(params.get("fiber", "HNLF"))
    overrides = {k: float(params[k]) for k in ("gamma", "lambda0", "disp_slope") if k in params}
    return profile.with_overrides(**overrides) if overrides else profile


def _delta_beta(params, fiber, pump_power, lambda_s=None):
    if "delta_beta" in params:
        return float(params["delta_beta"])
    if params.get("phase_matched"):
        return phase_matched_delta_beta(fiber.gamma_si, pump_power)
    lambda_s = params.get("lambda_s", lambda_s)
    if lambda_s is None or "lambda_p" not in params:
        raise ConfigError(
            "phase mismatch unresolved: give delta_beta, phase_matched, "
            "or lambda_p with lambda_s"
        )
    pm = PhaseMatchInput(fiber.lambda0, float(params["lambda_p"]), float(lambda_s),
                         fiber.disp_slope)
    return phase_mismatch(pm)


def _pon(params):
    base = PonConfig()
    kw = {}
    for name in ("k_lasers", "n_in", "m_out", "w_users"):
        if name in params:
            kw[name] = int(params[name])
    for name in ("data_rate_d", "utilization_rho"):
        if name in params:
            kw[name] = float(params[name])
    for name in ("slot_t", "t_laser", "t_tx"):
        if name in params:
            kw[name] = float(params[name]) * us
    return PonConfig(**{**base.to_dict(), **kw})


def _target_bandwidth(params):
    cfg = _pon(params)
    return [
        ("bw_user", "Gbit/s", bandwidth_per_user(cfg)),
        ("t_window", "ms", service_window(cfg) / ms),
    ]


def _target_delay(params):
    return [("delay", "ms", network_delay(_pon(params)) / ms)]


def _target_gain(params):
    fiber = _fiber(params)
    p_pump = float(params["p_pump"])
    dbeta = _delta_beta(params, fiber, p_pump)
    result = signal_gain(dbeta, fiber.gamma_si, p_pump, float(params["length"]) * km)
    return [
        ("delta_beta", "1/m", dbeta),
        ("gain", "dB", result.gain_db),
    ]


def _pulse_chain(params):
    fiber = _fiber(params)
    mod = PumpModulation.from_frequency(float(params["p0"]), float(params["f_m"]) * GHz)
    plan = SpectralPlan(
        lambda_start=float(params.get("lambda_start", 1.5)),
        lambda_end=float(params.get("lambda_end", 1.65)),
        n_links=int(params.get("n_links", 1)),
        n_channels=int(params.get("n_channels", 16)),
    )
    lambda_s = params.get("lambda_s", plan.outer_link_center())
    dbeta = _delta_beta(params, fiber, mod.p0, lambda_s)
    t0 = pulse_width(dbeta, fiber.gamma_si, mod, float(params["length"]) * km)
    cols = []
    if not params.get("phase_matched") and "delta_beta" not in params:
        cols.append(("lambda_s", "um", float(lambda_s)))
    cols += [("delta_beta", "1/m", dbeta), ("t0", "ps", t0 / ps)]
    return cols, t0 / ns, plan


def _target_rate_channel(params):
    cols, t0_ns, _ = _pulse_chain(params)
    return cols + [("bit_rate_channel", "Gbit/s", mtdm_bit_rate_channel(t0_ns))]


def _target_rate_link(params):
    cols, t0_ns, plan = _pulse_chain(params)
    return cols + [("bit_rate_link", "Gbit/s", mtdm_bit_rate_link(t0_ns, plan.n_channels))]


def _target_rate_core(params):
    cols, t0_ns, plan = _pulse_chain(params)
    rate = mtdm_bit_rate_core(t0_ns, plan.n_links, plan.n_channels)
    return cols + [("bit_rate_core", "Mbit/s", rate)]


_PULSE_REQUIRED = ("fiber", "p0", "f_m", "length")

# name -> (function, required parameters)
TARGETS = {
    "bandwidth_per_user": (_target_bandwidth, ("data_rate_d", "slot_t", "t_laser")),
    "network_delay": (_target_delay, ("utilization_rho", "w_users", "t_tx", "t_laser")),
    "signal_gain": (_target_gain, ("fiber", "p_pump", "length")),
    "mtdm_bit_rate_channel": (_target_rate_channel, _PULSE_REQUIRED),
    "mtdm_bit_rate_link": (_target_rate_link, _PULSE_REQUIRED + ("n_channels",)),
    "mtdm_bit_rate_core": (_target_rate_core, _PULSE_REQUIRED + ("n_links", "n_channels")),
}


# ------------------------------------------------------------------ specs

@dataclass(frozen=True)
class SweptParam:
    name: str
    min: float
    max: float
    steps: int

    def values(self):
        grid = np.linspace(self.min, self.max, int(self.steps))
        if self.name in COUNT_PARAMETERS:
            return [int(round(v)) for v in grid]
        return [float(v) for v in grid]


@dataclass(frozen=True)
class SeriesParam:
    name: str
    values: tuple


@dataclass(frozen=True)
class SweepSpec:
    target: str
    swept: SweptParam
    series: SeriesParam | None = None
    fixed: dict = field(default_factory=dict)
    preset: str | None = None

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ConfigError(
                f"unknown sweep target {self.target!r}; expected one of {', '.join(TARGETS)}"
            )
        sw = self.swept
        if int(sw.steps) != sw.steps or sw.steps < 2:
            raise ConfigError(f"steps must be an integer >= 2, got {sw.steps}")
        if not sw.min < sw.max:
            raise ConfigError(f"swept range needs min < max, got [{sw.min}, {sw.max}]")
        names = [sw.name] + ([self.series.name] if self.series else []) + list(self.fixed)
        unknown = [n for n in names if n not in PARAMETERS]
        if unknown:
            raise ConfigError(f"unknown sweep parameters: {', '.join(unknown)}")
        if self.series is not None:
            if self.series.name == sw.name:
                raise ConfigError("swept and series parameters must differ")
            if not self.series.values:
                raise ConfigError("series needs at least one value")
        if sw.name in self.fixed or (self.series and self.series.name in self.fixed):
            raise ConfigError("fixed parameters must not repeat swept/series names")
        covered = set(names)
        missing = [p for p in TARGETS[self.target][1] if p not in covered]
        if missing:
            raise ConfigError(f"target {self.target} is missing parameters: {', '.join(missing)}")

    def to_dict(self):
        return {
            "target": self.target,
            "preset": self.preset,
            "swept": {"name": self.swept.name, "min": self.swept.min,
                      "max": self.swept.max, "steps": self.swept.steps},
            "series": None if self.series is None else
            {"name": self.series.name, "values": list(self.series.values)},
            "fixed": dict(self.fixed),
        }

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("sweep spec must be a JSON object")
        unknown = set(data) - {"target", "preset", "swept", "series", "fixed"}
        if unknown:
            raise ConfigError(f"unknown sweep spec keys: {', '.join(sorted(unknown))}")
        try:
            sw = data["swept"]
            swept = SweptParam(sw["name"], float(sw["min"]), float(sw["max"]), sw["steps"])
            series = None
            if data.get("series"):
                series = SeriesParam(data["series"]["name"], tuple(data["series"]["values"]))
            return cls(
                target=data["target"],
                swept=swept,
                series=series,
                fixed=dict(data.get("fixed") or {}),
                preset=data.get("preset"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"malformed sweep spec: {exc!r}") from None

    def grid(self):
        """Parameter dicts in output order: series outer, swept inner."""
        series = self.series.values if self.series else (None,)
        points = []
        for s in series:
            for v in self.swept.values():
                p = dict(self.fixed)
                if self.series:
                    p[self.series.name] = s
                p[self.swept.name] = v
                points.append(p)
        return points


# -------------------------------------------------------------- curve sets

def _fmt(value):
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), f".{CSV_DIGITS}g")


@dataclass
class CurveSet:
    columns: list  # [(name, unit), ...]
    rows: list  # [tuple, ...]
    metadata: dict

    @property
    def header(self):
        return [f"{n} [{u}]" if u else n for n, u in self.columns]

    def column(self, name):
        idx = [n for n, _ in self.columns].index(name)
        return [row[idx] for row in self.rows]

    def curves(self):
        """Rows grouped by series value, preserving order."""
        series = self.metadata["spec"]["series"]
        if not series:
            return {None: self.rows}
        idx = [n for n, _ in self.columns].index(series["name"])
        out = {}
        for row in self.rows:
            out.setdefault(row[idx], []).append(row)
        return out

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def metadata_json(self):
        return json.dumps(self.metadata, indent=2, sort_keys=True) + "\n"

    def write(self, outdir, stem):
        """Write ``stem.csv`` and ``stem.meta.json``; return both paths."""
        os.makedirs(outdir, exist_ok=True)
        csv_path = os.path.join(outdir, f"{stem}.csv")
        meta_path = os.path.join(outdir, f"{stem}.meta.json")
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            fh.write(self.to_csv())
        with open(meta_path, "w", encoding="utf-8") as fh:
            fh.write(self.metadata_json())
        return csv_path, meta_path


def _evaluate(func, point, coords):
    try:
        outputs = func(point)
    except OpaponError as exc:
        exc.point = coords
        exc.args = (f"{exc} at {coords}",)
        raise
    for name, _, value in outputs:
        if not isinstance(value, str) and not math.isfinite(value):
            raise NumericalError(f"{name} is not finite at {coords}")
    return outputs


def run_sweep(spec, workers=1, config_echo=None):
    """Evaluate ``spec`` and return a CurveSet.

    Row order is fixed by grid index, so ``workers > 1`` gives the same
    result as a serial run.
    """
    func = TARGETS[spec.target][0]
    points = spec.grid()
    keys = [spec.series.name] if spec.series else []
    keys.append(spec.swept.name)
    coords = [{k: p[k] for k in keys} for p in points]

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate, [func] * len(points), points, coords))
    else:
        results = [_evaluate(func, p, c) for p, c in zip(points, coords)]

    out_cols = [(n, u) for n, u, _ in results[0]]
    lead = []
    if spec.series:
        lead.append((spec.series.name, PARAMETERS[spec.series.name]))
    lead.append((spec.swept.name, PARAMETERS[spec.swept.name]))
    lead_names = [n for n, _ in lead]
    rows = []
    for p, res in zip(points, results):
        if [(n, u) for n, u, _ in res] != out_cols:
            raise NumericalError(f"inconsistent output columns at {p}")
        rows.append(tuple(p[n] for n in lead_names) + tuple(v for _, _, v in res))

    fibers = {}
    for p in points:
        if "fiber" in p:
            prof = _fiber(p)
            fibers[prof.name] = prof.to_dict()
    metadata = {
        "target": spec.target,
        "preset": spec.preset,
        "spec": spec.to_dict(),
        "tool_version": __version__,
        "fibers": fibers,
        "rows": len(rows),
    }
    if config_echo is not None:
        metadata["config"] = config_echo
    return CurveSet(columns=lead + out_cols, rows=rows, metadata=metadata)


# ---------------------------------------------------------------- presets

# pump wavelengths slightly on the anomalous side of lambda0 = 1.55 um keep
# every link's outer-center signal inside the gain band at P0 = 1 W
PRESET_PUMP_WAVELENGTH = {"HNLF": 1.5502, "SMF": 1.55001}

_RATE_FIGURES = {
    # fig -> (target, fiber, lengths in km)
    7: ("mtdm_bit_rate_channel", "HNLF", (0.1, 0.2, 0.3)),
    8: ("mtdm_bit_rate_channel", "HNLF", (0.5, 1.0, 1.5)),
    9: ("mtdm_bit_rate_link", "HNLF", (0.1, 0.2, 0.3)),
    10: ("mtdm_bit_rate_link", "HNLF", (0.5, 1.0, 1.5)),
    11: ("mtdm_bit_rate_core", "HNLF", (0.1, 0.2, 0.3)),
    12: ("mtdm_bit_rate_core", "HNLF", (0.5, 1.0, 1.5)),
    13: ("mtdm_bit_rate_channel", "SMF", (1.0, 2.0, 3.0)),
    14: ("mtdm_bit_rate_channel", "SMF", (5.0, 10.0, 15.0)),
    15: ("mtdm_bit_rate_link", "SMF", (1.0, 2.0, 3.0)),
    16: ("mtdm_bit_rate_link", "SMF", (5.0, 10.0, 15.0)),
    17: ("mtdm_bit_rate_core", "SMF", (1.0, 2.0, 3.0)),
    18: ("mtdm_bit_rate_core", "SMF", (5.0, 10.0, 15.0)),
}

PRESET_IDS = tuple(f"fig{n}" for n in range(2, 19))

PRESET_TITLES = {
    "fig2": "data rate vs bandwidth per user, one curve per laser switching time",
    "fig3": "network delay vs utilization, T_tx = 100 us",
    "fig4": "network delay vs utilization, T_tx = 250 us",
    "fig5": "parametric gain vs pump power, SMF and HNLF",
    "fig6": "parametric gain vs pump power in HNLF, one curve per signal wavelength",
}
for _n, (_t, _f, _) in _RATE_FIGURES.items():
    _kind = _t.rsplit("_", 1)[-1]
    PRESET_TITLES[f"fig{_n}"] = f"MTDM bit rate per {_kind} vs number of links, {_f}"


def figure_preset(fig_id, pon=None, plan=None, pump=None):
    """Return the SweepSpec for one of fig2 ... fig18.

    ``pon``, ``plan`` and ``pump`` supply the fixed parameters; defaults are
    used when omitted. Presets reproduce axes and curve families only.
    """
    fig_id = str(fig_id).lower()
    if fig_id not in PRESET_IDS:
        raise ConfigError(f"unknown figure preset {fig_id!r}; expected fig2 ... fig18")
    n = int(fig_id[3:])
    pon = pon or PonConfig()
    plan = plan or SpectralPlan()
    pump = pump or PumpModulation.from_frequency(1.0, 10 * GHz)

    if n == 2:
        return SweepSpec(
            target="bandwidth_per_user",
            swept=SweptParam("data_rate_d", 1.0, 10.0, 10),
            series=SeriesParam("t_laser", (5.0, 25.0, 50.0)),
            fixed={"k_lasers": pon.k_lasers, "n_in": pon.n_in, "m_out": pon.m_out,
                   "slot_t": pon.slot_t / us},
            preset=fig_id,
        )
    if n in (3, 4):
        return SweepSpec(
            target="network_delay",
            swept=SweptParam("utilization_rho", 0.1, 1.0, 10),
            series=SeriesParam("t_laser", (25.0, 50.0, 100.0)),
            fixed={"w_users": pon.w_users, "t_tx": 100.0 if n == 3 else 250.0},
            preset=fig_id,
        )
    if n == 5:
        return SweepSpec(
            target="signal_gain",
            swept=SweptParam("p_pump", 0.5, 1.4, 10),
            series=SeriesParam("fiber", ("SMF", "HNLF")),
            fixed={"length": 0.5, "phase_matched": 1},
            preset=fig_id,
        )
    if n == 6:
        return SweepSpec(
            target="signal_gain",
            swept=SweptParam("p_pump", 0.5, 1.4, 10),
            series=SeriesParam("lambda_s", (1.56, 1.57, 1.58)),
            fixed={"fiber": "HNLF", "length": 0.5, "lambda_p": 1.5505},
            preset=fig_id,
        )
    target, fiber, lengths = _RATE_FIGURES[n]
    return SweepSpec(
        target=target,
        swept=SweptParam("n_links", 1, 24, 24),
        series=SeriesParam("length", lengths),
        fixed={
            "fiber": fiber,
            "p0": pump.p0,
            "f_m": pump.omega_m / (2 * math.pi) / GHz,
            "lambda_p": PRESET_PUMP_WAVELENGTH[fiber],
            "lambda_start": plan.lambda_start,
            "lambda_end": plan.lambda_end,
            "n_channels": plan.n_channels,
        },
        preset=fig_id,
    )
