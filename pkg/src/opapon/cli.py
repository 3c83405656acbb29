"""Command-line entry point.

Exit codes: 0 ok, 1 verification failed, 2 invalid configuration,
3 numerical failure, 4 I/O failure.
"""

import argparse
import json
import math
import os
import sys

from . import __version__
from .capacity import (
    PonConfig,
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
from .config import load_config, parse_duration, parse_frequency
from .core import DB_PER_NEPER_SQUARED, effective_length, fiber_from_dict, km, ms, ns, ps
from .errors import ConfigError, DomainError, NumericalError
from .gain import (
    PhaseMatchInput,
    gain_db_slope_form,
    high_gain_approx,
    phase_matched_delta_beta,
    phase_mismatch,
    signal_gain,
)
from .ode import OdeConfig, ThreeWaveState, propagate
from .pulse import (
    PumpModulation,
    fwhm,
    peak_gain_param,
    pulse_amplitude,
    pulse_width,
    pump_curvature,
)
from .sweep import PRESET_IDS, PRESET_TITLES, SweepSpec, figure_preset, run_sweep

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

ERRATA = [
    ("total phase mismatch",
     "k = delta_beta + 2 gamma P_p (published as delta_beta + gamma P_p); only the "
     "factor 2 makes (gamma P)^2 - k^2/4 equal -delta_beta (delta_beta/4 + gamma P)."),
    ("signal and idler coupling",
     "the four-wave-mixing term couples to the conjugate partner wave "
     "(A_i* A_p^2 for the signal, A_s* A_p^2 for the idler); without the "
     "conjugate total optical power is not conserved."),
    ("peak gain parameter",
     "g0 = sqrt(-delta_beta (delta_beta/4 + gamma P0)) (published as "
     "sqrt(-delta_beta^2 + 4 delta_beta gamma P0)/2, imaginary inside the gain band)."),
    ("bandwidth per user",
     "denominator N M (T + T_laser) (published as N M (d T + T_laser), which adds "
     "bits to seconds); this reading keeps BW_user = d T / T_window."),
]


class Report:
    """Collects (name, unit, value) lines and prints them as text or JSON."""

    def __init__(self):
        self.items = []

    def add(self, name, value, unit=""):
        self.items.append((name, unit, value))

    def emit(self, as_json, stream=None):
        stream = stream or sys.stdout
        if as_json:
            payload = {n: v for n, _, v in self.items}
            stream.write(json.dumps(payload, indent=2, sort_keys=False, default=str) + "\n")
            return
        width = max(len(_label(n, u)) for n, u, _ in self.items)
        for n, u, v in self.items:
            stream.write(f"{_label(n, u):<{width}}  {_num(v)}\n")


def _label(name, unit):
    return f"{name} [{unit}]" if unit else name


def _num(v):
    if isinstance(v, float):
        return format(v + 0.0, ".12g")
    return str(v)


# ------------------------------------------------------------ shared flags

def _add_fiber_flags(p, allow_zero_gamma=False):
    p.add_argument("--fiber", help="fiber preset (SMF, HNLF); default from config")
    p.add_argument("--gamma", type=float,
                   help="nonlinear coefficient override, 1/(W km)"
                   + (" (0 disables coupling)" if allow_zero_gamma else ""))


def _add_phase_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--phase-matched", action="store_true",
                   help="delta_beta = -2 gamma P (kappa = 0), the default")
    g.add_argument("--delta-beta", type=float, help="linear phase mismatch, 1/m")
    g.add_argument("--lambda-s", type=float, help="signal wavelength, um (needs --lambda-p)")
    p.add_argument("--lambda-p", type=float, help="pump wavelength, um")
    p.add_argument("--lambda0", type=float, help="zero-dispersion wavelength override, um")
    p.add_argument("--disp-slope", type=float,
                   help="dispersion slope override, ps/(nm^2 km)")


def _fiber(args, cfg):
    fiber = fiber_from_dict(args.fiber) if args.fiber else cfg.fiber
    overrides = {}
    if getattr(args, "lambda0", None) is not None:
        overrides["lambda0"] = args.lambda0
    if getattr(args, "disp_slope", None) is not None:
        overrides["disp_slope"] = args.disp_slope
    if overrides:
        fiber = fiber.with_overrides(**overrides)
    gamma = fiber.gamma if args.gamma is None else args.gamma
    if gamma < 0:
        raise ConfigError(f"--gamma must be >= 0, got {gamma}")
    return fiber, gamma


def _delta_beta(args, fiber, gamma_si, p_pump):
    if args.delta_beta is not None:
        return args.delta_beta, "explicit"
    if args.lambda_s is not None:
        if args.lambda_p is None:
            raise ConfigError("--lambda-s requires --lambda-p")
        check_ranges(lambda_p=args.lambda_p, lambda_s=args.lambda_s)
        pm = PhaseMatchInput(fiber.lambda0, args.lambda_p, args.lambda_s, fiber.disp_slope)
        return phase_mismatch(pm), "wavelengths"
    if args.lambda_p is not None:
        raise ConfigError("--lambda-p requires --lambda-s")
    return phase_matched_delta_beta(gamma_si, p_pump), "matched"


# ---------------------------------------------------------------- commands

def cmd_gain(args, cfg):
    fiber, gamma = _fiber(args, cfg)
    p_pump = cfg.pump.p0 if args.pump_power is None else args.pump_power
    check_ranges(p_pump=p_pump)
    length_km = args.length
    if args.effective_length:
        length_km = effective_length(fiber.alpha_db, length_km)
    gamma_si = gamma / km
    dbeta, how = _delta_beta(args, fiber, gamma_si, p_pump)
    result = signal_gain(dbeta, gamma_si, p_pump, length_km * km)

    rep = Report()
    rep.add("fiber", fiber.name)
    rep.add("gamma", gamma, "1/(W km)")
    rep.add("pump_power", p_pump, "W")
    rep.add("length", length_km, "km")
    rep.add("phase", how)
    rep.add("delta_beta", result.delta_beta, "1/m")
    rep.add("k", result.k, "1/m")
    rep.add("g_squared", result.g_squared, "1/m^2")
    rep.add("regime", result.regime)
    rep.add("gain_linear", result.gain_linear)
    rep.add("gain", result.gain_db, "dB")
    s_p = fiber.s_p if args.s_p is None else args.s_p
    if p_pump > 0 and length_km > 0 and s_p > 0:
        rep.add("gain_slope_form", gain_db_slope_form(p_pump, length_km, s_p,
                                                      rounded_offset=True), "dB")
        if gamma > 0:
            exact_slope = DB_PER_NEPER_SQUARED * gamma
            rep.add("gain_high_gain_limit",
                    10 * math.log10(high_gain_approx(gamma_si, p_pump, length_km * km)), "dB")
            rep.add("gain_slope_form_exact",
                    gain_db_slope_form(p_pump, length_km, exact_slope), "dB")
    else:
        rep.add("gain_slope_form", "n/a")
    rep.emit(args.json)
    return EXIT_OK


def cmd_ode_verify(args, cfg):
    fiber, gamma = _fiber(args, cfg)
    p_pump = cfg.pump.p0 if args.pump_power is None else args.pump_power
    gamma_si = gamma / km
    length = args.length * km
    dbeta, how = _delta_beta(args, fiber, gamma_si, p_pump)
    ode_cfg = cfg.ode
    if args.method or args.steps:
        ode_cfg = OdeConfig(
            method=args.method or ode_cfg.method,
            step=(length / args.steps) if args.steps and length > 0 else ode_cfg.step,
            rtol=ode_cfg.rtol, atol=ode_cfg.atol, max_steps=ode_cfg.max_steps,
        )
    if not args.seed_ratio > 0:
        raise ConfigError("--seed-ratio must be > 0")
    p_signal = args.seed_ratio * p_pump if p_pump > 0 else args.seed_ratio

    analytic = signal_gain(dbeta, gamma_si, p_pump, length).gain_linear
    start = ThreeWaveState(math.sqrt(p_pump), math.sqrt(p_signal), 0.0)
    end = propagate(start, gamma_si, dbeta, length, ode_cfg)
    oracle = abs(end.a_s) ** 2 / p_signal
    rel_err = abs(oracle / analytic - 1.0)
    drift = abs(end.total_power / start.total_power - 1.0)

    rep = Report()
    rep.add("phase", how)
    rep.add("delta_beta", dbeta, "1/m")
    rep.add("seed_ratio", args.seed_ratio)
    rep.add("method", ode_cfg.method)
    rep.add("gain_analytic", analytic)
    rep.add("gain_ode", oracle)
    rep.add("relative_error", rel_err)
    rep.add("tolerance", args.tolerance)
    rep.add("power_drift", drift)
    ok = rel_err <= args.tolerance
    rep.add("result", "PASS" if ok else "FAIL")
    rep.emit(args.json)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_pulse(args, cfg):
    fiber, gamma = _fiber(args, cfg)
    p0 = cfg.pump.p0 if args.p0 is None else args.p0
    omega = cfg.pump.omega_m if args.fm is None else 2 * math.pi * parse_frequency(args.fm)
    mod = PumpModulation(p0, omega)
    check_ranges(p_pump=p0)
    gamma_si = gamma / km
    length = args.length * km
    dbeta, how = _delta_beta(args, fiber, gamma_si, p0)
    n_ch = cfg.plan.n_channels if args.n_channels is None else args.n_channels
    n_links = cfg.plan.n_links if args.n_links is None else args.n_links
    check_ranges(n_links=n_links)

    g0 = peak_gain_param(dbeta, gamma_si, p0)
    t0 = pulse_width(dbeta, gamma_si, mod, length)
    t0_ns = t0 / ns

    rep = Report()
    rep.add("fiber", fiber.name)
    rep.add("phase", how)
    rep.add("delta_beta", dbeta, "1/m")
    rep.add("g0", g0, "1/m")
    rep.add("pump_curvature", pump_curvature(mod), "W/s^2")
    rep.add("t0", t0 / ps, "ps")
    rep.add("t0", t0_ns, "ns")
    rep.add("fwhm", fwhm(t0) / ps, "ps")
    rep.add("a0", pulse_amplitude(g0, length) if g0 > 0 else "n/a", "sqrt(W)")
    rep.add("chirp", args.chirp)
    rep.add("bit_rate_channel", mtdm_bit_rate_channel(t0_ns), "Gbit/s")
    rep.add("bit_rate_link", mtdm_bit_rate_link(t0_ns, n_ch), "Gbit/s")
    rep.add("bit_rate_core", mtdm_bit_rate_core(t0_ns, n_links, n_ch), "Mbit/s")
    rep.emit(args.json)
    return EXIT_OK


def cmd_capacity(args, cfg):
    base = cfg.pon.to_dict()
    flag_map = {"k_lasers": args.k, "n_in": args.n, "m_out": args.m, "w_users": args.w,
                "data_rate_d": args.d, "utilization_rho": args.rho}
    for key, value in flag_map.items():
        if value is not None:
            base[key] = value
    for key, value in (("slot_t", args.slot), ("t_laser", args.tlaser), ("t_tx", args.ttx)):
        if value is not None:
            base[key] = parse_duration(value)
    pon = PonConfig(**base)
    plan = cfg.plan
    if args.n_links is not None:
        plan = SpectralPlan(plan.lambda_start, plan.lambda_end, args.n_links, plan.n_channels)
    check_ranges(n_links=plan.n_links)

    rep = Report()
    rep.add("bandwidth_per_user", bandwidth_per_user(pon), "Gbit/s")
    rep.add("service_window", service_window(pon) / ms, "ms")
    rep.add("network_delay", network_delay(pon) / ms, "ms")
    rep.add("channel_spacing", channel_spacing(plan) * 1e3, "nm")
    rep.emit(args.json)
    return EXIT_OK


def cmd_sweep(args, cfg):
    if args.spec:
        try:
            with open(args.spec, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.spec}: invalid JSON ({exc})") from None
        spec = SweepSpec.from_dict(data)
        stem = args.name or os.path.splitext(os.path.basename(args.spec))[0]
    else:
        spec = figure_preset(args.preset, pon=cfg.pon, plan=cfg.plan, pump=cfg.pump)
        stem = args.name or spec.preset
    outdir = args.output or cfg.output.path
    fmt = args.format or cfg.output.format
    curves = run_sweep(spec, workers=args.workers, config_echo=cfg.to_dict())
    if fmt == "csv":
        paths = curves.write(outdir, stem)
    else:
        os.makedirs(outdir, exist_ok=True)
        path = os.path.join(outdir, f"{stem}.json")
        payload = {"columns": curves.header, "rows": [list(r) for r in curves.rows],
                   "metadata": curves.metadata}
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        paths = (path,)
    print(f"rows: {len(curves.rows)}")
    for p in paths:
        print(f"wrote {p}")
    return EXIT_OK


def cmd_presets(args, cfg):
    for fig in PRESET_IDS:
        print(f"{fig:<6} {PRESET_TITLES[fig]}")
    return EXIT_OK


def cmd_errata(args=None, cfg=None):
    print("Corrections applied to the published model equations:")
    for i, (topic, text) in enumerate(ERRATA, 1):
        print(f"{i}. {topic}: {text}")
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser():
    parser = argparse.ArgumentParser(
        prog="opapon",
        description="Parametric amplifier and WDM/TDM PON capacity calculator.",
    )
    parser.add_argument("--config", help="JSON config file (default: $OPAPON_CONFIG)")
    parser.add_argument("--json", action="store_true", help="print results as JSON")
    # the same flags after the subcommand; SUPPRESS keeps a value given
    # before the subcommand from being reset to the default
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="JSON config file (default: $OPAPON_CONFIG)")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print results as JSON")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--errata", action="store_true",
                        help="print the equation corrections used by the models")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("gain", parents=[common], help="analytic signal gain")
    _add_fiber_flags(p)
    p.add_argument("--pump-power", type=float, help="pump power, W")
    p.add_argument("--length", type=float, required=True, help="fiber length, km")
    p.add_argument("--s-p", type=float, help="parametric gain slope override, dB/(W km)")
    p.add_argument("--effective-length", action="store_true",
                   help="use the loss-limited effective length instead of L")
    _add_phase_flags(p)
    p.set_defaults(func=cmd_gain)

    p = sub.add_parser("ode-verify", parents=[common],
                       help="compare analytic gain with ODE integration")
    _add_fiber_flags(p, allow_zero_gamma=True)
    p.add_argument("--pump-power", type=float, help="pump power, W")
    p.add_argument("--length", type=float, required=True, help="fiber length, km")
    p.add_argument("--seed-ratio", type=float, default=1e-8,
                   help="seed signal power / pump power (default 1e-8)")
    p.add_argument("--tolerance", type=float, default=0.01,
                   help="allowed relative gain error (default 0.01)")
    p.add_argument("--method", choices=("rk4", "adaptive"))
    p.add_argument("--steps", type=int, help="number of fixed RK4 steps")
    _add_phase_flags(p)
    p.set_defaults(func=cmd_ode_verify)

    p = sub.add_parser("pulse", parents=[common], help="parametric pulse source")
    _add_fiber_flags(p)
    p.add_argument("--p0", type=float, help="peak pump power, W")
    p.add_argument("--fm", help="pump modulation frequency with unit, e.g. 10GHz")
    p.add_argument("--length", type=float, required=True, help="fiber length, km")
    p.add_argument("--chirp", type=float, default=0.0, help="chirp parameter C")
    p.add_argument("--n-channels", type=int, help="channels per link")
    p.add_argument("--n-links", type=int, help="links per fiber core")
    _add_phase_flags(p)
    p.set_defaults(func=cmd_pulse)

    p = sub.add_parser("capacity", parents=[common], help="PON bandwidth and delay")
    p.add_argument("--k", type=int, help="number of lasers K")
    p.add_argument("--n", type=int, help="AWG input ports N")
    p.add_argument("--m", type=int, help="AWG output ports M")
    p.add_argument("--w", type=int, help="number of users W")
    p.add_argument("--d", type=float, help="data rate, Gbit/s")
    p.add_argument("--slot", help="time slot T, e.g. 100us")
    p.add_argument("--tlaser", help="laser switching time, e.g. 25us")
    p.add_argument("--ttx", help="average slot per user T_tx, e.g. 100us")
    p.add_argument("--rho", type=float, help="network utilization in [0, 1]")
    p.add_argument("--n-links", type=int, help="number of links in the spectral plan")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("sweep", parents=[common], help="run a preset or spec-file sweep")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="figure preset id, fig2 ... fig18")
    src.add_argument("--spec", help="JSON sweep spec file")
    p.add_argument("-o", "--output", help="output directory")
    p.add_argument("--name", help="output file stem")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--workers", type=int, default=1, help="parallel grid evaluation")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("presets", parents=[common], help="list figure presets")
    p.set_defaults(func=cmd_presets)

    p = sub.add_parser("errata", parents=[common], help="print equation corrections")
    p.set_defaults(func=cmd_errata)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.errata:
        return cmd_errata()
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
