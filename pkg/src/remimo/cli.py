"""Command-line front end: code design, decoder verification, BER sweeps.

Exit codes: 0 success, 2 bad flags or configuration, 3 design rejected
(requested rotation is not uniquely decodable).
"""

from __future__ import annotations

import argparse
import math
import sys

from . import antenna
from .constellation import build_constellation
from .encoder import RotationAngles, min_cgd, optimal_theta1, validate_injectivity
from .errors import ConfigError, DesignRejectedError, RemimoError
from .harness import SimConfig, run_ber, verify_decoders, with_overrides, write_csv

_MODS = {"bpsk": ("psk", 2), "qpsk": ("psk", 4), "8psk": ("psk", 8),
         "16qam": ("qam", 16)}

_PHYSICAL_DEFAULTS = dict(channel_mode="physical", k_r=10 ** 0.5,
                          fc=60e9, d0=1.0, d=25.0, gamma_pl=4.0,
                          mu_s_db=0.0, sigma_s_db=9.0)

_CONFIG_KEYS = {
    "mod": str, "theta1": float, "channel": str, "snr": str, "seed": int,
    "decoder": str, "max_trials": int, "target_errors": int, "power": float,
    "batch_size": int, "k_r_db": float, "fc_hz": float, "d0_m": float,
    "d_m": float, "pathloss_exponent": float, "mu_s_db": float,
    "sigma_s_db": float, "phase_noise_var_tx": float,
    "phase_noise_var_rx": float,
}


def parse_snr_spec(spec: str) -> tuple[float, ...]:
    """'a:b:step' inclusive grid, or a comma-separated list."""
    try:
        if ":" in spec:
            lo, hi, step = (float(x) for x in spec.split(":"))
            if step <= 0 or hi < lo:
                raise ValueError
            n = int(math.floor((hi - lo) / step + 1e-9)) + 1
            return tuple(round(lo + i * step, 10) for i in range(n))
        return tuple(float(x) for x in spec.split(","))
    except ValueError:
        raise ConfigError(f"bad SNR spec {spec!r}; expected a:b:step or a,b,c")


def load_config_file(path: str) -> dict:
    """Parse a 'key = value' document; '#' starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for ln, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{ln}: expected 'key = value'")
                key, _, val = line.partition("=")
                key, val = key.strip(), val.strip()
                if key not in _CONFIG_KEYS:
                    raise ConfigError(f"{path}:{ln}: unknown key {key!r}")
                try:
                    values[key] = _CONFIG_KEYS[key](val)
                except ValueError:
                    raise ConfigError(f"{path}:{ln}: bad value for {key!r}")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    return values


def build_sim_config(args) -> SimConfig:
    """Merge config-file values and flags (flags win) into a SimConfig."""
    raw = load_config_file(args.config) if args.config else {}
    for flag, key in (("mod", "mod"), ("channel", "channel"), ("snr", "snr"),
                      ("seed", "seed"), ("decoder", "decoder"),
                      ("trials", "max_trials"),
                      ("target_errors", "target_errors")):
        val = getattr(args, flag, None)
        if val is not None:
            raw[key] = val
    if getattr(args, "phase_noise", None) is not None:
        raw["phase_noise_var_tx"] = args.phase_noise
        raw["phase_noise_var_rx"] = args.phase_noise

    kwargs = {}
    mod = raw.pop("mod", "qpsk")
    if mod not in _MODS:
        raise ConfigError(f"unknown modulation {mod!r}; pick from {sorted(_MODS)}")
    kwargs["scheme"], kwargs["m"] = _MODS[mod]
    channel = raw.pop("channel", "normalized")
    if channel == "physical":
        kwargs.update(_PHYSICAL_DEFAULTS)
    elif channel == "normalized":
        kwargs["channel_mode"] = "normalized"
    else:
        raise ConfigError("channel must be 'normalized' or 'physical'")
    if "snr" in raw:
        kwargs["snr_db"] = parse_snr_spec(raw.pop("snr"))
    if "k_r_db" in raw:
        kwargs["k_r"] = 10 ** (raw.pop("k_r_db") / 10.0)
    rename = {"fc_hz": "fc", "d0_m": "d0", "d_m": "d",
              "pathloss_exponent": "gamma_pl",
              "phase_noise_var_tx": "pn_var_tx",
              "phase_noise_var_rx": "pn_var_rx"}
    for key, val in raw.items():
        kwargs[rename.get(key, key)] = val
    try:
        return SimConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc))


def _resolve_mod(name: str):
    if name not in _MODS:
        raise ConfigError(f"unknown modulation {name!r}; pick from {sorted(_MODS)}")
    return _MODS[name]


def cmd_design(args) -> int:
    scheme, m = _resolve_mod(args.mod)
    c = build_constellation(scheme, m)
    theta1 = optimal_theta1(c)
    rot = RotationAngles.from_theta1(theta1)
    print(f"modulation       : {args.mod} ({scheme.upper()}, M={m})")
    print(f"theta1           : {theta1:.9f} rad ({math.degrees(theta1):.4f} deg)")
    print(f"theta2           : {rot.theta2:.9f} rad")
    print(f"min coding gain  : {min_cgd(c, rot):.9f}")
    print(f"injectivity      : {validate_injectivity(c, rot):.9f}")
    print("cgd at fixed angles:")
    for frac, label in ((0.0, "0"), (1 / 8, "pi/8"), (1 / 4, "pi/4"),
                        (3 / 8, "3*pi/8"), (1 / 2, "pi/2")):
        r = RotationAngles.from_theta1(frac * math.pi)
        print(f"  theta1 = {label:>6}: {min_cgd(c, r):.9f}")
    if args.k is not None and args.b3db is not None:
        g = antenna.optimize_gain(args.k, args.b3db)
        print(f"antenna optimum  : g1(phi1) = {g:.9f} "
              f"(g_up = {antenna.gain_upper_bound(args.b3db):.9f}, "
              f"cost = {antenna.gain_cost(g, args.k, args.b3db):.6e})")
    return 0


def cmd_verify(args) -> int:
    cfg = build_sim_config(args)
    print(f"config hash      : {cfg.config_hash()}  seed: {cfg.seed}")
    report = verify_decoders(cfg, args.trials or 10_000, n_workers=args.workers)
    print(f"trials           : {report.trials}")
    print(f"mismatches       : {report.mismatches}")
    print(f"cost per codeword: exhaustive={report.mean_cost_exhaustive:.1f} "
          f"pair={report.mean_cost_pair:.1f} "
          f"conditional={report.mean_cost_conditional:.1f}")
    return 0 if report.mismatches == 0 else 1


def cmd_simulate(args) -> int:
    cfg = build_sim_config(args)
    if args.trials is not None:
        cfg = with_overrides(cfg, max_trials=args.trials)
    print(f"config hash      : {cfg.config_hash()}  seed: {cfg.seed}")
    curve = run_ber(cfg, n_workers=args.workers)
    write_csv(curve, args.out)
    worst = max(curve.points, key=lambda p: p.ber)
    print(f"wrote {len(curve.points)} SNR points to {args.out} "
          f"(max BER {worst.ber:.3e} at {worst.snr_db} dB)")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="remimo",
        description="Design, verify and simulate the rate-2 block code for "
                    "2x2 reconfigurable-antenna links.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="print the rotation design and "
                                             "optional antenna-gain optimum")
    p_design.add_argument("--mod", default="qpsk", choices=sorted(_MODS))
    p_design.add_argument("--k", type=float, default=None,
                          help="real channel coupling ratio for the gain optimum")
    p_design.add_argument("--b3db", type=float, default=None,
                          help="3-dB beamwidth in radians")
    p_design.set_defaults(func=cmd_design)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="key = value config file")
    common.add_argument("--mod", default=None, choices=sorted(_MODS))
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--snr", default=None, help="grid as a:b:step or list a,b,c")
    common.add_argument("--decoder", default=None,
                        choices=("cond", "pair", "exhaustive"))
    common.add_argument("--channel", default=None,
                        choices=("normalized", "physical"))
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--target-errors", dest="target_errors", type=int,
                        default=None)
    common.add_argument("--phase-noise", dest="phase_noise", type=float,
                        default=None, help="Wiener increment variance (rad^2/slot)")
    common.add_argument("--workers", type=int, default=1)

    p_verify = sub.add_parser("verify", parents=[common],
                              help="decoder equivalence and complexity counters")
    p_verify.set_defaults(func=cmd_verify)

    p_sim = sub.add_parser("simulate", parents=[common],
                           help="Monte-Carlo BER sweep to CSV")
    p_sim.add_argument("--out", default="ber.csv")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags and 0 on --help; pass both through
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DesignRejectedError as exc:
        print(f"design rejected: {exc}", file=sys.stderr)
        return 3
    except RemimoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
