"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

import numpy as np

from . import config
from .errors import FanoutError
from .network import (
    assemble_dense,
    build_layers,
    propagate,
    single_port_input,
    unitarity_residual,
)
from .power import TechProfile, equal_pant_comparison
from .synthesis import TargetVector, TreeSettings, program
from .timing import PRESETS, TimingBudget, ofdm_report, preset
from .units import round_half_away

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2

SYNTHESIS_TOL = 1e-10
UNITARITY_TOL = 1e-12
POWER_RTOL = 1e-12

TABLE_NS = (2, 4, 8, 16)


def _emit(args, text: str) -> None:
    if args.out:
        config.atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _json(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def _n_list(values: Sequence[int]) -> list[int]:
    for n in values:
        if n < 1 or n & (n - 1):
            raise ValueError(f"N must be a power of two, got {n}")
    return list(values)


def cmd_synth(args) -> int:
    x = config.load_target(args.target)
    target = TargetVector(x, args.power)
    settings = program(target, global_phase=args.theta_s)
    n_alpha = settings.n - 1
    msg = (f"N={settings.n} (padded from {settings.padded_from}): {n_alpha} split angles + "
           f"{settings.n} output phases = {settings.num_controls} controls")
    if settings.renormalized:
        msg += "; target renormalized to the requested total power"
    print(msg, file=sys.stderr)
    _emit(args, _json(config.settings_to_dict(settings)))
    return EXIT_OK


def _simulate_one(settings: TreeSettings, power: float, target: np.ndarray | None,
                  checks: bool) -> dict[str, Any]:
    model = build_layers(settings)
    wave = single_port_input(settings.n, power)
    out = propagate(model, wave)
    report: dict[str, Any] = {
        "N": settings.n,
        "output": [[float(z.real), float(z.imag)] for z in out],
    }
    ok = True
    if target is not None:
        t = np.zeros(settings.n, dtype=complex)
        t[:target.size] = target
        res = float(np.max(np.abs(out - t)))
        report["synthesis_residual"] = res
        ok &= res < SYNTHESIS_TOL
    if checks:
        u = unitarity_residual(assemble_dense(model))
        p_res = abs(float(np.vdot(out, out).real) - power) / power
        report["unitarity_residual"] = u
        report["power_residual"] = p_res
        ok &= u < UNITARITY_TOL and p_res < POWER_RTOL
    report["passed"] = bool(ok)
    return report


def cmd_simulate(args) -> int:
    checks = args.checks == "on"
    if args.settings is None:
        return _simulate_random(args, checks)
    settings = config.load_settings(args.settings)
    target = None
    power = 1.0 if args.power is None else args.power
    if args.target is not None:
        target = config.load_target(args.target)
        if args.power is None:
            power = float(np.vdot(target, target).real)
        else:
            target = target / np.linalg.norm(target) * np.sqrt(power)
    report = _simulate_one(settings, power, target, checks)
    report["seed"] = args.seed
    if args.matrix_out:
        config.atomic_write(args.matrix_out, config.matrix_to_csv(assemble_dense(build_layers(settings))))
    _emit(args, _json(report))
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def _simulate_random(args, checks: bool) -> int:
    rng = np.random.default_rng(args.seed)
    worst = {"synthesis_residual": 0.0, "unitarity_residual": 0.0, "power_residual": 0.0}
    passed = True
    for _ in range(args.trials):
        x = rng.standard_normal(args.n) + 1j * rng.standard_normal(args.n)
        power = float(np.vdot(x, x).real)
        r = _simulate_one(program(TargetVector(x, power)), power, x, checks)
        passed &= r["passed"]
        for key in worst:
            worst[key] = max(worst[key], r.get(key, 0.0))
    report = {"seed": args.seed, "N": args.n, "trials": args.trials, "passed": bool(passed)}
    report.update({f"max_{k}": v for k, v in worst.items()})
    _emit(args, _json(report))
    return EXIT_OK if passed else EXIT_VERIFY


def loss_table(profiles: Sequence[TechProfile], ns: Sequence[int]) -> tuple[list[str], list[list]]:
    header = ["profile", "L_phi_dB", "p_phi_W"]
    header += [f"L_net_N{n}_dB" for n in ns]
    header += [f"L_net_N{n}_dB_rounded" for n in ns]
    rows = []
    for p in profiles:
        exact = [p.stress_loss_db(n) for n in ns]
        rows.append([p.name, p.l_phi, p.p_phi]
                    + [f"{v:.6f}" for v in exact]
                    + [f"{round_half_away(v, 1):.1f}" for v in exact])
    return header, rows


def cmd_loss(args) -> int:
    profiles = config.load_profiles(args.profiles)
    ns = _n_list(args.n)
    if args.format == "json":
        data = [{"profile": p.name, "L_phi_dB": p.l_phi, "p_phi_W": p.p_phi,
                 "L_net_dB": {str(n): p.stress_loss_db(n) for n in ns},
                 "L_net_dB_rounded": {str(n): round_half_away(p.stress_loss_db(n), 1) for n in ns}}
                for p in profiles]
        _emit(args, _json({"N": ns, "rows": data}))
    else:
        _emit(args, config.to_csv(*loss_table(profiles, ns)))
    return EXIT_OK


def power_rows(args, ns: Sequence[int]):
    profiles = config.load_profiles(args.profiles)
    coeffs = config.load_coeffs(args.coeffs)
    rows = equal_pant_comparison(ns, args.p_ant, profiles, coeffs, eta_pa=args.eta_pa,
                                 p_ctrl_fixed=args.p_ctrl,
                                 loss_decimals=None if args.unrounded_loss else 1)
    if rows and rows[0].out_of_range:
        lo, hi = coeffs.valid_p_ant
        print(f"warning: p_ant={args.p_ant} W outside the digital model's fitted range "
              f"[{lo}, {hi}] W", file=sys.stderr)
    return profiles, rows


def cmd_power(args) -> int:
    if not args.p_ant > 0:
        raise ValueError("p_ant must be positive")
    profiles, rows = power_rows(args, _n_list(args.n))
    names = [p.name for p in profiles]
    if args.format == "json":
        data = [{"N": r.n, "P_ant_tot_W": r.p_ant_tot, "digital_W": r.digital,
                 "analog_W": dict(r.analog), "L_net_dB": dict(r.l_net_db),
                 "out_of_range": r.out_of_range} for r in rows]
        _emit(args, _json({"p_ant_W": args.p_ant, "eta_pa": args.eta_pa, "rows": data}))
        return EXIT_OK
    fmt = "{:.6f}" if args.full_precision else "{:.2f}"
    header = ["N", "P_ant_tot_W", "digital_W"] + names + ["out_of_range"]
    table = []
    for r in rows:
        shown = r if args.full_precision else r.rounded(2)
        table.append([r.n, fmt.format(shown.p_ant_tot), fmt.format(shown.digital)]
                     + [fmt.format(shown.analog[k]) for k in names]
                     + [int(r.out_of_range)])
    _emit(args, config.to_csv(header, table))
    return EXIT_OK


def cmd_sweep(args) -> int:
    """Long-form total DC power versus N, one row per (N, architecture)."""
    if not args.p_ant > 0:
        raise ValueError("p_ant must be positive")
    _n_list([args.max_n])
    ns = [2 ** k for k in range(1, args.max_n.bit_length())]
    profiles, rows = power_rows(args, ns)
    table = []
    for r in rows:
        table.append([r.n, "digital", f"{r.digital:.6f}", int(r.out_of_range)])
        for p in profiles:
            table.append([r.n, p.name, f"{r.analog[p.name]:.6f}", int(r.out_of_range)])
    if args.format == "json":
        _emit(args, _json([dict(zip(["N", "series", "total_W", "out_of_range"], row)) for row in table]))
    else:
        _emit(args, config.to_csv(["N", "series", "total_W", "out_of_range"], table))
    return EXIT_OK


def cmd_timing(args) -> int:
    if args.t_sw is not None:
        budget = TimingBudget(t_tune=args.t_sw, t_load=args.t_load, t_settle=args.t_settle)
        source = "T_sw"
    else:
        profiles = {p.name: p for p in config.load_profiles(args.profiles)}
        if args.profile not in profiles:
            raise ValueError(f"unknown profile {args.profile!r}; available: {sorted(profiles)}")
        budget = TimingBudget(t_tune=profiles[args.profile].t_tune,
                              t_load=args.t_load, t_settle=args.t_settle)
        source = args.profile
    numerology = preset(args.preset)
    rep = ofdm_report(budget, numerology)
    data = {
        "source": source,
        "preset": args.preset,
        "numerology": numerology.label,
        "T_sw_us": rep.t_sw * 1e6,
        "T_ofdm_us": rep.t_ofdm * 1e6,
        "T_cp_us": numerology.t_cp * 1e6,
        "feasible": rep.feasible,
        "T_ss_us": rep.t_ss * 1e6,
        "fits_in_cp": rep.fits_in_cp,
        "clamped": rep.clamped,
    }
    if args.format == "json":
        _emit(args, _json(data))
    else:
        _emit(args, config.to_csv(list(data), [[
            f"{v:.4f}" if isinstance(v, float) else v for v in data.values()]]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profiles", help=f"technology profile JSON (default: ${config.PROFILES_ENV} or built-in)")
    common.add_argument("--coeffs", help="digital front-end coefficient JSON")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output path (written atomically); stdout if omitted")

    parser = argparse.ArgumentParser(prog="unitary-fanout", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[common], help="closed-form tree settings for a target")
    p.add_argument("target", help="CSV file of 're,im' lines, or inline 're,im;re,im;...'")
    p.add_argument("--power", type=float, default=None, help="total power P in W (default |x|^2)")
    p.add_argument("--theta-s", type=float, default=0.0, help="common input phase offset (rad)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simulate", parents=[common], help="propagate settings and verify")
    p.add_argument("settings", nargs="?", help="settings JSON; omit for seeded random trials")
    p.add_argument("--power", type=float, default=None)
    p.add_argument("--target", help="expected output (file or inline)")
    p.add_argument("--checks", choices=("on", "off"), default="on")
    p.add_argument("--matrix-out", help="write the dense transfer matrix as CSV")
    p.add_argument("--n", type=int, default=16, help="antenna count for random trials")
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("loss", parents=[common], help="stress-case insertion loss table")
    p.add_argument("--n", type=int, nargs="+", default=list(TABLE_NS))
    p.set_defaults(func=cmd_loss)

    for name, func, ns, hlp in (("power", cmd_power, TABLE_NS, "equal-p_ant DC power table"),
                                ("sweep", cmd_sweep, None, "long-form DC power sweep over N")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("--p-ant", type=float, default=0.2, help="per-antenna power (W)")
        p.add_argument("--eta-pa", type=float, default=0.5)
        p.add_argument("--p-ctrl", type=float, default=0.0, help="fixed controller overhead (W)")
        p.add_argument("--unrounded-loss", action="store_true",
                       help="use full-precision loss instead of the 0.1 dB table values")
        if ns is None:
            p.add_argument("--max-n", type=int, default=4096)
        else:
            p.add_argument("--n", type=int, nargs="+", default=list(ns))
            p.add_argument("--full-precision", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("timing", parents=[common], help="symbol-timing feasibility")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--profile", help="technology profile name")
    src.add_argument("--t-sw", type=float, help="reconfiguration time in seconds")
    p.add_argument("--preset", choices=sorted(PRESETS), default="long")
    p.add_argument("--t-load", type=float, default=0.0)
    p.add_argument("--t-settle", type=float, default=0.0)
    p.set_defaults(func=cmd_timing)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FanoutError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
