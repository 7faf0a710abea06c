"""Command-line front end: ``fluxlab <command> [--config FILE] [--out DIR] ...``.

Exit codes: 0 success, 2 configuration or input error, 3 numerical failure,
4 infeasible CZ calibration.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import budget, output
from .coupled import coupling_strengths_full, coupling_strengths_simplified, simplified_model
from .exceptions import CalibrationError, ConfigError, NumericError, ParameterError
from .config import load_config
from .fluxonium import spectrum
from .noise import (
    filter_function,
    mc_dephasing,
    modulation_slope_harmonic,
    sinusoidal_dephasing_exponent,
    static_dephasing_exponent,
    t2_from_decay,
)
from .pulses import calibrate_cz, conditional_phase_fixed_step, n_gate_conditional_phase, sinusoidal_schedule, v_phi_map
from .units import TWO_PI

EXIT_CONFIG, EXIT_NUMERIC, EXIT_CALIBRATION = 2, 3, 4


def _table(cfg, args, name, header, rows, **extra):
    comment = output.provenance(args.command, cfg, **extra)
    if cfg.fmt == "json":
        records = [dict(zip(header, row)) for row in rows]
        return output.write_json(args.out / f"{name}.json", {"provenance": comment, "rows": records})
    return output.write_csv(args.out / f"{name}.csv", header, rows, comment)


def cmd_spectrum(cfg, args):
    params = cfg.system.qubit_a if args.qubit == "A" else cfg.system.qubit_b
    flux = np.linspace(args.flux_min, args.flux_max, args.points)
    f = spectrum(params, flux, args.levels, cfg.system.n_basis)
    header = ["flux_phi0"] + [f"f0{k}_ghz" for k in range(1, args.levels + 1)]
    _table(cfg, args, "spectrum", header, np.column_stack([flux, f]).tolist(), qubit=args.qubit)
    output.svg_lines(
        args.out / "spectrum.svg", flux, {h: f[:, k] for k, h in enumerate(header[1:])},
        f"qubit {args.qubit} transitions", "flux (Phi_0)", "frequency (GHz)",
    )


def cmd_couplings(cfg, args):
    sys_ = cfg.system
    flux = np.linspace(args.flux_min, args.flux_max, args.points)
    names = ("g_xx", "g_zz", "g_xz", "g_zx")
    cols = {}
    if args.model in ("full", "both"):
        vals = np.array([coupling_strengths_full(sys_, x, x).as_array() for x in flux])
        cols.update({f"{n}_full_ghz": vals[:, k] for k, n in enumerate(names)})
    if args.model in ("simplified", "both"):
        tlp_a, tlp_b, j = simplified_model(sys_, cfg.fit_window)
        vals = np.array([coupling_strengths_simplified(tlp_a, tlp_b, j, x, x).as_array() for x in flux])
        cols.update({f"{n}_simplified_ghz": vals[:, k] for k, n in enumerate(names)})
    header = ["flux_phi0", *cols]
    _table(cfg, args, "couplings", header, np.column_stack([flux, *cols.values()]).tolist(), model=args.model)
    output.svg_lines(args.out / "couplings.svg", flux, cols, "coupling strengths", "Phi_A = Phi_B (Phi_0)", "GHz")
    summary = {"model": args.model}
    if args.model == "both":
        window = (flux >= 0.48 - 1e-12) & (flux <= 0.52 + 1e-12)
        gaps = {}
        for n in names:
            full = np.abs(cols[f"{n}_full_ghz"][window])
            simp = np.abs(cols[f"{n}_simplified_ghz"][window])
            # Gap relative to the largest full-model magnitude in the window.
            gaps[n] = float(np.max(np.abs(full - simp)) / np.max(full)) if full.size and np.max(full) > 0 else None
        summary["max_relative_gap_0.48_0.52"] = gaps
    output.write_json(args.out / "couplings_summary.json", summary)


def cmd_vphi_map(cfg, args):
    amps = np.linspace(args.amp_min, args.amp_max, args.points)
    m = v_phi_map(cfg.system, amps, amps, args.kind, args.tau_ns, args.model, args.rise_time_ns,
                  args.mod_freq_ghz, args.t_idle_ns, tol=cfg.quad_tol)
    header = ["amp_a_phi0"] + [f"amp_b={output.fmt(b)}" for b in amps]
    _table(cfg, args, "vphi_map", header, np.column_stack([amps, m.v_phi]).tolist(),
           kind=args.kind, tau_ns=args.tau_ns, units="rad/us")
    _table(cfg, args, "vphi_map_with_idle", header, np.column_stack([amps, m.v_phi_with_idle]).tolist(),
           kind=args.kind, tau_ns=args.tau_ns, t_idle_ns=args.t_idle_ns, units="rad/us")
    output.svg_heatmap(args.out / "vphi_map.svg", amps, amps, m.v_phi, "v_phi (rad/us)", "dPhi_B", "dPhi_A")
    invalid = [[float(amps[i]), float(amps[j]), str(e)] for (i, j), e in sorted(m.errors.items())]
    output.write_json(args.out / "vphi_map_summary.json", {
        "max_v_phi_rad_per_us": float(np.nanmax(m.v_phi)) if m.valid.any() else None,
        "invalid_cells": invalid,
    })


def cmd_calibrate_cz(cfg, args):
    res = calibrate_cz(cfg.system, args.delta_phi_a, args.mod_freq_ghz, args.t_cz_ns, args.t_idle_ns, args.model,
                       tol=cfg.quad_tol)
    sched = sinusoidal_schedule(args.delta_phi_a, res.delta_phi_b, args.mod_freq_ghz, args.t_cz_ns, args.t_idle_ns)
    check = conditional_phase_fixed_step(cfg.system, sched, args.model, n_intervals=4000)
    table = [[n, n_gate_conditional_phase(res, n)] for n in range(1, args.n_max + 1)]
    _table(cfg, args, "cz_ngate", ["n", "phi_wrapped_rad"], table)
    output.write_json(args.out / "cz_result.json", {
        "phi": res.phi,
        "zeta_a": res.zeta_a,
        "zeta_b": res.zeta_b,
        "delta_phi_b": res.delta_phi_b,
        "delta_phi_a": args.delta_phi_a,
        "mod_freq_ghz": args.mod_freq_ghz,
        "t_cz_ns": args.t_cz_ns,
        "t_idle_ns": args.t_idle_ns,
        "model": args.model,
        "phi_fixed_step_check": check,
        "n_gate": [{"n": n, "phi": p} for n, p in table],
    })


def cmd_dephasing(cfg, args):
    if args.alpha_ghz_per_phi0 is None:
        slope = abs(modulation_slope_harmonic(cfg.system.qubit_a, args.delta_phi))
    else:
        slope = args.alpha_ghz_per_phi0
    alpha = TWO_PI * 1e9 * slope
    times = np.linspace(args.t_max_ns / args.t_points, args.t_max_ns, args.t_points)
    controls = [("static", 0.0)] + [("sinusoidal", f) for f in args.mod_freqs_mhz]
    rows, t2 = [], {}
    for idx, (control, f_mhz) in enumerate(controls):
        decays = []
        for k, t_ns in enumerate(times):
            t = t_ns * 1e-9
            if control == "static":
                r = static_dephasing_exponent(alpha, t, cfg.noise)
            else:
                r = sinusoidal_dephasing_exponent(alpha, TWO_PI * f_mhz * 1e6, t, cfg.noise)
            mc_e = mc_s = float("nan")
            if args.mc:
                if control == "static":
                    wave = alpha
                else:
                    w_m = TWO_PI * f_mhz * 1e6
                    wave = lambda x, w_m=w_m: alpha * np.cos(w_m * x)  # noqa: E731 - cos slope, the default filter phase
                mc = mc_dephasing(wave, t, cfg.noise, args.mc, seed=[cfg.seed, idx, k])
                mc_e, mc_s = mc.exponent, mc.stderr
            decays.append(r.decay)
            rows.append([control, f_mhz, t_ns, r.exponent, r.decay, mc_e, mc_s])
        t2[f"{control}_{output.fmt(f_mhz)}MHz"] = t2_from_decay(times, np.array(decays))
    header = ["control", "mod_freq_mhz", "t_ns", "exponent", "decay", "mc_exponent", "mc_stderr"]
    _table(cfg, args, "dephasing", header, rows, alpha_ghz_per_phi0=slope)
    series = {}
    for control, f_mhz in controls:
        key = control if control == "static" else f"{output.fmt(f_mhz)} MHz"
        series[key] = [r[3] for r in rows if r[0] == control and r[1] == f_mhz]
    output.svg_lines(args.out / "dephasing.svg", times, series, "dephasing exponent", "t (ns)", "<dphi^2>/2")
    output.write_json(args.out / "dephasing_summary.json", {"alpha_ghz_per_phi0": slope, "t2_ns": t2})


def cmd_filter_function(cfg, args):
    f_mhz = np.linspace(args.f_min_mhz, args.f_max_mhz, args.points)
    w = TWO_PI * f_mhz * 1e6
    t = args.t_ns * 1e-9
    w_m = TWO_PI * args.mod_freq_mhz * 1e6
    cols = {f"g_{k}": filter_function(k, w, t, w_m) for k in args.kinds}
    _table(cfg, args, "filter_function", ["freq_mhz", *cols], np.column_stack([f_mhz, *cols.values()]).tolist(),
           t_ns=args.t_ns, mod_freq_mhz=args.mod_freq_mhz)
    output.svg_lines(args.out / "filter_function.svg", f_mhz, cols, f"g_n at t = {args.t_ns} ns", "f (MHz)", "g_n")
    summary = {k: {"argmax_mhz": float(f_mhz[np.argmax(v)]), "max": float(np.max(v))} for k, v in cols.items()}
    output.write_json(args.out / "filter_function_summary.json", summary)


def cmd_error_budget(cfg, args):
    text = None
    if args.inputs is not None:
        try:
            text = Path(args.inputs).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read inputs {args.inputs}: {exc}") from exc
    inputs = budget.load_inputs(text, str(args.inputs))
    report = budget.error_budget_report(cfg.system, cfg.noise, inputs)
    report["provenance"] = output.provenance(args.command, cfg)
    output.write_json(args.out / "error_budget.json", report)


def build_parser():
    p = argparse.ArgumentParser(prog="fluxlab", description="Coupled-fluxonium gate simulator.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML config overlaid on the bundled defaults")
    common.add_argument("--out", type=Path, help="output directory (default from config)")
    common.add_argument("--format", choices=("csv", "json"), help="table format")
    common.add_argument("--seed", type=int, help="random seed override")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="single-qubit transition frequencies vs flux")
    s.add_argument("--qubit", choices=("A", "B"), default="A")
    s.add_argument("--flux-min", type=float, default=0.3)
    s.add_argument("--flux-max", type=float, default=0.7)
    s.add_argument("--points", type=int, default=401)
    s.add_argument("--levels", type=int, default=3)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("couplings", parents=[common], help="g_xx, g_zz, g_xz, g_zx along Phi_A = Phi_B")
    s.add_argument("--flux-min", type=float, default=0.45)
    s.add_argument("--flux-max", type=float, default=0.55)
    s.add_argument("--points", type=int, default=101)
    s.add_argument("--model", choices=("full", "simplified", "both"), default="both")
    s.set_defaults(func=cmd_couplings)

    s = sub.add_parser("vphi-map", parents=[common], help="conditional-phase speed over pulse amplitudes")
    s.add_argument("--amp-min", type=float, default=-0.15)
    s.add_argument("--amp-max", type=float, default=0.15)
    s.add_argument("--points", type=int, default=7)
    s.add_argument("--kind", choices=("constant", "square_tanh", "net_zero", "sinusoidal"), default="square_tanh")
    s.add_argument("--tau-ns", type=float, default=200.0)
    s.add_argument("--rise-time-ns", type=float, default=2.0)
    s.add_argument("--mod-freq-ghz", type=float, default=0.05)
    s.add_argument("--t-idle-ns", type=float, default=20.0)
    s.add_argument("--model", choices=("full", "simplified"), default="full")
    s.set_defaults(func=cmd_vphi_map)

    s = sub.add_parser("calibrate-cz", parents=[common], help="companion amplitude for a CZ gate")
    s.add_argument("--delta-phi-a", type=float, default=0.12)
    s.add_argument("--mod-freq-ghz", type=float, default=0.05)
    s.add_argument("--t-cz-ns", type=float, default=20.0)
    s.add_argument("--t-idle-ns", type=float, default=20.0)
    s.add_argument("--model", choices=("full", "simplified"), default="full")
    s.add_argument("--n-max", type=int, default=16)
    s.set_defaults(func=cmd_calibrate_cz)

    s = sub.add_parser("dephasing", parents=[common], help="1/f dephasing exponents under flux control")
    s.add_argument("--alpha-ghz-per-phi0", type=float, help="slope amplitude; default from --delta-phi")
    s.add_argument("--delta-phi", type=float, default=0.0673, help="modulation amplitude of qubit A")
    s.add_argument("--mod-freqs-mhz", type=float, nargs="+", default=[0.5, 5.0, 50.0])
    s.add_argument("--t-max-ns", type=float, default=20.0)
    s.add_argument("--t-points", type=int, default=10)
    s.add_argument("--mc", type=int, default=0, help="Monte Carlo realisations per point (0 disables)")
    s.set_defaults(func=cmd_dephasing)

    s = sub.add_parser("filter-function", parents=[common], help="noise filter functions g_n")
    s.add_argument("--kinds", nargs="+", choices=("static", "net_zero", "sinusoidal"),
                   default=["static", "net_zero", "sinusoidal"])
    s.add_argument("--t-ns", type=float, default=20.0)
    s.add_argument("--mod-freq-mhz", type=float, default=50.0)
    s.add_argument("--f-min-mhz", type=float, default=0.0)
    s.add_argument("--f-max-mhz", type=float, default=200.0)
    s.add_argument("--points", type=int, default=801)
    s.set_defaults(func=cmd_filter_function)

    s = sub.add_parser("error-budget", parents=[common], help="gate-error consistency report")
    s.add_argument("--inputs", type=Path, help="budget inputs YAML (default: bundled measured values)")
    s.set_defaults(func=cmd_error_budget)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.format is not None:
            overrides["output"] = {"format": args.format}
        cfg = load_config(args.config, overrides)
        args.out = args.out or cfg.out_dir
        args.out.mkdir(parents=True, exist_ok=True)
        args.func(cfg, args)
    except (ConfigError, ParameterError) as exc:
        print(f"fluxlab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CalibrationError as exc:
        print(f"fluxlab: calibration infeasible: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION
    except NumericError as exc:
        print(f"fluxlab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
