"""Command-line front end: run simulations and sweeps from presets or model
files and emit deterministic CSV artifacts.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, kinetics, network, spectral, sweep, vibronic
from .models import ModelFileError, ModelPreset, get_preset, load_network_file, model_to_dict
from .quantum_core import ConvergenceError, NotHermitianError


class ConfigError(ValueError):
    pass


def _model_hash(preset: ModelPreset) -> str:
    payload = json.dumps(model_to_dict(preset), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


def provenance_line(command: str, preset: ModelPreset, params: dict) -> str:
    parts = ", ".join(f"{k}={v}" for k, v in sorted(params.items()))
    return (
        f"# phonon-antenna {__version__} | command: {command} | "
        f"model: {preset.name}@{_model_hash(preset)} | {parts}\n"
    )


def parse_axis(spec: str) -> tuple[str, np.ndarray]:
    """Parse `name=start:stop:step` into (name, values)."""
    if "=" not in spec:
        raise ConfigError(f"axis spec {spec!r} must look like name=start:stop:step")
    name, _, rng = spec.partition("=")
    name = name.strip()
    if name not in sweep.AXIS_NAMES:
        raise ConfigError(f"unknown axis {name!r}; expected one of {sweep.AXIS_NAMES}")
    pieces = rng.split(":")
    if len(pieces) != 3:
        raise ConfigError(f"axis range {rng!r} must be start:stop:step")
    try:
        start, stop, step = (float(p) for p in pieces)
    except ValueError as exc:
        raise ConfigError(f"axis range {rng!r}: {exc}") from None
    if step <= 0:
        raise ConfigError("axis step must be positive")
    if stop < start:
        raise ConfigError("axis stop must be >= start")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    values = start + step * np.arange(count)
    return name, values


def load_model(args) -> ModelPreset:
    if getattr(args, "preset", None) and getattr(args, "model", None):
        raise ConfigError("give either --preset or --model, not both")
    if getattr(args, "model", None):
        return load_network_file(args.model)
    name = getattr(args, "preset", None) or "three-site"
    return get_preset(name)


def apply_overrides(preset: ModelPreset, args) -> ModelPreset:
    import dataclasses

    if getattr(args, "temperature", None) is not None:
        preset = dataclasses.replace(preset, temperature=args.temperature)
    if getattr(args, "t", None) is not None:
        preset = dataclasses.replace(preset, t_eval=args.t)
    return preset


def _write_output(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_simulate(args) -> int:
    preset = apply_overrides(load_model(args), args)
    dt = args.dt if args.dt is not None else kinetics.DEFAULT_DT
    basis = network.build_exciton_basis(preset.network)
    rates = network.redfield_rates(
        basis, preset.bath, spectral.ThermalBathContext(preset.temperature)
    )
    trace = kinetics.propagate(
        rates, preset.network.initial_site, basis, t_final=preset.t_eval, dt=dt
    )
    header = provenance_line(
        "simulate", preset, {"t_eval_ps": preset.t_eval, "dt_ps": dt,
                             "temperature_K": preset.temperature}
    )
    _write_output(args.output, header + trace.to_csv())
    print(f"p_sink({preset.t_eval!r} ps) = {trace.sink[-1]:.12g}")
    return 0


def _grid_from_args(args) -> sweep.SweepGrid:
    if not args.axis1:
        raise ConfigError("--axis1 is required")
    name1, values1 = parse_axis(args.axis1)
    if args.axis2:
        name2, values2 = parse_axis(args.axis2)
        return sweep.SweepGrid(
            axis1_name=name1, axis1_values=values1,
            axis2_name=name2, axis2_values=values2,
        )
    return sweep.SweepGrid(axis1_name=name1, axis1_values=values1)


def _report_argmax(landscape: sweep.Landscape) -> None:
    v1, v2, best, ties = sweep.argmax(landscape)
    where = f"{landscape.grid.axis1_name}={v1!r}"
    if v2 is not None:
        where += f", {landscape.grid.axis2_name}={v2!r}"
    print(f"argmax: {where}, value={best:.12g}")
    if len(ties) > 1:
        print(f"ties: {ties}")
    if landscape.failures:
        print(f"failed points: {len(landscape.failures)}", file=sys.stderr)
        for index, message in landscape.failures[:5]:
            print(f"  point {tuple(index)}: {message}", file=sys.stderr)


def cmd_sweep(args) -> int:
    preset = apply_overrides(load_model(args), args)
    grid = _grid_from_args(args)
    landscape = sweep.run_sweep(
        preset, grid, engine="redfield", t_eval=preset.t_eval, dt=args.dt,
        jobs=args.jobs,
    )
    header = provenance_line(
        "sweep", preset, {"t_eval_ps": landscape.t_eval, "engine": "redfield",
                          "axis1": args.axis1, "axis2": args.axis2 or ""}
    )
    _write_output(args.output, header + landscape.to_csv())
    _report_argmax(landscape)
    return 0


def cmd_fom(args) -> int:
    preset = apply_overrides(load_model(args), args)
    grid = _grid_from_args(args)
    landscape = sweep.f_antenna_map(preset, grid, omega_H=args.omega_h)
    header = provenance_line(
        "fom", preset, {"omega_H": args.omega_h, "axis1": args.axis1,
                        "axis2": args.axis2 or ""}
    )
    _write_output(args.output, header + landscape.to_csv())
    _report_argmax(landscape)
    return 0


def cmd_lindblad(args) -> int:
    preset = apply_overrides(load_model(args), args)
    dt = args.dt if args.dt is not None else vibronic.DEFAULT_DT
    fock_dim = args.fock_dim
    if args.axis1:
        name, values = parse_axis(args.axis1)
        grid = sweep.SweepGrid(axis1_name=name, axis1_values=values)
        landscape = sweep.run_sweep(
            preset, grid, engine="lindblad", t_eval=args.t or 10.0, dt=dt,
            fock_dim=fock_dim, osc_freq=args.osc_freq, jobs=args.jobs,
        )
        header = provenance_line(
            "lindblad", preset,
            {"t_eval_ps": landscape.t_eval, "fock_dim": fock_dim, "dt_ps": dt,
             "axis1": args.axis1},
        )
        _write_output(args.output, header + landscape.to_csv())
        _report_argmax(landscape)
        return 0
    model = vibronic.VibronicModel(
        network=preset.network,
        osc_freq=args.osc_freq,
        temperature=preset.temperature,
        fock_dim=fock_dim,
        lam=getattr(preset.bath, "lam", 35.0),
    )
    t_final = args.t or 10.0
    trace = vibronic.propagate_vibronic(model, t_final=t_final, dt=dt)
    header = provenance_line(
        "lindblad", preset,
        {"t_ps": t_final, "fock_dim": fock_dim, "dt_ps": dt,
         "osc_freq": args.osc_freq, "coupling_g": model.g},
    )
    buf = io.StringIO()
    trace.to_csv(buf)
    _write_output(args.output, header + buf.getvalue())
    totals = trace.populations.sum(axis=1)
    print(f"p_sink({t_final!r} ps) = {trace.sink[-1]:.12g}")
    print(f"trace conservation: max |tr-1| = {np.abs(totals - 1.0).max():.3e}")
    return 0


def cmd_reproduce_figures(args) -> int:
    """Chain the standard simulation set into CSV files."""
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    ns = argparse.Namespace(
        preset="three-site", model=None, temperature=None, t=None, dt=None,
        jobs=args.jobs, output=None,
    )

    ns.output = str(outdir / "coupling_energy_landscape.csv")
    ns.axis1, ns.axis2 = "J12=-150:150:5", "epsilon2=100:400:5"
    cmd_sweep(ns)
    print(f"wrote {ns.output}")

    ns.output = str(outdir / "bath_peak_sweep.csv")
    ns.axis1, ns.axis2 = "omega_H_bath=50:500:5", None
    cmd_sweep(ns)
    print(f"wrote {ns.output}")

    ns.output = str(outdir / "f_antenna_map.csv")
    ns.axis1, ns.axis2 = "J12=-150:150:5", "epsilon2=100:400:5"
    ns.omega_h = 180.0
    cmd_fom(ns)
    print(f"wrote {ns.output}")

    ns.output = str(outdir / "vibronic_trace.csv")
    ns.axis1 = ns.axis2 = None
    ns.t, ns.osc_freq, ns.fock_dim = 10.0, 200.0, args.fock_dim
    ns.dt = None
    cmd_lindblad(ns)
    print(f"wrote {ns.output}")

    ns.output = str(outdir / "vibronic_mode_sweep.csv")
    ns.axis1 = "omega_H_osc=150:350:5"
    ns.t = 10.0
    cmd_lindblad(ns)
    print(f"wrote {ns.output}")

    ns.output = str(outdir / "vibronic_coupling_energy_landscape.csv")
    ns.axis1, ns.axis2 = "J12=40:160:20", "epsilon2=180:360:30"
    ns.t = 10.0
    _vibronic_landscape(ns)
    print(f"wrote {ns.output}")
    return 0


def _vibronic_landscape(args) -> None:
    preset = apply_overrides(load_model(args), args)
    grid = _grid_from_args(args)
    landscape = sweep.run_sweep(
        preset, grid, engine="lindblad", t_eval=args.t or 10.0,
        dt=args.dt, fock_dim=args.fock_dim, osc_freq=args.osc_freq, jobs=args.jobs,
    )
    header = provenance_line(
        "lindblad-landscape", preset,
        {"t_eval_ps": landscape.t_eval, "fock_dim": args.fock_dim,
         "axis1": args.axis1, "axis2": args.axis2},
    )
    _write_output(args.output, header + landscape.to_csv())
    _report_argmax(landscape)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phonon-antenna",
        description="Exciton transport through structured vibrational environments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, t_help):
        p.add_argument("--preset", help="built-in model name (default: three-site)")
        p.add_argument("--model", help="path to a JSON model file")
        p.add_argument("--temperature", type=float, help="override temperature (K)")
        p.add_argument("--t", type=float, help=t_help)
        p.add_argument("--dt", type=float, help="integrator step (ps)")
        p.add_argument("-o", "--output", help="output CSV path (default: stdout)")
        p.add_argument(
            "--jobs",
            type=int,
            default=int(os.environ.get("PHONON_ANTENNA_JOBS", "0")) or None,
            help="cap on concurrently evaluated grid points "
            "(default: env PHONON_ANTENNA_JOBS or unlimited)",
        )

    p = sub.add_parser("simulate", help="population trace of the rate equations")
    add_common(p, "evaluation time (ps); default from the model")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="efficiency landscape over parameter axes")
    add_common(p, "evaluation time (ps); default from the model")
    p.add_argument("--axis1", required=True, help="axis spec name=start:stop:step")
    p.add_argument("--axis2", help="optional second axis spec")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fom", help="ladder-matching figure-of-merit map")
    add_common(p, "(unused)")
    p.add_argument("--axis1", required=True, help="axis spec name=start:stop:step")
    p.add_argument("--axis2", help="optional second axis spec")
    p.add_argument("--omega-h", type=float, default=200.0,
                   help="target vibrational frequency (cm^-1)")
    p.set_defaults(func=cmd_fom)

    p = sub.add_parser("lindblad", help="vibronic density-matrix propagation")
    add_common(p, "propagation time (ps); default 10")
    p.add_argument("--axis1", help="1-D sweep axis, e.g. omega_H_osc=150:350:5")
    p.add_argument("--osc-freq", type=float, default=200.0,
                   help="oscillator frequency (cm^-1) when not sweeping")
    p.add_argument("--fock-dim", type=int, default=vibronic.DEFAULT_FOCK_DIM,
                   help="Fock truncation per oscillator")
    p.set_defaults(func=cmd_lindblad)

    p = sub.add_parser(
        "reproduce-figures",
        help="chain the standard simulation set into CSV files (slow)",
    )
    p.add_argument("--out", default="figures_data", help="output directory")
    p.add_argument("--fock-dim", type=int, default=3,
                   help="Fock truncation for the vibronic runs")
    p.add_argument(
        "--jobs",
        type=int,
        default=int(os.environ.get("PHONON_ANTENNA_JOBS", "0")) or None,
    )
    p.set_defaults(func=cmd_reproduce_figures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, ModelFileError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        kinetics.IntegrationError,
        vibronic.TraceDriftError,
        ConvergenceError,
        NotHermitianError,
    ) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
