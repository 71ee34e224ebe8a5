"""Command-line entry point: layup, bender, extract, sweep, freeswim.

All subcommands share `--config`, repeatable `--set section.key=value`
overrides, `--output-dir` and `--quiet`. With `--quiet`, stdout carries
only CSV data; all diagnostics go to stderr. Exit codes: 0 success,
2 configuration/usage error, 3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from ._version import __version__
from .config import CONFIG_SCHEMA_VERSION, load_config, parse_grid
from .errors import (
    CldPropError,
    ConfigError,
    DegenerateExcitationError,
    DegenerateImpedanceError,
    FitConvergenceError,
    IntegrationDivergenceError,
    InsufficientRecordError,
    ParameterDomainError,
    SignalMismatchError,
)
from .harness import (
    create_run_dir,
    emit_plot_data,
    run_bender_sweep,
    run_freeswim_trial,
    run_strouhal_sweep,
    write_freeswim_trace,
    write_impedance_table,
    write_sweep_table,
)
from .signals import TimeSeries, hysteresis_loop_area, impedance_fractions, lockin_extract
from .stiffness import rku_complex_stiffness

_NUMERICAL_ERRORS = (
    ParameterDomainError,
    SignalMismatchError,
    InsufficientRecordError,
    DegenerateExcitationError,
    DegenerateImpedanceError,
    FitConvergenceError,
    IntegrationDivergenceError,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cldprop",
        description="Constrained-layer-damped propulsor toolkit: stiffness models, "
        "lock-in extraction and foil simulation protocols.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"cldprop {__version__} (config schema v{CONFIG_SCHEMA_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", default=None, help="protocol config file (INI)")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override a config value (repeatable)",
        )
        p.add_argument("--output-dir", default=None, help="override output.directory")
        p.add_argument(
            "--quiet", action="store_true", help="stdout carries only CSV data"
        )

    p = sub.add_parser("layup", help="print the model impedance table for all designs")
    common(p)
    p.add_argument("--freq-grid", default=None, help="grid as start:stop:step or comma list")

    p = sub.add_parser("bender", help="run the synthetic bender sweep protocol")
    common(p)
    p.add_argument("--freq-grid", default=None, help="grid as start:stop:step or comma list")

    p = sub.add_parser("extract", help="lock-in extraction from recorded CSV signals")
    common(p)
    p.add_argument("--theta", help="two-column CSV time_s,value with the angle signal")
    p.add_argument("--torque", help="two-column CSV time_s,value with the torque signal")
    p.add_argument("--combined", help="three-column CSV time_s,theta_rad,torque_nm")
    p.add_argument("--freq", type=float, required=True, help="drive frequency, Hz")

    p = sub.add_parser("sweep", help="run the constrained Strouhal sweep protocol")
    common(p)

    p = sub.add_parser("freeswim", help="run free-swim virtual-mass trials")
    common(p)
    p.add_argument(
        "--design",
        action="append",
        default=None,
        help="design name to run (repeatable; default: baseline and c)",
    )
    return parser


def _load(args) -> "ProtocolConfig":  # noqa: F821
    overrides = list(args.overrides)
    if getattr(args, "freq_grid", None):
        section = "bender" if args.command in ("layup", "bender") else "sweep"
        overrides.append(f"{section}.freq_grid_hz={args.freq_grid}")
    if args.output_dir:
        overrides.append(f"output.directory={args.output_dir}")
    return load_config(args.config, overrides)


def _info(args, message: str) -> None:
    stream = sys.stderr if args.quiet else sys.stdout
    print(message, file=stream)


def _read_signal_csv(path: str, columns: int) -> tuple[np.ndarray, ...]:
    data = np.genfromtxt(path, delimiter=",", names=True)
    names = data.dtype.names
    if names is None or len(names) != columns:
        raise ConfigError(f"{path}: expected a {columns}-column CSV with a header row")
    return tuple(np.asarray(data[n], dtype=float) for n in names)


def _sample_rate_of(t: np.ndarray, path: str) -> float:
    dt = np.diff(t)
    if dt.size == 0 or np.any(dt <= 0) or np.ptp(dt) > 1e-6 * dt[0]:
        raise ConfigError(f"{path}: time column must be uniformly increasing")
    return 1.0 / float(dt[0])


def _cmd_layup(args) -> int:
    config = _load(args)
    grid = config.bender.freq_grid_hz
    print("design,freq_hz,k_storage,k_loss,f_elastic,f_dissipative")
    for design, coverage in config.designs:
        layup = config.layup.with_coverage(coverage)
        for f in grid:
            k = rku_complex_stiffness(layup, 2.0 * math.pi * f)
            fr = impedance_fractions(k)
            print(
                f"{design},{f:.12g},{k.storage:.12g},{k.loss:.12g},"
                f"{fr.elastic:.12g},{fr.dissipative:.12g}"
            )
    return 0


def _cmd_bender(args) -> int:
    config = _load(args)
    table = run_bender_sweep(config)
    run_dir = create_run_dir(config, "bender")
    write_impedance_table(table, f"{run_dir}/impedance_table.csv")
    emit_plot_data(table, "impedance", run_dir)
    emit_plot_data(table, "fractions", run_dir)
    _info(args, f"bender sweep written to {run_dir}")
    return 0


def _cmd_extract(args) -> int:
    if args.combined:
        t, th, tq = _read_signal_csv(args.combined, 3)
        fs = _sample_rate_of(t, args.combined)
    elif args.theta and args.torque:
        t1, th = _read_signal_csv(args.theta, 2)
        t2, tq = _read_signal_csv(args.torque, 2)
        fs = _sample_rate_of(t1, args.theta)
        if abs(_sample_rate_of(t2, args.torque) - fs) > 1e-9 * fs:
            raise ConfigError("theta and torque files have different sample rates")
        t = t1
    else:
        raise ConfigError("extract needs --combined, or both --theta and --torque")
    theta = TimeSeries(fs, th, float(t[0]))
    torque = TimeSeries(fs, tq, float(t[0]))
    result = lockin_extract(theta, torque, args.freq)
    area = hysteresis_loop_area(theta, torque, args.freq)
    fr = impedance_fractions(result.stiffness)
    print("freq_hz,k_storage,k_loss,phase_lag_rad,f_elastic,f_dissipative,coherence,loop_area_j")
    print(
        f"{args.freq:.12g},{result.stiffness.storage:.12g},{result.stiffness.loss:.12g},"
        f"{result.phase_lag:.12g},{fr.elastic:.12g},{fr.dissipative:.12g},"
        f"{result.coherence:.12g},{area:.12g}"
    )
    return 0


def _cmd_sweep(args) -> int:
    config = _load(args)
    table = run_strouhal_sweep(config)
    run_dir = create_run_dir(config, "sweep")
    write_sweep_table(table, f"{run_dir}/sweep_table.csv")
    emit_plot_data(table, "thrust", run_dir)
    emit_plot_data(table, "efficiency", run_dir)
    emit_plot_data(table, "fractions", run_dir)
    _info(args, f"Strouhal sweep written to {run_dir}")
    return 0


def _cmd_freeswim(args) -> int:
    config = _load(args)
    names = args.design or ["baseline", "c"]
    run_dir = create_run_dir(config, "freeswim")
    lines = ["design,peak_accel_mps2,terminal_velocity_mps,net_displacement_m,total_travel_m"]
    for name in names:
        trace, metrics = run_freeswim_trial(config, name)
        write_freeswim_trace(trace, f"{run_dir}/trace_{name}.csv")
        lines.append(
            f"{name},{metrics['peak_accel']:.12g},{metrics['terminal_velocity']:.12g},"
            f"{metrics['net_displacement']:.12g},{metrics['total_travel']:.12g}"
        )
    summary = "\n".join(lines) + "\n"
    with open(f"{run_dir}/swim_metrics.csv", "w", newline="\n") as fh:
        fh.write(summary)
    print(summary, end="")
    _info(args, f"free-swim trial written to {run_dir}")
    return 0


_COMMANDS = {
    "layup": _cmd_layup,
    "bender": _cmd_bender,
    "extract": _cmd_extract,
    "sweep": _cmd_sweep,
    "freeswim": _cmd_freeswim,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version.
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4
    except CldPropError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
