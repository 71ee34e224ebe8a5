"""Scripted measurement protocols over the modeling and signal modules.

Three campaigns: a bender sweep characterizing each design's complex
stiffness over a frequency grid, a Strouhal sweep of the constrained foil
across designs, and free-swim trials against a virtual mass. Each run
persists tidy CSV tables, per-figure plot data (CSV plus a self-contained
SVG), and a manifest with the fully resolved configuration, into a
timestamped directory. Given identical configs the table and plot CSVs
are byte-identical between runs.
"""

from __future__ import annotations

import datetime
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .config import CONFIG_SCHEMA_VERSION, ProtocolConfig
from .errors import CldPropError
from .foil import (
    ConstrainedTrace,
    CycleMetrics,
    FreeSwimTrace,
    propulsion_metrics,
    simulate_constrained,
    simulate_free_swim,
    strouhal,
    swim_metrics,
)
from .prony import PronyFit, fit_prony
from .signals import (
    ImpedanceFractions,
    TimeSeries,
    cycle_fold,
    hysteresis_loop_area,
    impedance_fractions,
    lockin_extract,
    synth_bender_pair,
)
from .stiffness import ComplexStiffness, rku_complex_stiffness


@dataclass(frozen=True)
class ImpedanceRow:
    design: str
    freq_hz: float
    stiffness: ComplexStiffness
    fractions: ImpedanceFractions
    loop_area_j: float


@dataclass(frozen=True)
class ImpedanceTable:
    """One row per (design, frequency); data behind the stiffness-vs-frequency figures."""

    rows: tuple[ImpedanceRow, ...]

    def for_design(self, name: str) -> list[ImpedanceRow]:
        return [r for r in self.rows if r.design == name]


@dataclass(frozen=True)
class SweepRow:
    design: str
    st: float
    freq_hz: float
    metrics: CycleMetrics


@dataclass(frozen=True)
class SweepTable:
    """One row per (design, St); data behind the thrust/efficiency/fraction figures."""

    rows: tuple[SweepRow, ...]

    def for_design(self, name: str) -> list[SweepRow]:
        return [r for r in self.rows if r.design == name]


def _fmt(v: float) -> str:
    # repr of a float is the shortest digit string that round-trips exactly,
    # so written tables re-read equal and identical runs diff byte-clean.
    return repr(float(v))


def _annotate(exc: Exception, design: str, freq: float) -> Exception:
    exc.add_note(f"while processing design={design!r}, freq={freq:g} Hz")
    return exc


def fit_design_hinge(config: ProtocolConfig, coverage: float) -> PronyFit:
    """Prony surrogate of one design's root stiffness over the configured fit grid."""
    layup = config.layup.with_coverage(coverage)
    samples = [
        (2.0 * math.pi * f, rku_complex_stiffness(layup, 2.0 * math.pi * f))
        for f in config.sweep.prony_fit_grid_hz
    ]
    return fit_prony(samples, config.sweep.prony_branches)


def run_bender_sweep(config: ProtocolConfig) -> ImpedanceTable:
    """Synthetic bender protocol: lock-in stiffness and loop area per (design, freq).

    The 0 Hz grid point takes the static path: the stiffness is the direct
    zero-frequency model evaluation (loss identically zero) and the loop
    area is zero, since lock-in at DC is undefined. Noisy runs average the
    extracted quantities over `repeats` independent seeds.
    """
    rows = []
    for d_idx, (design, coverage) in enumerate(config.designs):
        layup = config.layup.with_coverage(coverage)
        for f_idx, freq in enumerate(config.bender.freq_grid_hz):
            try:
                if freq == 0.0:
                    k = rku_complex_stiffness(layup, 0.0)
                    rows.append(
                        ImpedanceRow(design, freq, k, impedance_fractions(k), 0.0)
                    )
                    continue
                omega = 2.0 * math.pi * freq
                plant = rku_complex_stiffness(layup, omega)
                storages, losses, areas = [], [], []
                for rep in range(config.bender.repeats):
                    seed = config.seed + 100_000 * d_idx + 100 * f_idx + rep
                    theta, torque = synth_bender_pair(
                        plant,
                        freq,
                        theta_amp=config.bender.theta_amp,
                        sample_rate=config.bender.sample_rate,
                        n_cycles=config.bender.cycles,
                        noise_snr_db=config.bender.noise_snr_db,
                        seed=seed,
                    )
                    result = lockin_extract(theta, torque, freq)
                    storages.append(result.stiffness.storage)
                    losses.append(result.stiffness.loss)
                    areas.append(hysteresis_loop_area(theta, torque, freq))
                k = ComplexStiffness(
                    storage=float(np.mean(storages)), loss=float(np.mean(losses))
                )
                rows.append(
                    ImpedanceRow(design, freq, k, impedance_fractions(k), float(np.mean(areas)))
                )
            except CldPropError as exc:
                raise _annotate(exc, design, freq)
    table = ImpedanceTable(rows=tuple(rows))
    _check_complete(len(table.rows), len(config.designs), len(config.bender.freq_grid_hz))
    return table


def run_strouhal_sweep(config: ProtocolConfig) -> SweepTable:
    """Constrained-foil sweep over the kinematic grid for every design."""
    rows = []
    for design, coverage in config.designs:
        hinge = fit_design_hinge(config, coverage)
        for freq in config.sweep.freq_grid_hz:
            kin = config.sweep.kinematics(freq)
            try:
                trace = simulate_constrained(
                    config.foil,
                    kin,
                    hinge,
                    n_cycles=config.sweep.cycles,
                    warmup_cycles=config.sweep.warmup_cycles,
                )
                metrics = propulsion_metrics(trace, kin)
            except CldPropError as exc:
                raise _annotate(exc, design, freq)
            rows.append(SweepRow(design, strouhal(kin), freq, metrics))
    rows.sort(key=lambda r: ([d for d, _ in config.designs].index(r.design), r.st))
    table = SweepTable(rows=tuple(rows))
    _check_complete(len(table.rows), len(config.designs), len(config.sweep.freq_grid_hz))
    return table


def run_freeswim_trial(config: ProtocolConfig, design_name: str) -> tuple[FreeSwimTrace, dict[str, float]]:
    """Free-swim trial of one design at the configured kinematics."""
    coverage = config.coverage_of(design_name)
    hinge = fit_design_hinge(config, coverage)
    kin = config.sweep.kinematics(config.freeswim.heave_freq)
    trace = simulate_free_swim(
        config.foil,
        kin,
        hinge,
        virtual_mass=config.freeswim.virtual_mass,
        body_drag_coeff=config.freeswim.body_drag_coeff,
        duration=config.freeswim.duration,
    )
    return trace, swim_metrics(trace)


def _check_complete(n_rows: int, n_designs: int, n_grid: int) -> None:
    expected = n_designs * n_grid
    if n_rows != expected:
        raise CldPropError(f"incomplete sweep: {n_rows} rows, expected {expected}")


# ---------------------------------------------------------------------------
# Persistence


def write_impedance_table(table: ImpedanceTable, path: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("design,freq_hz,k_storage,k_loss,f_elastic,f_dissipative,loop_area_j\n")
        for r in table.rows:
            fh.write(
                f"{r.design},{_fmt(r.freq_hz)},{_fmt(r.stiffness.storage)},{_fmt(r.stiffness.loss)},"
                f"{_fmt(r.fractions.elastic)},{_fmt(r.fractions.dissipative)},{_fmt(r.loop_area_j)}\n"
            )


def read_impedance_table(path: str) -> ImpedanceTable:
    rows = []
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("design,freq_hz,"):
            raise CldPropError(f"not an impedance table: {path}")
        for line in fh:
            d, f, ks, kl, fe, fd, la = line.rstrip("\n").split(",")
            rows.append(
                ImpedanceRow(
                    d,
                    float(f),
                    ComplexStiffness(float(ks), float(kl)),
                    ImpedanceFractions(float(fe), float(fd)),
                    float(la),
                )
            )
    return ImpedanceTable(rows=tuple(rows))


def write_sweep_table(table: SweepTable, path: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(
            "design,st,freq_hz,mean_thrust_n,mean_input_power_w,efficiency,"
            "k_eff_storage,k_eff_loss,f_elastic,f_dissipative\n"
        )
        for r in table.rows:
            m = r.metrics
            eff = "" if m.efficiency is None else _fmt(m.efficiency)
            fh.write(
                f"{r.design},{_fmt(r.st)},{_fmt(r.freq_hz)},{_fmt(m.mean_thrust)},"
                f"{_fmt(m.mean_input_power)},{eff},{_fmt(m.effective_stiffness.storage)},"
                f"{_fmt(m.effective_stiffness.loss)},{_fmt(m.fractions.elastic)},"
                f"{_fmt(m.fractions.dissipative)}\n"
            )


def read_sweep_table(path: str) -> SweepTable:
    rows = []
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("design,st,"):
            raise CldPropError(f"not a sweep table: {path}")
        for line in fh:
            d, st, f, thr, pwr, eff, ks, kl, fe, fd = line.rstrip("\n").split(",")
            rows.append(
                SweepRow(
                    d,
                    float(st),
                    float(f),
                    CycleMetrics(
                        mean_thrust=float(thr),
                        mean_input_power=float(pwr),
                        efficiency=None if eff == "" else float(eff),
                        effective_stiffness=ComplexStiffness(float(ks), float(kl)),
                        fractions=ImpedanceFractions(float(fe), float(fd)),
                    ),
                )
            )
    return SweepTable(rows=tuple(rows))


def write_constrained_trace(trace: ConstrainedTrace, path: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("time_s,heave_m,pitch_rad,thrust_n,lateral_n,power_w\n")
        for i in range(trace.time.size):
            fh.write(
                f"{_fmt(trace.time[i])},{_fmt(trace.heave[i])},{_fmt(trace.pitch[i])},"
                f"{_fmt(trace.thrust[i])},{_fmt(trace.lateral[i])},{_fmt(trace.power[i])}\n"
            )


def write_freeswim_trace(trace: FreeSwimTrace, path: str) -> None:
    a_cyc, u_cyc = trace.expanded_cycle_columns()
    with open(path, "w", newline="\n") as fh:
        fh.write("time_s,x_m,u_mps,a_mps2,a_cycavg_mps2,u_cycavg_mps\n")
        for i in range(trace.time.size):
            fh.write(
                f"{_fmt(trace.time[i])},{_fmt(trace.x[i])},{_fmt(trace.u[i])},"
                f"{_fmt(trace.accel[i])},{_fmt(a_cyc[i])},{_fmt(u_cyc[i])}\n"
            )


# ---------------------------------------------------------------------------
# Plot-data emission

PLOT_KINDS = ("impedance", "thrust", "efficiency", "fractions", "trace")


def emit_plot_data(table, kind: str, out_dir: str, design: str | None = None) -> list[str]:
    """Write the plot-ready CSV + SVG pair(s) for one figure kind.

    File names follow `fig_<kind>_<design>.{csv,svg}`. The `trace` kind
    takes a ConstrainedTrace (with `design` naming it) and emits the
    cycle-folded thrust/heave overlay; all other kinds take the matching
    table and emit one file pair per design.
    """
    from .svgchart import write_line_chart

    if kind not in PLOT_KINDS:
        raise CldPropError(f"unknown plot kind {kind!r}; known: {PLOT_KINDS}")
    written: list[str] = []

    def pair(name: str) -> tuple[str, str]:
        base = os.path.join(out_dir, f"fig_{kind}_{name}")
        return base + ".csv", base + ".svg"

    if kind == "trace":
        if not isinstance(table, ConstrainedTrace):
            raise CldPropError("trace plots need a ConstrainedTrace")
        fs = table.sample_rate
        thrust_fold = cycle_fold(TimeSeries(fs, table.thrust), table.drive_freq)
        heave_fold = cycle_fold(TimeSeries(fs, table.heave), table.drive_freq)
        phase = np.arange(thrust_fold.size) / thrust_fold.size
        csv_path, svg_path = pair(design or "trace")
        with open(csv_path, "w", newline="\n") as fh:
            fh.write("cycle_phase,thrust_n_folded,heave_m_folded\n")
            for i in range(phase.size):
                fh.write(f"{_fmt(phase[i])},{_fmt(thrust_fold[i])},{_fmt(heave_fold[i])}\n")
        write_line_chart(
            svg_path,
            [
                ("thrust (N)", phase.tolist(), thrust_fold.tolist()),
                ("heave x10 (m)", phase.tolist(), (10.0 * heave_fold).tolist()),
            ],
            title=f"Cycle-folded thrust, {design or 'trace'}",
            xlabel="cycle phase",
            ylabel="thrust / scaled heave",
        )
        return [csv_path, svg_path]

    if isinstance(table, ImpedanceTable):
        designs = list(dict.fromkeys(r.design for r in table.rows))
    elif isinstance(table, SweepTable):
        designs = list(dict.fromkeys(r.design for r in table.rows))
    else:
        raise CldPropError(f"cannot emit {kind!r} plots from {type(table).__name__}")
    if not table.rows:
        raise CldPropError("cannot emit plots from an empty table")

    for name in designs:
        rows = table.for_design(name)
        csv_path, svg_path = pair(name)
        if kind == "impedance":
            xs = [r.freq_hz for r in rows]
            with open(csv_path, "w", newline="\n") as fh:
                fh.write("freq_hz,k_storage,k_loss\n")
                for r in rows:
                    fh.write(f"{_fmt(r.freq_hz)},{_fmt(r.stiffness.storage)},{_fmt(r.stiffness.loss)}\n")
            write_line_chart(
                svg_path,
                [
                    ("K' (N*m/rad)", xs, [r.stiffness.storage for r in rows]),
                    ("K'' (N*m/rad)", xs, [r.stiffness.loss for r in rows]),
                ],
                title=f"Complex stiffness, {name}",
                xlabel="frequency (Hz)",
                ylabel="stiffness (N*m/rad)",
            )
        elif kind == "thrust":
            xs = [r.st for r in rows]
            ys = [r.metrics.mean_thrust for r in rows]
            with open(csv_path, "w", newline="\n") as fh:
                fh.write("st,mean_thrust_n\n")
                for x, y in zip(xs, ys):
                    fh.write(f"{_fmt(x)},{_fmt(y)}\n")
            write_line_chart(
                svg_path, [("mean thrust (N)", xs, ys)],
                title=f"Mean thrust, {name}", xlabel="Strouhal number", ylabel="thrust (N)",
            )
        elif kind == "efficiency":
            xs = [r.st for r in rows]
            ys = [0.0 if r.metrics.efficiency is None else r.metrics.efficiency for r in rows]
            with open(csv_path, "w", newline="\n") as fh:
                fh.write("st,efficiency\n")
                for r in rows:
                    eff = "" if r.metrics.efficiency is None else _fmt(r.metrics.efficiency)
                    fh.write(f"{_fmt(r.st)},{eff}\n")
            write_line_chart(
                svg_path, [("efficiency", xs, ys)],
                title=f"Propulsive efficiency, {name}", xlabel="Strouhal number", ylabel="efficiency",
            )
        else:  # fractions
            if isinstance(table, SweepTable):
                xs = [r.st for r in rows]
                fr = [r.metrics.fractions for r in rows]
                xlabel = "Strouhal number"
            else:
                xs = [r.freq_hz for r in rows]
                fr = [r.fractions for r in rows]
                xlabel = "frequency (Hz)"
            with open(csv_path, "w", newline="\n") as fh:
                fh.write(f"{'st' if xlabel.startswith('S') else 'freq_hz'},f_elastic,f_dissipative\n")
                for x, f in zip(xs, fr):
                    fh.write(f"{_fmt(x)},{_fmt(f.elastic)},{_fmt(f.dissipative)}\n")
            write_line_chart(
                svg_path,
                [
                    ("elastic", xs, [f.elastic for f in fr]),
                    ("dissipative", xs, [f.dissipative for f in fr]),
                ],
                title=f"Impedance composition, {name}", xlabel=xlabel, ylabel="fraction",
            )
        written.extend([csv_path, svg_path])
    return written


# ---------------------------------------------------------------------------
# Run directories


def create_run_dir(config: ProtocolConfig, protocol: str) -> str:
    """Timestamped run directory with a manifest of the resolved config."""
    stamp = datetime.datetime.now().strftime("%Y%m%d_%H%M%S")
    path = os.path.join(config.output_dir, f"{protocol}_{stamp}")
    suffix = 0
    while os.path.exists(path):
        suffix += 1
        path = os.path.join(config.output_dir, f"{protocol}_{stamp}_{suffix}")
    os.makedirs(path)
    manifest = {
        "toolkit_version": __version__,
        "config_schema_version": CONFIG_SCHEMA_VERSION,
        "protocol": protocol,
        "resolved_config": config.raw,
    }
    with open(os.path.join(path, "manifest.json"), "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
