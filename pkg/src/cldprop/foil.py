"""Heave-driven foil with a passive viscoelastic hinge.

Two regimes: constrained (fixed freestream, foil held at station) and
free-swimming (the streamwise speed is a state driven by thrust against a
virtual mass plus body drag). Hydrodynamics are quasi-steady: an effective
angle of attack built from pitch, heave rate and forward speed sets a
normal force on the rigid tail, plus a flat-plate added-mass reaction.
The hinge carries a Prony-series stiffness integrated in time alongside
the pitch state, so frequency-dependent storage and loss emerge naturally.

Sign conventions: pitch is positive when the tail tip moves toward positive
heave; thrust is positive in the propulsion direction. The hydrodynamic
moment is weathervane-restoring, so the tail passively lags the heave
motion and the product of normal force and pitch tilt produces net thrust.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, IntegrationDivergenceError, ParameterDomainError
from .prony import PronyFit
from .signals import TimeSeries, cycle_average, impedance_fractions, lockin_extract
from .signals import ImpedanceFractions, LockinResult
from .stiffness import ComplexStiffness

# Integrator resolution: at least this many RK4 steps per heave cycle, and at
# least this many steps per fastest hinge relaxation time.
MIN_STEPS_PER_CYCLE = 1000
STEPS_PER_TAU = 10
# Free-swim runs use a finer grid so that trapezoidal requadrature of the
# logged force trace reproduces the momentum balance to ~1e-7.
FREESWIM_MIN_STEPS_PER_CYCLE = 6000


@dataclass(frozen=True)
class KinematicsSpec:
    """Prescribed heave kinematics and freestream speed."""

    heave_freq: float
    heave_amp_pp: float = 0.08
    freestream: float = 0.2

    def __post_init__(self):
        if self.heave_freq <= 0.0 or self.freestream <= 0.0:
            raise ParameterDomainError("heave frequency and freestream must be positive")
        if self.heave_amp_pp < 0.0:
            raise ParameterDomainError("heave amplitude must be >= 0")


def strouhal(kin: KinematicsSpec) -> float:
    """St = f * A_pp / U."""
    return kin.heave_freq * kin.heave_amp_pp / kin.freestream


@dataclass(frozen=True)
class FoilConfig:
    """Rigid-tail geometry and quasi-steady hydrodynamic coefficients.

    Defaults are modeling choices for a tail matched to the stock damping
    module width: 0.11 m chord, 76.5 mm span, flat-plate inertia, thin-plate
    added mass at half the theoretical coefficient, attached-flow
    normal-force law with sine-cosine rolloff. This default tail is sized so
    the stock hinge designs span the qualitative regimes of interest: the
    undamped bare-plate hinge goes unstable in pitch at high Strouhal number
    while the damped designs stay attached and thrust-productive.
    """

    tail_chord: float = 0.11
    tail_span: float = 0.0765
    tail_inertia: float = 6.3e-5
    pitch_axis_offset: float = 0.03
    fluid_density: float = 1000.0
    normal_force_slope: float = 2.0 * math.pi
    stall_model: str = "sin-cos"
    profile_drag_coeff: float = 0.05
    added_mass_coeff: float = 0.5

    def __post_init__(self):
        for name in ("tail_chord", "tail_span", "tail_inertia", "pitch_axis_offset", "fluid_density"):
            if getattr(self, name) <= 0.0:
                raise ParameterDomainError(f"{name} must be positive")
        if self.stall_model not in ("none", "sin-cos"):
            raise ParameterDomainError(f"unknown stall model {self.stall_model!r}")

    @property
    def planform_area(self) -> float:
        return self.tail_chord * self.tail_span

    @property
    def added_mass(self) -> float:
        """Flat-plate added mass normal to the chord."""
        return self.added_mass_coeff * self.fluid_density * math.pi * (self.tail_chord / 2.0) ** 2 * self.tail_span


@dataclass(frozen=True)
class ConstrainedTrace:
    """Per-step log of a constrained run (warm-up cycles already removed)."""

    time: np.ndarray
    heave: np.ndarray
    heave_vel: np.ndarray
    pitch: np.ndarray
    pitch_rate: np.ndarray
    thrust: np.ndarray
    lateral: np.ndarray
    power: np.ndarray
    hinge_moment: np.ndarray
    drive_freq: float

    @property
    def sample_rate(self) -> float:
        return 1.0 / float(self.time[1] - self.time[0])


@dataclass(frozen=True)
class CycleMetrics:
    mean_thrust: float
    mean_input_power: float
    efficiency: float | None
    effective_stiffness: ComplexStiffness
    fractions: ImpedanceFractions


@dataclass(frozen=True)
class FreeSwimTrace:
    """Carriage kinematics of a virtual-mass trial.

    Cycle-averaged columns hold the per-cycle mean repeated across that
    cycle's samples; samples past the last whole cycle are NaN.
    """

    time: np.ndarray
    x: np.ndarray
    u: np.ndarray
    accel: np.ndarray
    accel_cycle_mean: np.ndarray
    u_cycle_mean: np.ndarray
    thrust: np.ndarray
    drag: np.ndarray
    drive_freq: float

    def expanded_cycle_columns(self) -> tuple[np.ndarray, np.ndarray]:
        """(a_cycavg, u_cycavg) aligned with the time grid."""
        fs = 1.0 / float(self.time[1] - self.time[0])
        spc = int(round(fs / self.drive_freq))
        a = np.full_like(self.time, np.nan)
        v = np.full_like(self.time, np.nan)
        for k in range(self.accel_cycle_mean.size):
            a[k * spc : (k + 1) * spc] = self.accel_cycle_mean[k]
            v[k * spc : (k + 1) * spc] = self.u_cycle_mean[k]
        return a, v


def _hinge_arrays(hinge: PronyFit) -> tuple[list[float], list[float]]:
    branches = hinge.significant_branches()
    return [k for k, _ in branches], [t for _, t in branches]


def _steps_per_cycle(hinge: PronyFit, heave_freq: float, minimum: int) -> int:
    branches = hinge.significant_branches()
    steps = minimum
    if branches:
        tau_min = min(t for _, t in branches)
        steps = max(steps, int(math.ceil(STEPS_PER_TAU / (heave_freq * tau_min))))
    return steps


def _check_dt(dt: float, hinge: PronyFit, heave_freq: float) -> None:
    branches = hinge.significant_branches()
    if branches:
        tau_min = min(t for _, t in branches)
        if dt >= tau_min / STEPS_PER_TAU:
            raise ConfigError(
                f"dt={dt:.3e} s violates the stability bound min(tau)/{STEPS_PER_TAU}={tau_min / STEPS_PER_TAU:.3e} s"
            )
    if dt > 1.0 / (100.0 * heave_freq):
        raise ConfigError(f"dt={dt:.3e} s resolves fewer than 100 steps per heave cycle")


def simulate_constrained(
    foil: FoilConfig,
    kin: KinematicsSpec,
    hinge: PronyFit,
    n_cycles: int = 10,
    warmup_cycles: int = 5,
    dt: float | None = None,
) -> ConstrainedTrace:
    """Integrate the passive-pitch foil at fixed streamwise position.

    Heave y(t) = (A_pp/2) sin(2 pi f t) is prescribed; pitch and the hinge
    branch states are advanced with fixed-step RK4. The first warmup_cycles
    cycles are dropped from the returned trace.
    """
    if n_cycles < 1 or warmup_cycles < 0:
        raise ParameterDomainError("need n_cycles >= 1 and warmup_cycles >= 0")
    steps = _steps_per_cycle(hinge, kin.heave_freq, MIN_STEPS_PER_CYCLE)
    if dt is None:
        dt = 1.0 / (steps * kin.heave_freq)
    else:
        _check_dt(dt, hinge, kin.heave_freq)
        steps = int(round(1.0 / (dt * kin.heave_freq)))
    total = (n_cycles + warmup_cycles) * steps
    state = _integrate(foil, kin, hinge, dt, total, freestream=kin.freestream)
    keep = warmup_cycles * steps
    return _constrained_trace(foil, kin, hinge, state, dt, keep)


def _integrate(foil, kin, hinge, dt, total_steps, freestream, virtual_mass=None, body_drag_area=0.0):
    """RK4 co-integration of pitch, hinge branch states and (optionally) speed.

    Returns the state history as a (total_steps+1, 2+J[+1]) array with
    columns [pitch, pitch_rate, m_1..m_J, (u)].
    """
    ks, taus = _hinge_arrays(hinge)
    nb = len(ks)
    k_inf = hinge.k_inf
    h0 = kin.heave_amp_pp / 2.0
    omg = 2.0 * math.pi * kin.heave_freq
    r = foil.pitch_axis_offset
    rho = foil.fluid_density
    area = foil.planform_area
    slope = foil.normal_force_slope
    sincos = foil.stall_model == "sin-cos"
    cd0 = foil.profile_drag_coeff
    m_a = foil.added_mass
    j_tot = foil.tail_inertia + m_a * r * r
    free = virtual_mass is not None
    inv_mv = 1.0 / virtual_mass if free else 0.0

    def rhs(t, s):
        th = s[0]
        w = s[1]
        u = s[2 + nb] if free else freestream
        ydot = h0 * omg * math.cos(omg * t)
        yddot = -h0 * omg * omg * math.sin(omg * t)
        v = ydot + r * w
        phi = math.atan2(v, u)
        alpha = -(th + phi)
        vrel2 = u * u + v * v
        if sincos:
            cn = slope * math.sin(alpha) * math.cos(alpha)
        else:
            cn = slope * alpha
        f_n = 0.5 * rho * vrel2 * area * cn
        m_ve = k_inf * th
        out = [0.0] * len(s)
        for j in range(nb):
            m_ve += s[2 + j]
            out[2 + j] = ks[j] * w - s[2 + j] / taus[j]
        thdd = (-m_ve + r * f_n - m_a * r * yddot) / j_tot
        out[0] = w
        out[1] = thdd
        if free:
            thrust = f_n * math.sin(th) - 0.5 * rho * u * u * area * cd0 * math.cos(th)
            drag = 0.5 * rho * body_drag_area * u * abs(u)
            out[2 + nb] = (thrust - drag) * inv_mv
        return out

    dim = 2 + nb + (1 if free else 0)
    hist = np.empty((total_steps + 1, dim))
    s = [0.0] * dim
    hist[0] = s
    half = dt / 2.0
    for i in range(total_steps):
        t = i * dt
        k1 = rhs(t, s)
        s2 = [s[q] + half * k1[q] for q in range(dim)]
        k2 = rhs(t + half, s2)
        s3 = [s[q] + half * k2[q] for q in range(dim)]
        k3 = rhs(t + half, s3)
        s4 = [s[q] + dt * k3[q] for q in range(dim)]
        k4 = rhs(t + dt, s4)
        s = [s[q] + dt / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]) for q in range(dim)]
        if not all(math.isfinite(v) for v in s):
            raise IntegrationDivergenceError(
                f"non-finite state at step {i + 1} (t={t + dt:.4f} s)", step=i + 1, time=t + dt
            )
        hist[i + 1] = s
    return hist


def _hydro_outputs(foil, kin, hinge, hist, dt, freestream=None):
    """Vectorized recomputation of forces/power from the state history."""
    ks, taus = _hinge_arrays(hinge)
    nb = len(ks)
    t = np.arange(hist.shape[0]) * dt
    h0 = kin.heave_amp_pp / 2.0
    omg = 2.0 * math.pi * kin.heave_freq
    th = hist[:, 0]
    w = hist[:, 1]
    u = hist[:, 2 + nb] if freestream is None else np.full_like(t, freestream)

    y = h0 * np.sin(omg * t)
    ydot = h0 * omg * np.cos(omg * t)
    yddot = -h0 * omg * omg * np.sin(omg * t)
    r = foil.pitch_axis_offset
    v = ydot + r * w
    phi = np.arctan2(v, u)
    alpha = -(th + phi)
    vrel2 = u * u + v * v
    if foil.stall_model == "sin-cos":
        cn = foil.normal_force_slope * np.sin(alpha) * np.cos(alpha)
    else:
        cn = foil.normal_force_slope * alpha
    f_n = 0.5 * foil.fluid_density * vrel2 * foil.planform_area * cn
    m_ve = hinge.k_inf * th + (hist[:, 2 : 2 + nb].sum(axis=1) if nb else 0.0)
    m_a = foil.added_mass
    j_tot = foil.tail_inertia + m_a * r * r
    thdd = (-m_ve + r * f_n - m_a * r * yddot) / j_tot
    thrust = f_n * np.sin(th) - 0.5 * foil.fluid_density * u * u * foil.planform_area * foil.profile_drag_coeff * np.cos(th)
    lateral = f_n * np.cos(th) - m_a * (yddot + r * thdd)
    power = -lateral * ydot
    return t, y, ydot, thrust, lateral, power, m_ve


def _constrained_trace(foil, kin, hinge, hist, dt, keep_from) -> ConstrainedTrace:
    t, y, ydot, thrust, lateral, power, m_ve = _hydro_outputs(foil, kin, hinge, hist, dt, freestream=kin.freestream)
    sl = slice(keep_from, None)
    return ConstrainedTrace(
        time=t[sl],
        heave=y[sl],
        heave_vel=ydot[sl],
        pitch=hist[sl, 0],
        pitch_rate=hist[sl, 1],
        thrust=thrust[sl],
        lateral=lateral[sl],
        power=power[sl],
        hinge_moment=m_ve[sl],
        drive_freq=kin.heave_freq,
    )


def propulsion_metrics(trace: ConstrainedTrace, kin: KinematicsSpec) -> CycleMetrics:
    """Cycle-averaged thrust, input power, efficiency and effective impedance.

    Input power counts only non-recoverable (positive) instantaneous actuator
    power. The effective stiffness is a lock-in of the hinge-side moment
    against the pitch angle at the drive frequency.
    """
    fs = trace.sample_rate
    f = trace.drive_freq
    thrust_means = cycle_average(TimeSeries(fs, trace.thrust), f)
    if thrust_means.size < 3:
        raise ParameterDomainError("trace must span at least 3 whole cycles")
    power_means = cycle_average(TimeSeries(fs, np.maximum(trace.power, 0.0)), f)
    mean_thrust = float(np.mean(thrust_means))
    mean_power = float(np.mean(power_means))
    if mean_thrust > 0.0 and mean_power > 0.0:
        efficiency = mean_thrust * kin.freestream / mean_power
    else:
        efficiency = None
    result: LockinResult = lockin_extract(
        TimeSeries(fs, trace.pitch, trace.time[0]),
        TimeSeries(fs, trace.hinge_moment, trace.time[0]),
        f,
    )
    return CycleMetrics(
        mean_thrust=mean_thrust,
        mean_input_power=mean_power,
        efficiency=efficiency,
        effective_stiffness=result.stiffness,
        fractions=impedance_fractions(result.stiffness),
    )


def simulate_free_swim(
    foil: FoilConfig,
    kin: KinematicsSpec,
    hinge: PronyFit,
    virtual_mass: float = 3.0,
    body_drag_coeff: float = 0.3,
    duration: float = 3.8,
    body_ref_area: float | None = None,
    dt: float | None = None,
) -> FreeSwimTrace:
    """Virtual-mass free-swimming trial from a standing start in still water.

    The carriage speed u replaces the fixed freestream and obeys
    m_v * du/dt = thrust - 0.5 * rho * C_D,body * S_body * u|u|. Position is
    the cumulative trapezoid of u, so the position/velocity consistency
    holds by construction.
    """
    if virtual_mass <= 0.0 or duration <= 0.0:
        raise ParameterDomainError("virtual mass and duration must be positive")
    steps = _steps_per_cycle(hinge, kin.heave_freq, FREESWIM_MIN_STEPS_PER_CYCLE)
    if dt is None:
        dt = 1.0 / (steps * kin.heave_freq)
    else:
        _check_dt(dt, hinge, kin.heave_freq)
    total = int(math.ceil(duration / dt))
    s_body = foil.planform_area if body_ref_area is None else body_ref_area
    drag_area = body_drag_coeff * s_body
    hist = _integrate(
        foil, kin, hinge, dt, total, freestream=0.0, virtual_mass=virtual_mass, body_drag_area=drag_area
    )
    nb = len(hinge.significant_branches())
    t = np.arange(total + 1) * dt
    u = hist[:, 2 + nb]
    _, _, _, thrust, _, _, _ = _hydro_outputs(foil, kin, hinge, hist, dt, freestream=None)
    drag = 0.5 * foil.fluid_density * drag_area * u * np.abs(u)
    accel = (thrust - drag) / virtual_mass
    x = np.concatenate([[0.0], np.cumsum(0.5 * (u[1:] + u[:-1]) * np.diff(t))])
    a_cyc = cycle_average(TimeSeries(1.0 / dt, accel), kin.heave_freq)
    u_cyc = cycle_average(TimeSeries(1.0 / dt, u), kin.heave_freq)
    return FreeSwimTrace(
        time=t,
        x=x,
        u=u,
        accel=accel,
        accel_cycle_mean=a_cyc,
        u_cycle_mean=u_cyc,
        thrust=thrust,
        drag=drag,
        drive_freq=kin.heave_freq,
    )


def swim_metrics(trace: FreeSwimTrace) -> dict[str, float]:
    """Trial-level kinematic summary of a free-swim trace."""
    if trace.time.size == 0:
        raise ParameterDomainError("empty trace")
    a_exp, u_exp = trace.expanded_cycle_columns()
    n = trace.time.size
    tail = slice(int(math.floor(0.8 * n)), None)
    with np.errstate(invalid="ignore"):
        terminal = float(np.nanmean(u_exp[tail]))
    if math.isnan(terminal):
        terminal = float(trace.u_cycle_mean[-1]) if trace.u_cycle_mean.size else float(trace.u[-1])
    peak_accel = float(np.max(trace.accel_cycle_mean)) if trace.accel_cycle_mean.size else 0.0
    net = float(trace.x[-1] - trace.x[0])
    travel = float(np.trapezoid(np.abs(trace.u), trace.time))
    return {
        "peak_accel": peak_accel,
        "terminal_velocity": terminal,
        "net_displacement": net,
        "total_travel": travel,
    }
