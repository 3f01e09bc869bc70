"""Motion profiles and the time-stepped foot-mud simulation.

A :class:`MotionProfile` is a uniform-grid time series of foot position,
velocity and acceleration in the world frame (z positive down, mud surface
at z = 0) with per-sample phase labels.  :func:`simulate` couples a profile
to the constitutive law: three independent rheology states (x, y, z) are
advanced sample by sample, directional stresses are formed, and the foot
shape's resultant force is evaluated either by closed form or by the mesh
quadrature oracle.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .forces import DirectionalStresses, integrate_mesh, resultant_force
from .geometry import FootShape, VariableAreaFlat, effective_area
from .rheology import (
    MudDirectionalParams,
    RheologyState,
    StepSizeError,
    heaviside_smooth,
    step_rheology,
    total_stress,
)

__all__ = [
    "MotionProfile",
    "ForceTrace",
    "SimulationOptions",
    "plate_protocol",
    "gait_profile",
    "simulate",
]

TRACE_HEADER = [
    "t", "x", "y", "z", "ux", "uy", "uz",
    "Fx", "Fy", "Fz", "sigma_x", "sigma_y", "sigma_z", "phase",
]


@dataclass(frozen=True)
class MotionProfile:
    """Uniform-grid foot trajectory.

    ``position[:, 2]`` is the depth of the foot's bottom tip (m, positive
    down); negative values mean the foot is above the mud surface.
    """

    dt: float
    t: np.ndarray
    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    phase: tuple[str, ...]

    def __post_init__(self) -> None:
        n = len(self.t)
        for name in ("position", "velocity", "acceleration"):
            arr = getattr(self, name)
            if arr.shape != (n, 3):
                raise ValueError(f"{name} must have shape ({n}, 3)")
        if len(self.phase) != n:
            raise ValueError("phase labels must match the time grid")

    @property
    def duration(self) -> float:
        return float(self.t[-1])


@dataclass(frozen=True)
class ForceTrace:
    """Simulation output on the driving profile's grid."""

    dt: float
    t: np.ndarray
    position: np.ndarray
    velocity: np.ndarray
    force: np.ndarray
    stress: np.ndarray
    depth: np.ndarray
    gamma: np.ndarray
    gamma_dot: np.ndarray
    phase: tuple[str, ...]
    shape: FootShape | None = None
    #: per-sample suction-state stress of the vertical direction (Pa, <= 0);
    #: None for traces re-read from CSV
    suction: np.ndarray | None = None

    def to_csv(self, path: str | Path) -> None:
        """Write the trace with 9-significant-digit fields."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRACE_HEADER)
            for i in range(len(self.t)):
                row = [
                    self.t[i],
                    *self.position[i],
                    *self.velocity[i],
                    *self.force[i],
                    *self.stress[i],
                ]
                writer.writerow([f"{v:.9g}" for v in row] + [self.phase[i]])

    @classmethod
    def from_csv(cls, path: str | Path) -> "ForceTrace":
        rows: list[list[str]] = []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != TRACE_HEADER:
                raise ValueError(f"unexpected trace header {header!r}")
            rows = [row for row in reader if row]
        data = np.array([[float(v) for v in row[:13]] for row in rows])
        phase = tuple(row[13] for row in rows)
        t = data[:, 0]
        dt = float(t[1] - t[0]) if len(t) > 1 else 0.0
        pos, vel = data[:, 1:4], data[:, 4:7]
        force, stress = data[:, 7:10], data[:, 10:13]
        return cls(dt, t, pos, vel, force, stress, pos[:, 2].clip(0.0),
                   np.zeros_like(pos), np.zeros_like(pos), phase)


def plate_protocol(depth: float, speed: float, dwell: float, dt: float) -> MotionProfile:
    """Vertical intrude-dwell-retract protocol at constant speed.

    The foot sinks to ``depth`` at ``speed``, holds for ``dwell`` seconds,
    then retracts at the same speed back to the surface.  Velocities are
    the analytic piecewise-constant values (zero at every dwell sample).
    """
    if depth <= 0 or speed <= 0 or dwell <= 0 or dt <= 0:
        raise ValueError("all protocol parameters must be positive")
    if dt >= dwell:
        raise ValueError(f"dt={dt:g} must resolve the dwell phase ({dwell:g} s)")
    t_move = depth / speed
    n_move = max(1, round(t_move / dt))
    n_dwell = max(1, round(dwell / dt))
    z = np.concatenate([
        np.linspace(0.0, depth, n_move, endpoint=False),
        np.full(n_dwell, depth),
        np.linspace(depth, 0.0, n_move, endpoint=False),
        np.zeros(1),
    ])
    vz = np.concatenate([
        np.full(n_move, speed),
        np.zeros(n_dwell),
        np.full(n_move, -speed),
        np.zeros(1),
    ])
    phase = ["intrude"] * n_move + ["dwell"] * n_dwell + ["retract"] * (n_move + 1)
    n = len(z)
    t = np.arange(n) * dt
    pos = np.column_stack([np.zeros(n), np.zeros(n), z])
    vel = np.column_stack([np.zeros(n), np.zeros(n), vz])
    acc = np.zeros((n, 3))
    return MotionProfile(dt, t, pos, vel, acc, tuple(phase))


def gait_profile(
    step_length: float, max_depth: float, gait_speed: float, dt: float
) -> MotionProfile:
    """Single-step stance-plus-swing trajectory.

    Stance: ``z(t) = max_depth * sin^2(pi t / T)`` with constant forward
    velocity ``step_length / T``; ``T`` is chosen so the peak speed
    magnitude equals ``gait_speed`` exactly.  Swing mirrors the vertical
    shape above the surface while the foot travels another step forward.
    The grid is snapped to a multiple of T/4 so the peak-speed instant is
    sampled exactly; the effective step never exceeds the requested ``dt``.
    """
    if max_depth <= 0 or gait_speed <= 0 or dt <= 0 or step_length < 0:
        raise ValueError("gait parameters must be positive (step_length >= 0)")
    t_stance = math.sqrt(step_length**2 + (math.pi * max_depth) ** 2) / gait_speed
    n_st = 4 * max(2, math.ceil(t_stance / (4.0 * dt)))
    dt_eff = t_stance / n_st
    n_sw = n_st
    vx = step_length / t_stance
    om = 2.0 * math.pi / t_stance

    t_st = np.arange(n_st) * dt_eff
    z_st = max_depth * np.sin(math.pi * t_st / t_stance) ** 2
    vz_st = 0.5 * max_depth * om * np.sin(om * t_st)
    az_st = 0.5 * max_depth * om**2 * np.cos(om * t_st)
    x_st = vx * t_st

    t_sw = np.arange(n_sw + 1) * dt_eff
    z_sw = -max_depth * np.sin(math.pi * t_sw / t_stance) ** 2
    vz_sw = -0.5 * max_depth * om * np.sin(om * t_sw)
    az_sw = -0.5 * max_depth * om**2 * np.cos(om * t_sw)
    x_sw = step_length + vx * t_sw

    z = np.concatenate([z_st, z_sw])
    vz = np.concatenate([vz_st, vz_sw])
    az = np.concatenate([az_st, az_sw])
    x = np.concatenate([x_st, x_sw])
    n = len(z)
    t = np.arange(n) * dt_eff
    pos = np.column_stack([x, np.zeros(n), z])
    vel = np.column_stack([np.full(n, vx), np.zeros(n), vz])
    acc = np.column_stack([np.zeros(n), np.zeros(n), az])
    phase = (
        ["intrude"] * (n_st // 2)
        + ["retract"] * (n_st - n_st // 2)
        + ["swing"] * (n_sw + 1)
    )
    return MotionProfile(dt_eff, t, pos, vel, acc, tuple(phase))


@dataclass(frozen=True)
class SimulationOptions:
    """Solver options for :func:`simulate`.

    ``oracle`` switches force evaluation from closed forms to the surface
    quadrature at ``mesh_resolution`` facets.  ``reset_each_cycle`` clears
    the rheology states whenever the foot leaves the mud, modeling
    undisturbed mud at the next touchdown.
    """

    oracle: bool = False
    mesh_resolution: int = 10_000
    reset_each_cycle: bool = True


def simulate(
    shape: FootShape,
    profile: MotionProfile,
    params_vertical: MudDirectionalParams,
    params_horizontal: MudDirectionalParams,
    options: SimulationOptions = SimulationOptions(),
) -> ForceTrace:
    """Run the coupled kinematics-rheology-force simulation.

    Three independent rheology states evolve, one per world direction: the
    vertical state is driven by the signed sinking rate and the submerged
    depth, each horizontal state by its accumulated (unsigned) slide while
    submerged.  Per sample the directional total stresses feed the shape's
    resultant-force evaluation; horizontal force components oppose the
    instantaneous motion.

    Raises:
        StepSizeError: if the profile grid violates the rheology stability
            guard for either parameter set (checked before the run).
    """
    dt = profile.dt
    for p in (params_vertical, params_horizontal):
        if dt > p.max_stable_dt() * (1.0 + 1e-12):
            raise StepSizeError(
                f"profile dt={dt:g} exceeds stability guard {p.max_stable_dt():g}"
            )

    pv, ph = params_vertical, params_horizontal
    n = len(profile.t)
    force = np.zeros((n, 3))
    stress = np.zeros((n, 3))
    depth_arr = np.zeros(n)
    gamma_arr = np.zeros((n, 3))
    gdot_arr = np.zeros((n, 3))
    suction_arr = np.zeros(n)

    state_x = RheologyState()
    state_y = RheologyState()
    state_z = RheologyState()
    # accumulated path displacements (dimensionless), per direction
    path_x = path_y = path_z = 0.0
    was_submerged = False

    for i in range(n):
        z = float(profile.position[i, 2])
        ux, uy, uz = (float(v) for v in profile.velocity[i])
        ax_, ay_, az_ = (float(v) for v in profile.acceleration[i])
        depth = max(0.0, z)
        submerged = z > 0.0
        depth_arr[i] = depth

        if submerged and not was_submerged and options.reset_each_cycle:
            state_x, state_y, state_z = (
                RheologyState(t=state_x.t),
                RheologyState(t=state_y.t),
                RheologyState(t=state_z.t),
            )
            path_x = path_y = path_z = 0.0
        was_submerged = submerged

        if submerged:
            gdot_z = uz / pv.l_c
            gdot_x = abs(ux) / ph.l_c
            gdot_y = abs(uy) / ph.l_c
        else:
            gdot_z = gdot_x = gdot_y = 0.0

        gamma_depth = depth / pv.l_c
        gamma_arr[i] = (path_x, path_y, gamma_depth)
        gdot_arr[i] = (gdot_x, gdot_y, gdot_z)
        suction_arr[i] = state_z.sigma_s

        sx = total_stress(state_x, path_x, gdot_x, ph)
        sy = total_stress(state_y, path_y, gdot_y, ph)
        sz = total_stress(state_z, gamma_depth, gdot_z, pv)
        stresses = DirectionalStresses(max(0.0, sx), max(0.0, sy), sz)
        stress[i] = (sx, sy, sz)

        varphi = math.atan2(abs(uy), abs(ux)) if (ux or uy) else 0.0
        if submerged:
            if isinstance(shape, VariableAreaFlat):
                weight = heaviside_smooth(gdot_z, pv.nu)
                area = shape.area(depth, weight)
                res = resultant_force(shape, depth, varphi, stresses, area=area)
            elif options.oracle:
                res = integrate_mesh(
                    shape, depth, (ux, uy, uz), stresses, options.mesh_resolution
                )
            else:
                res = resultant_force(shape, depth, varphi, stresses)
            fx = -math.copysign(res.fx, ux) if ux else 0.0
            fy = -math.copysign(res.fy, uy) if uy else 0.0
            force[i] = (fx, fy, res.fz)

        if i + 1 < n:
            # advance states over [t_i, t_{i+1}] with frozen kinematics
            state_z = step_rheology(
                state_z, path_z, gdot_z, az_ / pv.l_c if submerged else 0.0, dt, pv
            )
            state_x = step_rheology(
                state_x, path_x, gdot_x, 0.0, dt, ph
            )
            state_y = step_rheology(
                state_y, path_y, gdot_y, 0.0, dt, ph
            )
            if submerged:
                path_z += abs(uz) * dt / pv.l_c
                path_x += abs(ux) * dt / ph.l_c
                path_y += abs(uy) * dt / ph.l_c

    return ForceTrace(
        dt=dt,
        t=profile.t.copy(),
        position=profile.position.copy(),
        velocity=profile.velocity.copy(),
        force=force,
        stress=stress,
        depth=depth_arr,
        gamma=gamma_arr,
        gamma_dot=gdot_arr,
        phase=profile.phase,
        shape=shape,
        suction=suction_arr,
    )
