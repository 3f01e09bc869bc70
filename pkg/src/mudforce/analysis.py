"""Trace- and gait-level metrics: impulse, suction, hysteresis, comparisons."""

from __future__ import annotations

import io
import warnings as _warnings
from dataclasses import dataclass

import numpy as np

from .geometry import FootShape, effective_area
from .trajectory import ForceTrace

__all__ = [
    "GaitMetrics",
    "impulse",
    "max_suction",
    "hysteresis_energy",
    "relative_rmse",
    "normalize_stress",
    "gait_metrics",
    "comparison_table",
    "OpenLoopWarning",
]


class OpenLoopWarning(UserWarning):
    """The force-depth loop does not close (start/end depth mismatch)."""


@dataclass(frozen=True)
class GaitMetrics:
    """Summary metrics of one simulated step.

    ``max_suction`` is stored as a magnitude; ``hysteresis_energy`` is the
    foot-level dissipated work over the intrusion/retraction loop, the
    model-level proxy for locomotion energy cost.
    """

    impulse_x: float
    impulse_y: float
    impulse_z: float
    max_suction: float
    hysteresis_energy: float
    peak_support: float
    sinking_depth: float


def impulse(trace: ForceTrace) -> tuple[float, float, float]:
    """Trapezoidal per-axis force impulse (N*s)."""
    return tuple(
        float(np.trapezoid(trace.force[:, k], trace.t)) for k in range(3)
    )


def max_suction(trace: ForceTrace) -> float:
    """Magnitude of the most-negative vertical force (N); 0 if none."""
    return float(abs(min(trace.force[:, 2].min(), 0.0)))


def hysteresis_energy(trace: ForceTrace) -> float:
    """Dissipated loop work ``closed-path integral of F_z dz`` (J).

    Warns (:class:`OpenLoopWarning`) when the depth series does not return
    to its starting value, reporting the gap.
    """
    z = trace.depth
    gap = abs(float(z[-1] - z[0]))
    span = float(np.ptp(z))
    if span > 0 and gap > 1e-3 * span:
        _warnings.warn(
            f"force-depth loop open by {gap:.3g} m", OpenLoopWarning, stacklevel=2
        )
    work = float(np.trapezoid(trace.force[:, 2], z))
    return abs(work)


def relative_rmse(predicted: ForceTrace, reference: ForceTrace) -> tuple[float, float, float]:
    """Per-axis RMSE between force traces, normalized by the reference
    peak-to-peak amplitude."""
    if predicted.force.shape != reference.force.shape:
        raise ValueError("traces must share one grid")
    out = []
    for k in range(3):
        amp = float(np.ptp(reference.force[:, k]))
        if amp <= 0.0:
            raise ValueError(f"reference axis {k} has zero amplitude")
        err = float(np.sqrt(np.mean((predicted.force[:, k] - reference.force[:, k]) ** 2)))
        out.append(err / amp)
    return tuple(out)


def normalize_stress(trace: ForceTrace, shape: FootShape | None = None) -> np.ndarray:
    """Vertical force divided by the instantaneous effective area (Pa).

    Samples with zero area come back as NaN (masked).
    """
    shape = shape if shape is not None else trace.shape
    if shape is None:
        raise ValueError("trace carries no shape; pass one explicitly")
    out = np.full(len(trace.t), np.nan)
    for i, depth in enumerate(trace.depth):
        if depth <= 0.0:
            continue
        area = effective_area(shape, float(depth))
        if area > 0.0:
            out[i] = trace.force[i, 2] / area
    return out


def gait_metrics(trace: ForceTrace) -> GaitMetrics:
    """All summary metrics of one trace."""
    ix, iy, iz = impulse(trace)
    return GaitMetrics(
        impulse_x=ix,
        impulse_y=iy,
        impulse_z=iz,
        max_suction=max_suction(trace),
        hysteresis_energy=hysteresis_energy(trace),
        peak_support=float(max(trace.force[:, 2].max(), 0.0)),
        sinking_depth=float(trace.depth.max()),
    )


def comparison_table(entries: dict[str, ForceTrace]) -> str:
    """CSV comparison of metrics across named scenarios."""
    buf = io.StringIO()
    buf.write(
        "scenario,peak_normalized_stress_Pa,peak_support_N,max_suction_N,"
        "impulse_z_Ns,hysteresis_J\n"
    )
    for name, trace in entries.items():
        m = gait_metrics(trace)
        norm = normalize_stress(trace)
        peak_norm = float(np.nanmax(norm)) if np.any(np.isfinite(norm)) else float("nan")
        buf.write(
            f"{name},{peak_norm:.9g},{m.peak_support:.9g},{m.max_suction:.9g},"
            f"{m.impulse_z:.9g},{m.hysteresis_energy:.9g}\n"
        )
    return buf.getvalue()
