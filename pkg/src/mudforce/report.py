"""Figure rendering for simulation outputs (written to files, never shown)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .trajectory import ForceTrace

__all__ = ["render_trace_figures", "render_sweep_figure"]


def render_trace_figures(trace: ForceTrace, out_dir: str | Path, stem: str) -> list[Path]:
    """Render force-vs-time and force-vs-depth figures next to the CSVs.

    Returns the written paths.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    fig, axes = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for k, label in enumerate(("$F_x$", "$F_y$", "$F_z$")):
        axes[0].plot(trace.t, trace.force[:, k], label=label)
    axes[0].set_ylabel("force (N)")
    axes[0].legend(loc="best")
    axes[0].grid(True, alpha=0.3)
    for k, label in enumerate((r"$\sigma_x$", r"$\sigma_y$", r"$\sigma_z$")):
        axes[1].plot(trace.t, trace.stress[:, k] / 1e3, label=label)
    axes[1].set_xlabel("time (s)")
    axes[1].set_ylabel("stress (kPa)")
    axes[1].legend(loc="best")
    axes[1].grid(True, alpha=0.3)
    path = out_dir / f"{stem}_forces.png"
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    ax.plot(trace.depth * 1e3, trace.force[:, 2])
    ax.set_xlabel("depth (mm)")
    ax.set_ylabel("$F_z$ (N)")
    ax.grid(True, alpha=0.3)
    path = out_dir / f"{stem}_hysteresis.png"
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)
    return written


def render_sweep_figure(
    values: list[float],
    metrics: list[dict[str, float]],
    axis: str,
    out_dir: str | Path,
) -> Path:
    """Render aggregate sweep metrics against the swept axis."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    x = np.asarray(values, dtype=float)
    for key in ("peak_support", "max_suction"):
        ax.plot(x, [m[key] for m in metrics], marker="o", label=key.replace("_", " "))
    ax.set_xlabel(axis.replace("_", " "))
    ax.set_ylabel("force (N)")
    ax.legend(loc="best")
    ax.grid(True, alpha=0.3)
    path = out_dir / f"sweep_{axis}.png"
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path
