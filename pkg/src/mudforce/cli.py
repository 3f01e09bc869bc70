"""Command-line front end: simulate, calibrate, compare, sweep, params."""

from __future__ import annotations

import csv
import dataclasses
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import analysis
from .calibration import (
    CalibrationError,
    IntrusionRecord,
    builtin_params,
    fit_record,
)
from .config import ConfigError, ScenarioConfig, params_from_ini, params_to_ini
from .report import render_sweep_figure, render_trace_figures
from .rheology import StepSizeError
from .trajectory import SimulationOptions, simulate

__all__ = ["main"]


def _load_config(path: str, out: str | None, dt: float | None,
                 oracle: bool, mesh_res: int | None) -> ScenarioConfig:
    try:
        cfg = ScenarioConfig.from_file(path)
    except ConfigError as exc:
        raise click.ClickException(str(exc)) from exc
    updates: dict[str, object] = {}
    if out:
        updates["out_dir"] = out
    if dt:
        updates["dt"] = dt
    if oracle:
        updates["oracle"] = True
    if mesh_res:
        updates["mesh_resolution"] = mesh_res
    return dataclasses.replace(cfg, **updates) if updates else cfg


def _oracle_gaps(oracle_trace, trace) -> tuple[float, float, float]:
    """Per-axis normalized RMSE; axes with zero reference amplitude (no
    motion along them) fall back to the overall force scale."""
    scale = float(np.abs(trace.force).max()) or 1.0
    gaps = []
    for k in range(3):
        amp = float(np.ptp(trace.force[:, k]))
        err = float(
            np.sqrt(np.mean((oracle_trace.force[:, k] - trace.force[:, k]) ** 2))
        )
        gaps.append(err / (amp if amp > 0.0 else scale))
    return tuple(gaps)


def _run_scenario(cfg: ScenarioConfig):
    shape = cfg.make_shape()
    vertical, horizontal = cfg.make_params()
    profile = cfg.make_profile()
    trace = simulate(shape, profile, vertical, horizontal, cfg.make_options())
    return shape, vertical, horizontal, profile, trace


def _write_metrics(metrics: analysis.GaitMetrics, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value"])
        for name, value in dataclasses.asdict(metrics).items():
            writer.writerow([name, f"{value:.9g}"])


@click.group()
def main() -> None:
    """3D foot-mud resistive force model: simulation, calibration, analysis."""


@main.command("simulate")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None, help="Output directory override.")
@click.option("--oracle", is_flag=True, help="Also run the mesh-quadrature oracle and report the gap.")
@click.option("--mesh-res", type=int, default=None, help="Oracle facet count.")
@click.option("--dt", type=float, default=None, help="Time step override (s).")
def simulate_cmd(config_path: str, out: str | None, oracle: bool,
                 mesh_res: int | None, dt: float | None) -> None:
    """Run one scenario; write trace CSV, metrics and figures."""
    cfg = _load_config(config_path, out, dt, False, mesh_res)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        shape, vertical, horizontal, profile, trace = _run_scenario(cfg)
    except (StepSizeError, CalibrationError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    trace.to_csv(out_dir / "trace.csv")
    _write_metrics(analysis.gait_metrics(trace), out_dir / "metrics.csv")
    render_trace_figures(trace, out_dir, "trace")
    click.echo(f"trace written to {out_dir / 'trace.csv'}")
    if oracle:
        opts = SimulationOptions(oracle=True, mesh_resolution=cfg.mesh_resolution)
        oracle_trace = simulate(shape, profile, vertical, horizontal, opts)
        oracle_trace.to_csv(out_dir / "trace_oracle.csv")
        gaps = _oracle_gaps(oracle_trace, trace)
        with open(out_dir / "oracle_rmse.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["axis", "relative_rmse"])
            for axis, gap in zip("xyz", gaps):
                writer.writerow([axis, f"{gap:.9g}"])
        click.echo(
            "oracle relative RMSE: "
            + ", ".join(f"{a}={g:.3e}" for a, g in zip("xyz", gaps))
        )


@main.command()
@click.argument("records", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default="calibration", help="Output directory.")
@click.option("--direction", type=click.Choice(["vertical", "horizontal"]), default="vertical")
@click.option("--strict", is_flag=True, help="Exit nonzero on fit warnings.")
def calibrate(records: tuple[str, ...], out: str, direction: str, strict: bool) -> None:
    """Fit constitutive parameters from record CSVs (t,disp,rate,stress,phase)."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        loaded = [IntrusionRecord.from_csv(p, direction=direction) for p in records]
        params, report = fit_record(loaded)
    except (CalibrationError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    params_to_ini(params, params, out_dir / "params.ini")
    click.echo(f"fitted parameters written to {out_dir / 'params.ini'}")
    for name, value in report.values.items():
        err = report.stderr.get(name)
        suffix = f" (stderr {err:.3g})" if err is not None else ""
        click.echo(f"  {name} = {value:.6g}{suffix}")
    click.echo(f"  rmse = {report.rmse:.6g}")
    for warning in report.warnings:
        click.echo(f"warning: {warning}", err=True)
    if strict and report.warnings:
        raise click.ClickException(f"{len(report.warnings)} fit warning(s) with --strict")


@main.command()
@click.argument("configs", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None, help="Write the table here too.")
def compare(configs: tuple[str, ...], out: str | None) -> None:
    """Metric comparison table across two or more scenarios."""
    if len(configs) < 2:
        raise click.ClickException("compare needs at least 2 scenario configs")
    entries = {}
    for path in configs:
        cfg = _load_config(path, None, None, False, None)
        try:
            *_, trace = _run_scenario(cfg)
        except (StepSizeError, ValueError) as exc:
            raise click.ClickException(f"{path}: {exc}") from exc
        entries[Path(path).stem] = trace
    table = analysis.comparison_table(entries)
    click.echo(table, nl=False)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(table)


def _sweep_one(args: tuple[ScenarioConfig, str, float]) -> dict[str, float]:
    cfg, axis, value = args
    cfg = _apply_axis(cfg, axis, value)
    *_, trace = _run_scenario(cfg)
    m = analysis.gait_metrics(trace)
    row = {"value": value}
    row.update(dataclasses.asdict(m))
    return row


def _apply_axis(cfg: ScenarioConfig, axis: str, value: float) -> ScenarioConfig:
    if axis == "water_content":
        return dataclasses.replace(cfg, water_content=value)
    if axis == "speed":
        key = "gait_speed_mps" if cfg.trajectory_kind == "gait" else "speed_mps"
        traj = dict(cfg.trajectory_values, **{key: value})
        return dataclasses.replace(cfg, trajectory_values=traj)
    if axis == "depth":
        key = "max_depth_m" if cfg.trajectory_kind == "gait" else "depth_m"
        traj = dict(cfg.trajectory_values, **{key: value})
        return dataclasses.replace(cfg, trajectory_values=traj)
    if axis in cfg.shape_values:
        shape = dict(cfg.shape_values, **{axis: value})
        return dataclasses.replace(cfg, shape_values=shape)
    raise click.ClickException(
        f"unknown sweep axis {axis!r}; expected speed, water_content, depth "
        "or a shape dimension key"
    )


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--axis", required=True, help="speed | water_content | depth | shape key")
@click.option("--values", required=True, help="Comma-separated numeric values.")
@click.option("--out", type=click.Path(), default=None, help="Output directory override.")
def sweep(config_path: str, axis: str, values: str, out: str | None) -> None:
    """Run one scenario per value; write an aggregate metrics CSV."""
    cfg = _load_config(config_path, out, None, False, None)
    try:
        value_list = [float(v) for v in values.split(",") if v.strip()]
    except ValueError as exc:
        raise click.ClickException(f"--values must be numeric: {exc}") from exc
    if not value_list:
        raise click.ClickException("--values is empty")
    for v in value_list:
        _apply_axis(cfg, axis, v)  # validate the axis up front

    jobs = [(cfg, axis, v) for v in value_list]
    max_workers = int(os.environ.get("MUDFORCE_THREADS", os.cpu_count() or 1))
    max_workers = max(1, min(max_workers, len(jobs)))
    if max_workers == 1 or len(jobs) == 1:
        rows = [_sweep_one(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(_sweep_one, jobs))

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    agg = out_dir / f"sweep_{axis}.csv"
    with open(agg, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([axis] + [k for k in rows[0] if k != "value"])
        for row in rows:
            writer.writerow(
                [f"{row['value']:.9g}"]
                + [f"{v:.9g}" for k, v in row.items() if k != "value"]
            )
    render_sweep_figure(value_list, rows, axis, out_dir)
    click.echo(f"aggregate written to {agg}")


@main.command()
@click.option("--water-content", type=float, default=0.25, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Write an INI file here.")
def params(water_content: float, out: str | None) -> None:
    """Print (or dump) the built-in parameter tables for a water content."""
    try:
        vertical = builtin_params(water_content, "vertical")
        horizontal = builtin_params(water_content, "horizontal")
    except CalibrationError as exc:
        raise click.ClickException(str(exc)) from exc
    for name, p in (("vertical", vertical), ("horizontal", horizontal)):
        click.echo(f"[{name}]")
        for fld in dataclasses.fields(p):
            click.echo(f"  {fld.name} = {getattr(p, fld.name):.6g}")
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        params_to_ini(vertical, horizontal, out)
        click.echo(f"written to {out}")


if __name__ == "__main__":
    sys.exit(main())
