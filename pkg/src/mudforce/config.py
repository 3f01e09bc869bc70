"""Scenario configuration: INI-style files with explicit unit suffixes.

A scenario bundles the foot shape, mud parameter source, trajectory and
solver options.  Keys carry their SI unit as a suffix (``radius_m``,
``dt_s``) so files are self-describing and diff-friendly.  Parsing is
schema-validated: unknown shapes, missing required keys and malformed
numbers raise :class:`ConfigError` naming the section and field.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .calibration import builtin_params
from .geometry import (
    Flat,
    FootShape,
    MeshFoot,
    SemiCylinder,
    SemiSphere,
    VariableAreaFlat,
    load_triangle_mesh,
)
from .rheology import MudDirectionalParams
from .trajectory import MotionProfile, SimulationOptions, gait_profile, plate_protocol

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "params_to_ini",
    "params_from_ini",
]


class ConfigError(ValueError):
    """Invalid or incomplete scenario configuration."""


_PARAM_KEYS = [
    ("alpha_pa", "alpha"),
    ("n", "n"),
    ("lambda_s", "lam"),
    ("eta_m_pas", "eta_m"),
    ("eta_inf_pas", "eta_inf"),
    ("gamma_dot_c_1ps", "gamma_dot_c"),
    ("tau_build_s", "tau_build"),
    ("tau_leak_s", "tau_leak"),
    ("epsilon", "epsilon"),
    ("sigma_y_pa", "sigma_y"),
    ("l_c_m", "l_c"),
    ("nu_1ps", "nu"),
    ("k_r_1ps", "k_r"),
]


def params_to_ini(
    vertical: MudDirectionalParams,
    horizontal: MudDirectionalParams,
    path: str | Path,
) -> None:
    """Serialize a vertical/horizontal parameter pair to an INI file."""
    parser = configparser.ConfigParser()
    for section, params in (("vertical", vertical), ("horizontal", horizontal)):
        parser[section] = {
            key: repr(getattr(params, attr)) for key, attr in _PARAM_KEYS
        }
    with open(path, "w") as fh:
        parser.write(fh)


def params_from_ini(path: str | Path) -> tuple[MudDirectionalParams, MudDirectionalParams]:
    """Load a vertical/horizontal parameter pair from an INI file."""
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ConfigError(f"cannot read parameter file {path}")
    out = []
    for section in ("vertical", "horizontal"):
        if section not in parser:
            raise ConfigError(f"{path}: missing [{section}] section")
        kwargs = {}
        for key, attr in _PARAM_KEYS:
            if key in parser[section]:
                kwargs[attr] = _float(parser, section, key)
        try:
            out.append(MudDirectionalParams(**kwargs))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{path}: [{section}]: {exc}") from exc
    return out[0], out[1]


def _float(parser: configparser.ConfigParser, section: str, key: str) -> float:
    raw = parser.get(section, key)
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from exc


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation scenario, loadable from / dumpable to INI text."""

    shape_kind: str = "flat"
    shape_values: dict[str, float] = field(default_factory=dict)
    mesh_path: str = ""
    mud_source: str = "builtin"
    water_content: float = 0.25
    params_file: str = ""
    trajectory_kind: str = "gait"
    trajectory_values: dict[str, float] = field(default_factory=dict)
    dt: float = 0.005
    oracle: bool = False
    mesh_resolution: int = 10_000
    out_dir: str = "out"

    _SHAPE_FIELDS = {
        "flat": ("length_m", "width_m"),
        "semi_cylinder": ("radius_m", "width_m"),
        "semi_sphere": ("radius_m",),
        "variable_area": ("intrude_area_m2", "retract_area_m2"),
        "mesh": (),
    }
    _TRAJ_FIELDS = {
        "gait": ("step_length_m", "max_depth_m", "gait_speed_mps"),
        "plate": ("depth_m", "speed_mps", "dwell_s"),
    }

    @classmethod
    def from_file(cls, path: str | Path) -> "ScenarioConfig":
        parser = configparser.ConfigParser()
        if not parser.read(path):
            raise ConfigError(f"cannot read config file {path}")
        try:
            return cls._from_parser(parser)
        except ConfigError as exc:
            raise ConfigError(f"{path}: {exc}") from exc

    @classmethod
    def _from_parser(cls, parser: configparser.ConfigParser) -> "ScenarioConfig":
        if "foot" not in parser:
            raise ConfigError("missing [foot] section")
        kind = parser.get("foot", "shape", fallback="")
        if kind not in cls._SHAPE_FIELDS:
            raise ConfigError(
                f"[foot] shape: unknown {kind!r}; expected one of "
                f"{sorted(cls._SHAPE_FIELDS)}"
            )
        shape_values = {}
        for key in cls._SHAPE_FIELDS[kind]:
            if key == "retract_area_m2" and key not in parser["foot"]:
                continue
            if key not in parser["foot"]:
                raise ConfigError(f"[foot] missing required field {key}")
            shape_values[key] = _float(parser, "foot", key)
        mesh_path = parser.get("foot", "mesh_path", fallback="")
        if kind == "mesh" and not mesh_path:
            raise ConfigError("[foot] mesh shape requires mesh_path")

        mud_source = parser.get("mud", "source", fallback="builtin")
        if mud_source not in ("builtin", "file"):
            raise ConfigError(f"[mud] source: unknown {mud_source!r}")
        water = (
            _float(parser, "mud", "water_content")
            if parser.has_option("mud", "water_content")
            else 0.25
        )
        params_file = parser.get("mud", "params_file", fallback="")
        if mud_source == "file" and not params_file:
            raise ConfigError("[mud] source=file requires params_file")

        tkind = parser.get("trajectory", "kind", fallback="gait")
        if tkind not in cls._TRAJ_FIELDS:
            raise ConfigError(f"[trajectory] kind: unknown {tkind!r}")
        traj_values = {}
        for key in cls._TRAJ_FIELDS[tkind]:
            if not parser.has_option("trajectory", key):
                raise ConfigError(f"[trajectory] missing required field {key}")
            traj_values[key] = _float(parser, "trajectory", key)

        dt = _float(parser, "solver", "dt_s") if parser.has_option("solver", "dt_s") else 0.005
        oracle = parser.getboolean("solver", "oracle", fallback=False)
        mesh_res = parser.getint("solver", "mesh_resolution", fallback=10_000)
        out_dir = parser.get("output", "directory", fallback="out")
        return cls(
            kind, shape_values, mesh_path, mud_source, water, params_file,
            tkind, traj_values, dt, oracle, mesh_res, out_dir,
        )

    def to_file(self, path: str | Path) -> None:
        parser = configparser.ConfigParser()
        foot = {"shape": self.shape_kind}
        foot.update({k: f"{v:.12g}" for k, v in self.shape_values.items()})
        if self.mesh_path:
            foot["mesh_path"] = self.mesh_path
        parser["foot"] = foot
        mud = {"source": self.mud_source, "water_content": f"{self.water_content:.12g}"}
        if self.params_file:
            mud["params_file"] = self.params_file
        parser["mud"] = mud
        traj = {"kind": self.trajectory_kind}
        traj.update({k: f"{v:.12g}" for k, v in self.trajectory_values.items()})
        parser["trajectory"] = traj
        parser["solver"] = {
            "dt_s": f"{self.dt:.12g}",
            "oracle": str(self.oracle).lower(),
            "mesh_resolution": str(self.mesh_resolution),
        }
        parser["output"] = {"directory": self.out_dir}
        with open(path, "w") as fh:
            parser.write(fh)

    # -- builders ------------------------------------------------------

    def make_shape(self) -> FootShape:
        v = self.shape_values
        if self.shape_kind == "flat":
            return Flat(v["length_m"], v["width_m"])
        if self.shape_kind == "semi_cylinder":
            return SemiCylinder(v["radius_m"], v["width_m"])
        if self.shape_kind == "semi_sphere":
            return SemiSphere(v["radius_m"])
        if self.shape_kind == "variable_area":
            return VariableAreaFlat(
                v["intrude_area_m2"], v.get("retract_area_m2")
            )
        return load_triangle_mesh(self.mesh_path)

    def make_params(self) -> tuple[MudDirectionalParams, MudDirectionalParams]:
        if self.mud_source == "file":
            return params_from_ini(self.params_file)
        vertical = builtin_params(self.water_content, "vertical")
        horizontal = builtin_params(self.water_content, "horizontal")
        return vertical, horizontal

    def make_profile(self) -> MotionProfile:
        v = self.trajectory_values
        if self.trajectory_kind == "plate":
            return plate_protocol(v["depth_m"], v["speed_mps"], v["dwell_s"], self.dt)
        return gait_profile(
            v["step_length_m"], v["max_depth_m"], v["gait_speed_mps"], self.dt
        )

    def make_options(self) -> SimulationOptions:
        return SimulationOptions(oracle=self.oracle, mesh_resolution=self.mesh_resolution)
