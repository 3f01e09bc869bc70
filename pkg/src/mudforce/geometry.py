"""Foot shapes, submerged-surface meshing and contact kinematics.

Shapes are immutable descriptions; meshing produces flat facets tiling the
submerged surface with outward unit normals.  The directional scaling
factors ``f_n`` / ``f_t`` weight normal and tangential stress projections by
the attack angle and carry a signed extension beyond the first quadrant so
that full-revolution surface integrals (sphere annuli) come out right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence, Union

import numpy as np

__all__ = [
    "Flat",
    "SemiCylinder",
    "SemiSphere",
    "VariableAreaFlat",
    "MeshFoot",
    "FootShape",
    "Facet",
    "PlateKinematics",
    "contact_angle",
    "effective_area",
    "submerged_area",
    "mesh_submerged",
    "plate_angles",
    "scale_normal",
    "scale_tangential",
    "load_triangle_mesh",
]


# ----------------------------------------------------------------------
# Shapes
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Flat:
    """Rectangular flat foot, ``length`` along x, ``width`` along y (m)."""

    length: float
    width: float

    def __post_init__(self) -> None:
        if self.length <= 0 or self.width <= 0:
            raise ValueError("flat foot dimensions must be positive")


@dataclass(frozen=True)
class SemiCylinder:
    """Semi-cylindrical foot: cross-section radius ``radius`` in the x-z
    plane, axis of length ``width`` along y (m)."""

    radius: float
    width: float

    def __post_init__(self) -> None:
        if self.radius <= 0 or self.width <= 0:
            raise ValueError("semi-cylinder dimensions must be positive")


@dataclass(frozen=True)
class SemiSphere:
    """Semi-spherical foot of radius ``radius`` (m), pole down."""

    radius: float

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError("semi-sphere radius must be positive")


@dataclass(frozen=True)
class VariableAreaFlat:
    """Flat foot whose effective area follows a schedule (morphing proxy).

    ``intrude_area`` and ``retract_area`` are blended by the retraction
    weight (the smooth intrusion/retraction switch), so the area collapses
    as the foot pulls out.  An optional ``depth_table`` of (depth_m, area_m2)
    pairs overrides the blend with a depth lookup.
    """

    intrude_area: float
    retract_area: float | None = None
    depth_table: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self) -> None:
        if self.intrude_area < 0:
            raise ValueError("area schedule must be nonnegative")
        if self.retract_area is not None and self.retract_area < 0:
            raise ValueError("area schedule must be nonnegative")
        if self.depth_table is not None and any(a < 0 for _, a in self.depth_table):
            raise ValueError("area schedule must be nonnegative")

    def area(self, depth: float, retraction_weight: float = 0.0) -> float:
        """Effective area at a given depth / retraction weight in [0, 1]."""
        if self.depth_table is not None:
            depths = [d for d, _ in self.depth_table]
            areas = [a for _, a in self.depth_table]
            return float(np.interp(depth, depths, areas))
        retract = self.intrude_area if self.retract_area is None else self.retract_area
        return (1.0 - retraction_weight) * self.intrude_area + retraction_weight * retract


@dataclass(frozen=True)
class Facet:
    """Flat surface element: centroid (m), outward unit normal, area (m^2),
    depth of the centroid below the mud surface (m, >= 0 when submerged)."""

    centroid: tuple[float, float, float]
    normal: tuple[float, float, float]
    area: float

    def __post_init__(self) -> None:
        if self.area <= 0:
            raise ValueError("facet area must be positive")
        norm = math.sqrt(sum(c * c for c in self.normal))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"facet normal must be unit length, |n|={norm}")

    @property
    def depth(self) -> float:
        # mud surface at z=0, z positive downward
        return self.centroid[2]


@dataclass(frozen=True)
class MeshFoot:
    """User-supplied foot described by triangle facets (tip at depth origin)."""

    facets: tuple[Facet, ...]


FootShape = Union[Flat, SemiCylinder, SemiSphere, VariableAreaFlat, MeshFoot]


@dataclass(frozen=True)
class PlateKinematics:
    """Per-facet contact angles and local frame.

    ``psi1``: angle between the outward normal and the sinking direction.
    ``psi2``: signed angle from the horizontal normal direction (e2) to the
    horizontal velocity, in (-pi, pi].
    ``varphi``: angle of the horizontal normal projection from the x-axis.
    """

    psi1: float
    psi2: float
    varphi: float
    e1: tuple[float, float, float]
    e2: tuple[float, float, float]
    e3: tuple[float, float, float]
    degenerate: bool = False


# ----------------------------------------------------------------------
# Scaling factors
# ----------------------------------------------------------------------


def _wrap(angle: float) -> float:
    return math.atan2(math.sin(angle), math.cos(angle))


def scale_normal(psi: float) -> float:
    """Normal scaling factor ``0.5 * (1 + cos 2 psi)``, negated for
    ``|psi| in (pi/2, pi]`` (signed extension)."""
    psi = _wrap(psi)
    value = 0.5 * (1.0 + math.cos(2.0 * psi))
    return value if abs(psi) <= math.pi / 2 else -value


def scale_tangential(psi: float) -> float:
    """Tangential scaling factor ``0.5 * (1 - cos 2 psi)``, negated for
    ``psi in [-pi, 0)`` (signed extension)."""
    psi = _wrap(psi)
    value = 0.5 * (1.0 - math.cos(2.0 * psi))
    return value if psi >= 0.0 else -value


# ----------------------------------------------------------------------
# Contact geometry
# ----------------------------------------------------------------------


def contact_angle(z: float, radius: float) -> float:
    """Contact angle ``arccos(1 - z/R)`` of a circular cross-section.

    Clamped to pi/2 for ``z > R``: the closed forms are derived for the
    lower hemisphere / half-cylinder only.
    """
    if z < 0.0:
        raise ValueError(f"depth must be >= 0, got {z}")
    if z >= radius:
        return math.pi / 2.0
    return math.acos(1.0 - z / radius)


def effective_area(shape: FootShape, z: float) -> float:
    """Vertical-projection effective area at bottom-tip depth ``z``."""
    if z < 0.0:
        raise ValueError(f"depth must be >= 0, got {z}")
    if isinstance(shape, Flat):
        return shape.length * shape.width
    if isinstance(shape, SemiCylinder):
        theta = contact_angle(z, shape.radius)
        return 2.0 * shape.radius * shape.width * math.sin(theta)
    if isinstance(shape, SemiSphere):
        theta = contact_angle(z, shape.radius)
        return math.pi * shape.radius**2 * math.sin(theta) ** 2
    if isinstance(shape, VariableAreaFlat):
        return shape.area(z)
    if isinstance(shape, MeshFoot):
        # projection of downward-facing submerged facets
        total = 0.0
        for facet in shape.facets:
            if facet.depth >= 0.0 and facet.normal[2] > 0.0:
                total += facet.area * facet.normal[2]
        return total
    raise TypeError(f"unsupported shape {type(shape)!r}")


def submerged_area(shape: FootShape, z: float) -> float:
    """Analytic submerged surface area (oracle for mesh convergence)."""
    if isinstance(shape, Flat):
        return shape.length * shape.width + 2.0 * z * (shape.length + shape.width)
    if isinstance(shape, SemiCylinder):
        theta = contact_angle(z, shape.radius)
        r = shape.radius
        arc = 2.0 * theta * r * shape.width
        # two end-cap circular segments
        caps = 2.0 * r * r * (theta - math.sin(theta) * math.cos(theta))
        return arc + caps
    if isinstance(shape, SemiSphere):
        theta = contact_angle(z, shape.radius)
        return 2.0 * math.pi * shape.radius**2 * (1.0 - math.cos(theta))
    raise TypeError(f"no analytic submerged area for {type(shape)!r}")


# ----------------------------------------------------------------------
# Meshing
# ----------------------------------------------------------------------
# Structured parametric tiling per shape; the facet count target is met
# approximately, with deterministic ordering.  Coordinates: z positive down,
# mud surface at z = 0, foot bottom tip at depth z.


def mesh_submerged(shape: FootShape, z: float, resolution: int = 10_000) -> list[Facet]:
    """Tile the submerged surface with facets (>= 8 requested)."""
    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    if z < 0.0:
        raise ValueError("depth must be >= 0")
    if isinstance(shape, Flat):
        return _mesh_flat(shape, z, resolution)
    if isinstance(shape, SemiCylinder):
        return _mesh_semi_cylinder(shape, z, resolution)
    if isinstance(shape, SemiSphere):
        return _mesh_semi_sphere(shape, z, resolution)
    if isinstance(shape, MeshFoot):
        return [f for f in shape.facets if f.depth >= 0.0]
    raise ValueError(f"shape {type(shape).__name__} has no 3D surface to mesh")


def _mesh_flat(shape: Flat, z: float, resolution: int) -> list[Facet]:
    length, width = shape.length, shape.width
    total = length * width + 2.0 * z * (length + width)
    facets: list[Facet] = []

    def grid(nx: int, ny: int) -> tuple[int, int]:
        return max(1, nx), max(1, ny)

    # bottom plate, normal pointing down into the mud (z positive down -> +z)
    frac = length * width / total
    n_side = max(1, round(math.sqrt(resolution * frac)))
    nx, ny = grid(n_side, n_side)
    dx, dy = length / nx, width / ny
    for i in range(nx):
        for j in range(ny):
            cx = -length / 2 + (i + 0.5) * dx
            cy = -width / 2 + (j + 0.5) * dy
            facets.append(Facet((cx, cy, z), (0.0, 0.0, 1.0), dx * dy))

    if z <= 0.0:
        return facets

    # side strips: +-x walls (area width*z), +-y walls (area length*z)
    for sign in (1.0, -1.0):
        for horiz, extent, normal_axis in (
            (width, width, 0),
            (length, length, 1),
        ):
            frac = extent * z / total
            n_h = max(1, round(math.sqrt(resolution * frac * extent / z)))
            n_v = max(1, round(math.sqrt(resolution * frac * z / extent)))
            dh, dv = extent / n_h, z / n_v
            for i in range(n_h):
                for j in range(n_v):
                    c_along = -extent / 2 + (i + 0.5) * dh
                    c_depth = (j + 0.5) * dv
                    if normal_axis == 0:
                        centroid = (sign * length / 2, c_along, c_depth)
                        normal = (sign, 0.0, 0.0)
                    else:
                        centroid = (c_along, sign * width / 2, c_depth)
                        normal = (0.0, sign, 0.0)
                    facets.append(Facet(centroid, normal, dh * dv))
    return facets


def _mesh_semi_cylinder(shape: SemiCylinder, z: float, resolution: int) -> list[Facet]:
    r, width = shape.radius, shape.width
    theta_c = contact_angle(z, r)
    arc_area = 2.0 * theta_c * r * width
    cap_area = 2.0 * r * r * (theta_c - math.sin(theta_c) * math.cos(theta_c))
    total = arc_area + cap_area
    facets: list[Facet] = []

    # curved surface: theta in [-theta_c, theta_c] (signed from the bottom
    # vertical, positive toward +x) x axial strips along y
    n_curved = max(8, round(resolution * arc_area / total))
    n_theta = max(2, round(math.sqrt(n_curved * 2.0 * theta_c * r / width)))
    n_y = max(1, round(n_curved / n_theta))
    d_theta = 2.0 * theta_c / n_theta
    dy = width / n_y
    for i in range(n_theta):
        theta = -theta_c + (i + 0.5) * d_theta
        depth = z - r * (1.0 - math.cos(theta))
        normal = (math.sin(theta), 0.0, math.cos(theta))
        for j in range(n_y):
            cy = -width / 2 + (j + 0.5) * dy
            centroid = (r * math.sin(theta), cy, depth)
            facets.append(Facet(centroid, normal, r * d_theta * dy))

    # end caps: submerged circular segments at y = +-width/2, polar tiling
    n_cap = max(8, round(resolution * cap_area / total))
    n_rad = max(2, round(math.sqrt(n_cap / 4.0)))
    n_ang = max(4, round(n_cap / (2 * n_rad)))
    d_ang = 2.0 * theta_c / n_ang
    for sign in (1.0, -1.0):
        for i in range(n_ang):
            ang = -theta_c + (i + 0.5) * d_ang
            # submerged radial range: depth = z - r + rad*cos(ang) >= 0
            rad_lo = 0.0 if z >= r else (r - z) / math.cos(ang)
            if rad_lo >= r:
                continue
            d_rad = (r - rad_lo) / n_rad
            for j in range(n_rad):
                rad = rad_lo + (j + 0.5) * d_rad
                depth = z - r + rad * math.cos(ang)
                centroid = (rad * math.sin(ang), sign * width / 2, depth)
                facets.append(
                    Facet(centroid, (0.0, sign, 0.0), rad * d_rad * d_ang)
                )
    return facets


def _mesh_semi_sphere(shape: SemiSphere, z: float, resolution: int) -> list[Facet]:
    r = shape.radius
    theta_c = contact_angle(z, r)
    n_theta = max(2, round(math.sqrt(resolution * theta_c / (2.0 * math.pi))))
    n_phi = max(4, round(resolution / n_theta))
    d_theta = theta_c / n_theta
    d_phi = 2.0 * math.pi / n_phi
    facets: list[Facet] = []
    for i in range(n_theta):
        theta = (i + 0.5) * d_theta
        st, ct = math.sin(theta), math.cos(theta)
        depth = z - r * (1.0 - ct)
        area = r * r * st * d_theta * d_phi
        for j in range(n_phi):
            phi = (j + 0.5) * d_phi
            centroid = (r * st * math.cos(phi), r * st * math.sin(phi), depth)
            normal = (st * math.cos(phi), st * math.sin(phi), ct)
            facets.append(Facet(centroid, normal, area))
    return facets


# ----------------------------------------------------------------------
# Per-facet kinematics
# ----------------------------------------------------------------------


def plate_angles(
    facet: Facet,
    u_h: Sequence[float],
    u_z: float,
) -> PlateKinematics:
    """Contact angles and local frame for a facet under given motion.

    ``u_h`` is the horizontal velocity (m/s, world x-y); ``u_z`` the sinking
    speed (m/s, positive down).  For a facet whose normal is exactly
    vertical the cross-product frame is undefined; the limit convention
    assigns ``psi1`` from the vertical alignment and measures ``psi2``
    directly from the motion direction (flagged ``degenerate``).
    """
    nx, ny, nz = facet.normal
    n_h = math.hypot(nx, ny)
    ux, uy = float(u_h[0]), float(u_h[1])
    speed_h = math.hypot(ux, uy)

    # sinking direction is +z (down); psi1 = angle(normal, sinking dir)
    sink = 1.0 if u_z >= 0.0 else -1.0
    psi1 = math.acos(max(-1.0, min(1.0, nz * sink)))

    if n_h < 1e-12:
        varphi = 0.0
        e1 = (0.0, -1.0, 0.0)
        e2 = (1.0, 0.0, 0.0)
        psi2 = math.atan2(uy, ux) if speed_h > 0.0 else 0.0
        return PlateKinematics(psi1, psi2, varphi, e1, e2, (0.0, 0.0, 1.0), True)

    hx, hy = nx / n_h, ny / n_h
    # e3 is the world vertical; e1 = (n x e3)/|n x e3|, e2 = e3 x e1
    e3 = (0.0, 0.0, 1.0)
    e1 = (hy, -hx, 0.0)
    e2 = (hx, hy, 0.0)
    varphi = math.atan2(hy, hx)
    if speed_h > 0.0:
        motion = math.atan2(uy, ux)
        psi2 = _wrap(motion - varphi)
    else:
        psi2 = 0.0
    return PlateKinematics(psi1, psi2, varphi, e1, e2, e3, False)


# ----------------------------------------------------------------------
# Mesh import
# ----------------------------------------------------------------------


def load_triangle_mesh(path: str | Path) -> MeshFoot:
    """Read a whitespace-delimited triangle soup (9 floats per line, meters).

    Vertex coordinates use z positive down with the mud surface at z = 0.
    Normals follow the right-hand rule of the vertex order.
    """
    facets: list[Facet] = []
    for line_no, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 9:
            raise ValueError(f"{path}:{line_no}: expected 9 floats, got {len(parts)}")
        v = np.array([float(p) for p in parts]).reshape(3, 3)
        cross = np.cross(v[1] - v[0], v[2] - v[0])
        area = 0.5 * float(np.linalg.norm(cross))
        if area <= 0.0:
            raise ValueError(f"{path}:{line_no}: degenerate triangle")
        normal = cross / np.linalg.norm(cross)
        centroid = v.mean(axis=0)
        facets.append(Facet(tuple(centroid), tuple(normal), area))
    if not facets:
        raise ValueError(f"{path}: no triangles found")
    return MeshFoot(tuple(facets))
