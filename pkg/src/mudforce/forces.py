"""Resultant 3D mud forces on canonical and meshed feet.

Two routes are provided for every canonical shape:

* closed-form expressions obtained by analytic integration of the
  elementary plate forces over the submerged surface, and
* a brute-force quadrature (``integrate_mesh``) that sums the same
  elementary-force densities over a structured parametric tiling.

The quadrature discretizes the per-shape integrands before any analytic
simplification, so it converges to the closed forms with resolution and
serves as their independent oracle.

Conventions: ``z`` is the depth of the foot bottom tip (m, >= 0),
``varphi`` the angle of the horizontal motion from the x-axis (the
formulas are derived for varphi in [0, pi/2]; callers fold signs back with
the motion direction).  All returned components are magnitudes along the
respective axes given nonnegative stresses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .geometry import (
    Facet,
    Flat,
    FootShape,
    MeshFoot,
    PlateKinematics,
    SemiCylinder,
    SemiSphere,
    contact_angle,
    effective_area,
    mesh_submerged,
    plate_angles,
    scale_normal,
    scale_tangential,
)

__all__ = [
    "DirectionalStresses",
    "ResultantForce",
    "facet_force",
    "force_flat",
    "force_semi_cylinder",
    "force_semi_sphere",
    "force_variable_area",
    "resultant_force",
    "integrate_mesh",
    "SPHERE_SERIES_SWITCH",
]


@dataclass(frozen=True)
class DirectionalStresses:
    """Total stress per world direction (Pa), each sigma_b + sigma_th + gated sigma_s."""

    sigma_x: float
    sigma_y: float
    sigma_z: float


@dataclass(frozen=True)
class ResultantForce:
    """Resultant mud force (N) plus geometric diagnostics."""

    fx: float
    fy: float
    fz: float
    effective_area: float = 0.0
    theta_c: float = 0.0


# ----------------------------------------------------------------------
# Elementary plate force (generic rule for imported meshes)
# ----------------------------------------------------------------------


def facet_force(
    facet: Facet,
    kinematics: PlateKinematics,
    stresses: DirectionalStresses,
) -> tuple[float, float, float]:
    """Force contribution of one plate element.

    Horizontal components act on the facet's vertical projection with the
    normal/tangential split weighted by the signed ``psi2`` and resolved
    through the facet's normal azimuth ``varphi``; the vertical component
    acts on the full element weighted by ``psi1``:

        dFx = (f_n(psi2) cos(varphi) - f_t(psi2) sin(varphi)) sigma_x dS_proj
        dFy = (f_n(psi2) sin(varphi) + f_t(psi2) cos(varphi)) sigma_y dS_proj
        dFz = (f_n(psi1) cos(psi1)   + f_t(psi1) sin(psi1)  ) sigma_z dS

    Components are resistance magnitudes for motion in the first quadrant;
    callers apply the opposing sign.  Unsubmerged facets contribute nothing.
    """
    if facet.depth < 0.0:
        return (0.0, 0.0, 0.0)
    nx, ny, _ = facet.normal
    n_h = math.hypot(nx, ny)
    ds = facet.area
    ds_proj = ds * n_h

    cv, sv = math.cos(kinematics.varphi), math.sin(kinematics.varphi)
    f_n2 = scale_normal(kinematics.psi2)
    f_t2 = scale_tangential(kinematics.psi2)
    dfx = (f_n2 * cv - f_t2 * sv) * stresses.sigma_x * ds_proj
    dfy = (f_n2 * sv + f_t2 * cv) * stresses.sigma_y * ds_proj

    psi1 = kinematics.psi1
    f_n1 = scale_normal(psi1)
    f_t1 = scale_tangential(psi1)
    dfz = (f_n1 * math.cos(psi1) + f_t1 * math.sin(psi1)) * stresses.sigma_z * ds
    return (dfx, dfy, dfz)


# ----------------------------------------------------------------------
# Closed forms
# ----------------------------------------------------------------------


def force_flat(
    length: float,
    width: float,
    z: float,
    varphi: float,
    stresses: DirectionalStresses,
) -> ResultantForce:
    """Flat rectangular foot.

    Fx = z [L f_n(varphi) sx + W f_t(varphi_c) sy],
    Fy = z [L f_t(varphi) sx + W f_n(varphi_c) sy],
    Fz = L W sz,  with varphi_c = pi/2 - varphi.
    """
    if z < 0.0:
        raise ValueError("depth must be >= 0")
    varphi_c = math.pi / 2.0 - varphi
    fn, ft = scale_normal(varphi), scale_tangential(varphi)
    fnc, ftc = scale_normal(varphi_c), scale_tangential(varphi_c)
    sx, sy, sz = stresses.sigma_x, stresses.sigma_y, stresses.sigma_z
    fx = z * (length * fn * sx + width * ftc * sy)
    fy = z * (length * ft * sx + width * fnc * sy)
    area = length * width
    return ResultantForce(fx, fy, area * sz, area, 0.0)


def force_semi_cylinder(
    radius: float,
    width: float,
    z: float,
    varphi: float,
    stresses: DirectionalStresses,
) -> ResultantForce:
    """Semi-cylindrical foot (axis along y), valid for z <= R (clamped above)."""
    if z < 0.0:
        raise ValueError("depth must be >= 0")
    theta = contact_angle(z, radius)
    st, ct = math.sin(theta), math.cos(theta)
    area = 2.0 * radius * width * st
    if st == 0.0:
        return ResultantForce(0.0, 0.0, 0.0, 0.0, 0.0)
    varphi_c = math.pi / 2.0 - varphi
    fn, ft = scale_normal(varphi), scale_tangential(varphi)
    fnc, ftc = scale_normal(varphi_c), scale_tangential(varphi_c)
    sx, sy, sz = stresses.sigma_x, stresses.sigma_y, stresses.sigma_z
    bracket_x = radius / width * (theta / st - ct)
    bracket_y = (1.0 - ct) / st
    fx = area / 2.0 * (bracket_x * fn * sx + bracket_y * ftc * sy)
    fy = area / 2.0 * (bracket_x * ft * sx + bracket_y * fnc * sy)
    fz = area / 3.0 * (2.0 + ct * ct) * sz
    return ResultantForce(fx, fy, fz, area, theta)


#: contact angle below which the sphere vertical bracket switches to its series
SPHERE_SERIES_SWITCH = 1e-2

# Taylor coefficients of g(t) = 2 s^2 (1 + c^2) + s c (2 c^2 - 5) + 3 t,
# the singularity-free form of the sphere vertical bracket times sin^2.
_SPHERE_G_SERIES = (
    (2, 4.0),
    (4, -10.0 / 3.0),
    (5, 8.0 / 5.0),
    (6, 68.0 / 45.0),
    (7, -16.0 / 21.0),
    (8, -26.0 / 63.0),
    (9, 8.0 / 45.0),
)


def _sphere_g(theta: float) -> float:
    """``sin^2(theta) * vertical bracket``; series branch kills the
    catastrophic cancellation of the 1/sin terms near zero."""
    if theta < SPHERE_SERIES_SWITCH:
        return sum(coeff * theta**power for power, coeff in _SPHERE_G_SERIES)
    s, c = math.sin(theta), math.cos(theta)
    return 2.0 * s * s * (1.0 + c * c) + s * c * (2.0 * c * c - 5.0) + 3.0 * theta


def force_semi_sphere(
    radius: float,
    z: float,
    varphi: float,
    stresses: DirectionalStresses,
) -> ResultantForce:
    """Semi-spherical foot, valid for z <= R (clamped above).

    Vertical: Fz = (pi R^2 / 4) g(theta_c) sz with
    g = 2 s^2 (1 + c^2) + s c (2 c^2 - 5) + 3 theta_c, the exact value of
    the annulus integral of [f_n cos + f_t sin] sz over the submerged cap.

    Horizontal: Fx = (4/3) R^2 (2 theta_c - sin 2 theta_c) cos(varphi) sx
    (and Fy with sin(varphi) sy), the value of the annulus integral of the
    signed scaling factors over the submerged cap.
    """
    if z < 0.0:
        raise ValueError("depth must be >= 0")
    theta = contact_angle(z, radius)
    st = math.sin(theta)
    area = math.pi * radius**2 * st * st
    sx, sy, sz = stresses.sigma_x, stresses.sigma_y, stresses.sigma_z
    horiz = 4.0 / 3.0 * radius**2 * (2.0 * theta - math.sin(2.0 * theta))
    fx = horiz * math.cos(varphi) * sx
    fy = horiz * math.sin(varphi) * sy
    fz = math.pi * radius**2 / 4.0 * _sphere_g(theta) * sz
    return ResultantForce(fx, fy, fz, area, theta)


def force_variable_area(
    area: float,
    stresses: DirectionalStresses,
    z: float = 0.0,
    varphi: float = 0.0,
) -> ResultantForce:
    """Variable-effective-area foot: Fz = area * sz; horizontal terms as a
    flat foot of equivalent square footprint."""
    if area < 0.0:
        raise ValueError("area must be >= 0")
    if area == 0.0:
        return ResultantForce(0.0, 0.0, 0.0, 0.0, 0.0)
    side = math.sqrt(area)
    flat = force_flat(side, side, z, varphi, stresses)
    return ResultantForce(flat.fx, flat.fy, area * stresses.sigma_z, area, 0.0)


def resultant_force(
    shape: FootShape,
    z: float,
    varphi: float,
    stresses: DirectionalStresses,
    area: float | None = None,
) -> ResultantForce:
    """Closed-form resultant force for any supported shape."""
    if isinstance(shape, Flat):
        return force_flat(shape.length, shape.width, z, varphi, stresses)
    if isinstance(shape, SemiCylinder):
        return force_semi_cylinder(shape.radius, shape.width, z, varphi, stresses)
    if isinstance(shape, SemiSphere):
        return force_semi_sphere(shape.radius, z, varphi, stresses)
    if area is not None:
        return force_variable_area(area, stresses, z, varphi)
    raise TypeError(f"no closed form for {type(shape).__name__}")


# ----------------------------------------------------------------------
# Quadrature oracle
# ----------------------------------------------------------------------


def integrate_mesh(
    shape: FootShape,
    z: float,
    motion: Sequence[float],
    stresses: DirectionalStresses,
    resolution: int = 10_000,
) -> ResultantForce:
    """Brute-force surface quadrature of the elementary plate forces.

    ``motion`` is the foot velocity (ux, uy, uz_down); only its direction is
    used.  For the canonical shapes this discretizes the exact per-shape
    integrands (depth slabs for the flat and cylindrical horizontal terms,
    the signed annulus integral for the sphere), so it converges to the
    closed forms as ``resolution`` grows.  ``MeshFoot`` shapes use the
    generic ``facet_force`` rule.
    """
    ux, uy = float(motion[0]), float(motion[1])
    varphi = math.atan2(abs(uy), abs(ux)) if (ux or uy) else 0.0
    if isinstance(shape, Flat):
        return _integrate_flat(shape, z, varphi, stresses, resolution)
    if isinstance(shape, SemiCylinder):
        return _integrate_semi_cylinder(shape, z, varphi, stresses, resolution)
    if isinstance(shape, SemiSphere):
        return _integrate_semi_sphere(shape, z, varphi, stresses, resolution)
    if isinstance(shape, MeshFoot):
        uz = float(motion[2]) if len(motion) > 2 else 0.0
        fx = fy = fz = 0.0
        submerged = 0
        for facet in shape.facets:
            if facet.depth < 0.0:
                continue
            submerged += 1
            kin = plate_angles(facet, (ux, uy), uz)
            dfx, dfy, dfz = facet_force(facet, kin, stresses)
            fx += dfx
            fy += dfy
            fz += dfz
        return ResultantForce(fx, fy, fz, effective_area(shape, z), 0.0)
    raise TypeError(f"cannot integrate shape {type(shape).__name__}")


def _integrate_flat(
    shape: Flat, z: float, varphi: float, stresses: DirectionalStresses, resolution: int
) -> ResultantForce:
    length, width = shape.length, shape.width
    sx, sy, sz = stresses.sigma_x, stresses.sigma_y, stresses.sigma_z
    varphi_c = math.pi / 2.0 - varphi
    fn, ft = scale_normal(varphi), scale_tangential(varphi)
    fnc, ftc = scale_normal(varphi_c), scale_tangential(varphi_c)
    # constant integrands: exact at any slab count
    n_h = max(1, round(math.sqrt(resolution)))
    dh = z / n_h if z > 0.0 else 0.0
    fx = fy = 0.0
    for _ in range(n_h):
        fx += (length * fn * sx + width * ftc * sy) * dh
        fy += (length * ft * sx + width * fnc * sy) * dh
    fz = length * width * sz
    return ResultantForce(fx, fy, fz, length * width, 0.0)


def _integrate_semi_cylinder(
    shape: SemiCylinder,
    z: float,
    varphi: float,
    stresses: DirectionalStresses,
    resolution: int,
) -> ResultantForce:
    r, width = shape.radius, shape.width
    theta_c = contact_angle(z, r)
    sx, sy, sz = stresses.sigma_x, stresses.sigma_y, stresses.sigma_z
    varphi_c = math.pi / 2.0 - varphi
    fn, ft = scale_normal(varphi), scale_tangential(varphi)
    fnc, ftc = scale_normal(varphi_c), scale_tangential(varphi_c)

    # vertical: arc strips over theta in [-theta_c, theta_c],
    # dFz = [f_n(theta) cos + f_t(theta) sin] sz W R dtheta
    n_theta = max(8, resolution)
    d_theta = 2.0 * theta_c / n_theta
    fz = 0.0
    for i in range(n_theta):
        theta = -theta_c + (i + 0.5) * d_theta
        c2 = math.cos(2.0 * theta)
        f_n1 = 0.5 * (1.0 + c2)
        f_t1 = 0.5 * (1.0 - c2)
        fz += (f_n1 * math.cos(theta) + f_t1 * math.sin(theta)) * width * r * d_theta
    fz *= sz

    # horizontal: depth slabs, x-extent = chord 2 R sin(theta), y-extent = W,
    # dh = R sin(theta) dtheta
    n_s = max(8, resolution)
    d_s = theta_c / n_s
    fx = fy = 0.0
    for i in range(n_s):
        theta = (i + 0.5) * d_s
        dh = r * math.sin(theta) * d_s
        chord = 2.0 * r * math.sin(theta)
        fx += (chord * fn * sx + width * ftc * sy) * dh
        fy += (chord * ft * sx + width * fnc * sy) * dh

    area = 2.0 * r * width * math.sin(theta_c)
    return ResultantForce(fx, fy, fz, area, theta_c)


def _integrate_semi_sphere(
    shape: SemiSphere,
    z: float,
    varphi: float,
    stresses: DirectionalStresses,
    resolution: int,
) -> ResultantForce:
    r = shape.radius
    theta_c = contact_angle(z, r)
    sx, sy, sz = stresses.sigma_x, stresses.sigma_y, stresses.sigma_z

    # vertical: annuli over theta in [0, theta_c] with the full surface
    # element 2 pi R^2 sin(theta) dtheta
    n_theta = max(4, round(math.sqrt(resolution * theta_c / (2.0 * math.pi))))
    n_phi = max(8, round(resolution / n_theta))
    d_theta = theta_c / n_theta
    d_phi = 2.0 * math.pi / n_phi
    fz = 0.0
    fx = fy = 0.0
    for i in range(n_theta):
        theta = (i + 0.5) * d_theta
        st, ct = math.sin(theta), math.cos(theta)
        c2 = math.cos(2.0 * theta)
        f_n1 = 0.5 * (1.0 + c2)
        f_t1 = 0.5 * (1.0 - c2)
        fz += (f_n1 * ct + f_t1 * st) * 2.0 * math.pi * r * r * st * d_theta
        # horizontal: signed scaling factors around the annulus, acting on
        # the vertically projected element R^2 sin^2(theta) dphi dtheta
        ds_proj = r * r * st * st * d_theta * d_phi
        for j in range(n_phi):
            phi = (j + 0.5) * d_phi
            psi2 = varphi - phi
            f_n2 = scale_normal(psi2)
            f_t2 = scale_tangential(psi2)
            cphi, sphi = math.cos(phi), math.sin(phi)
            fx += (f_n2 * cphi - f_t2 * sphi) * ds_proj
            fy += (f_n2 * sphi + f_t2 * cphi) * ds_proj
    fz *= sz
    fx *= sx
    fy *= sy

    area = math.pi * r * r * math.sin(theta_c) ** 2
    return ResultantForce(fx, fy, fz, area, theta_c)
