"""Scalar mud constitutive law for a single stress direction.

The total resistive stress on an intruding plate is the sum of three parts:

* an immediate, rate-independent elastic resistance ``sigma_b = alpha * gamma**n``,
* a thixotropic viscous stress ``sigma_th`` driven by a structural parameter
  ``xi`` that tracks the build-up ("aging") and shear-induced breakdown
  ("rejuvenation") of the mud microstructure,
* a suction pressure ``sigma_s <= 0`` that develops in the sealed cavity under
  a retracting intruder and is bounded in magnitude by the yield stress.

All displacements are dimensionless (``gamma = z / l_c``) and rates carry
units of 1/s (``gamma_dot = u / l_c``).  Stresses are in Pa.

Unit note: the published parameter tables quote viscosities in "MPa/s"; they
are interpreted here as MPa*s (stress per unit dimensionless rate), which is
the only reading dimensionally consistent with ``sigma = eta * gamma_dot``.
Built-in tables convert to Pa*s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "MudDirectionalParams",
    "RheologyState",
    "StepSizeError",
    "heaviside_smooth",
    "sealing_factor",
    "immediate_stress",
    "xi_steady",
    "thixo_steady",
    "thixo_exact",
    "thixo_closed_form",
    "suction_closed_form",
    "step_rheology",
    "total_stress",
]

#: Reference intrusion speed (m/s) used for the default switch smoothness.
REFERENCE_SPEED = 0.2


class StepSizeError(ValueError):
    """Raised when an integration step violates the stability guard."""


@dataclass(frozen=True)
class MudDirectionalParams:
    """Calibrated constitutive constants for one stress direction.

    Args:
        alpha: Immediate-resistance stress scale (Pa).
        n: Power-law exponent, in (0, 1).
        lam: Thixotropic relaxation time (s).
        eta_m: Structural viscosity (Pa*s).
        eta_inf: Shear viscosity (Pa*s); must be below ``eta_m``.
        gamma_dot_c: Critical dimensionless rate at which mud fully
            fluidizes (1/s); equals the ratio ``k_a / k_r``.
        tau_build: Suction build time constant (s).
        tau_leak: Suction leak time constant (s).
        epsilon: Sealing displacement scale (dimensionless).
        sigma_y: Yield stress (Pa), also the suction magnitude bound.
        l_c: Characteristic length (m) nondimensionalizing depth and rate.
        nu: Smoothness constant of the intrusion/retraction switch (1/s).
            Defaults to 1% of the reference rate ``REFERENCE_SPEED / l_c``.
        k_r: Rejuvenation rate constant (1/s per unit rate).  The tables only
            report the ratio ``gamma_dot_c = k_a / k_r``; the default fixes
            the structural time constant at rest to ``lam``
            (``k_a = 1 / lam``), consistent with the modeling assumption
            ``tau_xi ~ lam``.
    """

    alpha: float
    n: float
    lam: float
    eta_m: float
    eta_inf: float
    gamma_dot_c: float
    tau_build: float
    tau_leak: float
    epsilon: float
    sigma_y: float
    l_c: float
    nu: float = 0.0
    k_r: float = 0.0

    def __post_init__(self) -> None:
        if self.nu <= 0.0:
            object.__setattr__(self, "nu", 0.01 * REFERENCE_SPEED / self.l_c)
        if self.k_r <= 0.0:
            object.__setattr__(self, "k_r", 1.0 / (self.lam * self.gamma_dot_c))
        positives = {
            "alpha": self.alpha,
            "lam": self.lam,
            "eta_inf": self.eta_inf,
            "gamma_dot_c": self.gamma_dot_c,
            "tau_build": self.tau_build,
            "tau_leak": self.tau_leak,
            "epsilon": self.epsilon,
            "sigma_y": self.sigma_y,
            "l_c": self.l_c,
            "nu": self.nu,
            "k_r": self.k_r,
        }
        for name, value in positives.items():
            if not value > 0.0:
                raise ValueError(f"{name} must be positive, got {value}")
        if not 0.0 < self.n < 1.0:
            raise ValueError(f"n must lie in (0, 1), got {self.n}")
        if not self.eta_m > self.eta_inf:
            raise ValueError("eta_m must exceed eta_inf")

    @property
    def k_a(self) -> float:
        """Aging rate constant (1/s)."""
        return self.gamma_dot_c * self.k_r

    def tau_xi(self, gamma_dot: float) -> float:
        """Time constant of the structural-parameter dynamics at a given rate."""
        return 1.0 / (self.k_a + self.k_r * abs(gamma_dot))

    @property
    def sigma_y_derived(self) -> float:
        """Yield stress implied by the thixotropic constants.

        ``(eta_m - eta_inf) * gamma_dot_c`` -- exposed as a consistency check
        only; the stored ``sigma_y`` is authoritative (the horizontal tables
        violate the relation by an order of magnitude).
        """
        return (self.eta_m - self.eta_inf) * self.gamma_dot_c

    def yield_consistency(self) -> float:
        """Relative gap between the stored and derived yield stress."""
        return abs(self.sigma_y_derived - self.sigma_y) / self.sigma_y

    def max_stable_dt(self) -> float:
        """Largest step size admitted by the stability guard."""
        return min(self.lam, self.tau_build, self.tau_leak) / 10.0

    def default_dt(self) -> float:
        return min(self.lam, self.tau_build, self.tau_leak) / 100.0


@dataclass(frozen=True)
class RheologyState:
    """Evolving internal state of one stress direction.

    ``gamma_0`` and ``t_w`` are latched at the first intrusion-to-retraction
    transition; ``sigma_s`` stays zero until then.
    """

    sigma_th: float = 0.0
    xi: float = 1.0
    sigma_s: float = 0.0
    gamma_0: float = 0.0
    t_w: float = 0.0
    retracting: bool = False
    t: float = 0.0


def heaviside_smooth(gamma_dot: float, nu: float) -> float:
    """Smooth intrusion/retraction switch ``0.5 * (1 - tanh(gamma_dot / nu))``.

    Near 0 during intrusion (``gamma_dot > 0``), near 1 during retraction.
    """
    return 0.5 * (1.0 - math.tanh(gamma_dot / nu))


def sealing_factor(gamma: float, gamma_0: float, epsilon: float) -> float:
    """Sealing state of the contact interface, in (0, 1).

    ``0.5 * (1 - tanh((gamma - gamma_0) / epsilon))``: fully sealed (~1)
    before the intruder has travelled past the retraction-onset displacement
    ``gamma_0``, broken (~0) once the accumulated displacement exceeds it by
    a few ``epsilon``.
    """
    return 0.5 * (1.0 - math.tanh((gamma - gamma_0) / epsilon))


def immediate_stress(gamma: float, params: MudDirectionalParams) -> float:
    """Rate-independent elastic resistance ``alpha * gamma**n``.

    Raises:
        ValueError: if ``gamma`` is negative (callers clamp submerged depth).
    """
    if gamma < 0.0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if gamma == 0.0:
        return 0.0
    return params.alpha * gamma**params.n


def xi_steady(gamma_dot: float, params: MudDirectionalParams) -> float:
    """Steady-state structural parameter ``gamma_dot_c / (gamma_dot_c + |gamma_dot|)``."""
    return params.gamma_dot_c / (params.gamma_dot_c + abs(gamma_dot))


def thixo_steady(gamma_dot: float, params: MudDirectionalParams) -> float:
    """Steady-state thixotropic stress ``(eta_inf + xi_ss * eta_m) * gamma_dot``."""
    return (params.eta_inf + xi_steady(gamma_dot, params) * params.eta_m) * gamma_dot


def thixo_exact(t: float, gamma_dot: float, params: MudDirectionalParams) -> float:
    """Exact constant-rate thixotropic stress from zero initial conditions
    (``sigma_th(0) = 0`` and ``xi(0) = 0``: structure builds from fully
    broken, so ``xi(t) = (1 - exp(-t/tau_xi)) * xi_ss``).

    Two-exponential solution with time constants ``lam`` and
    ``tau_xi = 1 / (k_a + k_r |gamma_dot|)``:

        sigma_th(t) = (1 - exp(-t/lam)) * sigma_th_ss
                      + (exp(-t/lam) - exp(-t/tau_xi)) * tau_xi/(tau_xi - lam)
                        * xi_ss * eta_m * gamma_dot

    The removable singularity at ``tau_xi == lam`` is evaluated by its
    analytic limit ``-(t/lam) * exp(-t/lam) * xi_ss * eta_m * gamma_dot``.
    """
    lam = params.lam
    tau = params.tau_xi(gamma_dot)
    xi_ss = xi_steady(gamma_dot, params)
    ss = thixo_steady(gamma_dot, params)
    first = (1.0 - math.exp(-t / lam)) * ss
    struct = xi_ss * params.eta_m * gamma_dot
    if abs(tau - lam) <= 1e-12 * lam:
        second = -(t / lam) * math.exp(-t / lam) * struct
    else:
        second = (math.exp(-t / lam) - math.exp(-t / tau)) * tau / (tau - lam) * struct
    return first + second


def thixo_closed_form(t: float, gamma_dot: float, params: MudDirectionalParams) -> float:
    """Quasi-static single-exponential approximation ``(1 - exp(-t/lam)) * sigma_th_ss``."""
    return (1.0 - math.exp(-t / params.lam)) * thixo_steady(gamma_dot, params)


def suction_closed_form(
    dt: float, gamma: float, gamma_0: float, params: MudDirectionalParams
) -> float:
    """Closed-form suction pressure a time ``dt`` after retraction onset.

    With sealing factor ``phi`` held at its instantaneous value,

        sigma_s = (1 - exp(-a dt)) * sigma_s_ss,
        a = phi/tau_build + (1 - phi)/tau_leak,
        sigma_s_ss = -phi * sigma_y / (a * tau_build).

    Fully sealed (phi = 1) the steady state is ``-sigma_y``; with the seal
    broken (phi = 0) the suction vanishes.
    """
    phi = sealing_factor(gamma, gamma_0, params.epsilon)
    a = phi / params.tau_build + (1.0 - phi) / params.tau_leak
    ss = -phi * params.sigma_y / (a * params.tau_build)
    return (1.0 - math.exp(-a * dt)) * ss


def _rhs(
    sigma_th: float,
    xi: float,
    sigma_s: float,
    gamma: float,
    gamma_dot: float,
    gamma_ddot: float,
    gamma_0: float,
    retracting: bool,
    p: MudDirectionalParams,
) -> tuple[float, float, float]:
    f_xi = (p.eta_inf + xi * p.eta_m) * gamma_dot + p.lam * p.eta_inf * gamma_ddot
    d_sigma_th = (f_xi - sigma_th) / p.lam
    d_xi = p.k_a * (1.0 - xi) - p.k_r * abs(gamma_dot) * xi
    if retracting:
        phi = sealing_factor(gamma, gamma_0, p.epsilon)
        d_sigma_s = (
            -phi / p.tau_build * (sigma_s + p.sigma_y)
            - (1.0 - phi) / p.tau_leak * sigma_s
        )
    else:
        d_sigma_s = 0.0
    return d_sigma_th, d_xi, d_sigma_s


def step_rheology(
    state: RheologyState,
    gamma: float,
    gamma_dot: float,
    gamma_ddot: float,
    dt: float,
    params: MudDirectionalParams,
) -> RheologyState:
    """Advance the direction state one fixed RK4 step.

    ``gamma`` is the accumulated (path) displacement used by the sealing
    factor; kinematic inputs are held constant over the step.  The
    intrusion-to-retraction transition is detected when the smooth switch
    crosses its midpoint (``gamma_dot < 0``) after some displacement has
    accumulated; ``t_w`` and ``gamma_0`` latch at that instant.

    Raises:
        StepSizeError: if ``dt`` exceeds ``min(lam, tau_build, tau_leak)/10``.
    """
    if dt <= 0.0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    guard = params.max_stable_dt()
    if dt > guard * (1.0 + 1e-12):
        raise StepSizeError(
            f"dt={dt:g} exceeds stability guard {guard:g} "
            "(min(lam, tau_build, tau_leak)/10)"
        )

    retracting = state.retracting
    gamma_0 = state.gamma_0
    t_w = state.t_w
    if not retracting and gamma > 0.0 and heaviside_smooth(gamma_dot, params.nu) > 0.5:
        retracting = True
        gamma_0 = gamma
        t_w = state.t

    y = (state.sigma_th, state.xi, state.sigma_s)

    def f(y3: tuple[float, float, float]) -> tuple[float, float, float]:
        return _rhs(
            y3[0], y3[1], y3[2], gamma, gamma_dot, gamma_ddot, gamma_0, retracting, params
        )

    k1 = f(y)
    k2 = f(tuple(y[i] + 0.5 * dt * k1[i] for i in range(3)))
    k3 = f(tuple(y[i] + 0.5 * dt * k2[i] for i in range(3)))
    k4 = f(tuple(y[i] + dt * k3[i] for i in range(3)))
    sigma_th, xi, sigma_s = (
        y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(3)
    )
    xi = min(1.0, max(0.0, xi))
    sigma_s = min(0.0, sigma_s)

    return RheologyState(
        sigma_th=sigma_th,
        xi=xi,
        sigma_s=sigma_s,
        gamma_0=gamma_0,
        t_w=t_w,
        retracting=retracting,
        t=state.t + dt,
    )


def total_stress(
    state: RheologyState,
    gamma: float,
    gamma_dot: float,
    params: MudDirectionalParams,
) -> float:
    """Total directional stress ``sigma_b + sigma_th + H_nu(gamma_dot) * sigma_s``.

    ``gamma`` here is the submerged-depth displacement driving the elastic
    term (clamped nonnegative by callers).
    """
    sigma_b = immediate_stress(gamma, params)
    gate = heaviside_smooth(gamma_dot, params.nu)
    return sigma_b + state.sigma_th + gate * state.sigma_s
