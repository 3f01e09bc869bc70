"""Parameter identification from intrusion records, plus built-in tables.

The built-in tables carry the calibrated constants for vertical and
horizontal intrusion at water contents 25/35/45%.  Fitting follows a
sequential linearization: shear viscosity first (multi-speed slope), then
the elastic power law on viscosity-corrected stresses, then the dwell
relaxation time, then the suction pair (yield stress, build time) by
bounded nonlinear least squares.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.optimize import curve_fit

from .rheology import MudDirectionalParams

__all__ = [
    "IntrusionRecord",
    "FitReport",
    "CalibrationError",
    "builtin_params",
    "fit_power_law",
    "fit_viscosity",
    "fit_suction",
    "fit_relaxation",
    "fit_record",
    "RECORD_HEADER",
]

RECORD_HEADER = ["t", "disp", "rate", "stress", "phase"]

#: Default characteristic length (m): the narrow extent of the reference foot.
DEFAULT_L_C = 0.065

_MPA = 1.0e6

# water content -> (alpha MPa, n, lambda s, eta_m MPa*s, eta_inf MPa*s,
#                  gamma_dot_c 1/s, tau_build s, tau_leak s, epsilon, sigma_y MPa)
_VERTICAL_TABLE = {
    0.25: (0.024, 0.53, 1.9, 0.067, 0.014, 0.14, 0.32, 0.17, 0.016, 0.0071),
    0.35: (0.013, 0.20, 3.2, 0.27, 0.0031, 0.042, 0.49, 0.089, 0.054, 0.011),
    0.45: (0.010, 0.18, 2.6, 0.31, 0.0026, 0.027, 0.58, 0.052, 0.040, 0.0086),
}
_HORIZONTAL_TABLE = {
    0.25: (0.018, 0.12, 1.8, 0.46, 0.010, 0.31, 0.63, 0.99, 0.027, 0.013),
    0.35: (0.011, 0.32, 17.0, 0.41, 0.021, 0.019, 0.25, 0.67, 0.14, 0.0094),
    0.45: (0.0078, 0.95, 8.7, 0.63, 0.065, 0.028, 0.21, 0.022, 0.12, 0.0061),
}


class CalibrationError(ValueError):
    """Raised when a fit is infeasible or unidentifiable."""


def _row_to_params(row: Sequence[float], l_c: float) -> MudDirectionalParams:
    alpha, n, lam, eta_m, eta_inf, gdc, tb, tl, eps, sy = row
    return MudDirectionalParams(
        alpha=alpha * _MPA,
        n=n,
        lam=lam,
        eta_m=eta_m * _MPA,
        eta_inf=eta_inf * _MPA,
        gamma_dot_c=gdc,
        tau_build=tb,
        tau_leak=tl,
        epsilon=eps,
        sigma_y=sy * _MPA,
        l_c=l_c,
    )


def builtin_params(
    water_content: float,
    direction: str = "vertical",
    l_c: float = DEFAULT_L_C,
) -> MudDirectionalParams:
    """Built-in calibrated constants for a water-content fraction.

    Exact rows exist at 0.25, 0.35 and 0.45; values in between are linearly
    interpolated.  Outside [0.25, 0.45] no data exists and a
    :class:`CalibrationError` is raised (higher water contents enter a gel
    regime the model does not cover).
    """
    table = {"vertical": _VERTICAL_TABLE, "horizontal": _HORIZONTAL_TABLE}.get(
        direction
    )
    if table is None:
        raise ValueError(f"direction must be 'vertical' or 'horizontal', got {direction!r}")
    keys = sorted(table)
    if not keys[0] <= water_content <= keys[-1]:
        raise CalibrationError(
            f"water content {water_content:g} outside calibrated range "
            f"[{keys[0]:g}, {keys[-1]:g}]; supply parameters explicitly"
        )
    for key in keys:
        if math.isclose(water_content, key, abs_tol=1e-12):
            return _row_to_params(table[key], l_c)
    lo = max(k for k in keys if k < water_content)
    hi = min(k for k in keys if k > water_content)
    w = (water_content - lo) / (hi - lo)
    row = tuple(
        (1.0 - w) * a + w * b for a, b in zip(table[lo], table[hi])
    )
    return _row_to_params(row, l_c)


@dataclass(frozen=True)
class IntrusionRecord:
    """One plate-intrusion experiment: time series plus metadata.

    ``disp`` is dimensionless displacement (depth / l_c), ``rate`` its time
    derivative (1/s), ``stress`` in Pa.  ``phase`` labels partition the
    record into intrude / dwell / retract segments.
    """

    t: np.ndarray
    disp: np.ndarray
    rate: np.ndarray
    stress: np.ndarray
    phase: tuple[str, ...]
    direction: str = "vertical"
    water_content: float = 0.25

    def __post_init__(self) -> None:
        n = len(self.t)
        if not (len(self.disp) == len(self.rate) == len(self.stress) == len(self.phase) == n):
            raise ValueError("record columns must share one grid")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("record time must be strictly increasing")

    def branch(self, label: str) -> "IntrusionRecord":
        mask = np.array([p == label for p in self.phase])
        if not mask.any():
            raise CalibrationError(f"record has no {label!r} phase")
        return IntrusionRecord(
            self.t[mask], self.disp[mask], self.rate[mask], self.stress[mask],
            tuple(p for p in self.phase if p == label),
            self.direction, self.water_content,
        )

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(RECORD_HEADER)
            for i in range(len(self.t)):
                writer.writerow(
                    [f"{v:.9g}" for v in (self.t[i], self.disp[i], self.rate[i], self.stress[i])]
                    + [self.phase[i]]
                )

    @classmethod
    def from_csv(cls, path: str | Path, **meta: object) -> "IntrusionRecord":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != RECORD_HEADER:
                raise ValueError(f"unexpected record header {header!r}")
            rows = [row for row in reader if row]
        data = np.array([[float(v) for v in row[:4]] for row in rows])
        phase = tuple(row[4] for row in rows)
        return cls(data[:, 0], data[:, 1], data[:, 2], data[:, 3], phase, **meta)


@dataclass(frozen=True)
class FitReport:
    """Fitted parameter subset with residual diagnostics."""

    values: dict[str, float]
    rmse: float
    stderr: dict[str, float] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()


def fit_viscosity(records: Sequence[IntrusionRecord]) -> FitReport:
    """Shear viscosity from the rate dependence of intrusion stress.

    Requires records at two or more distinct speeds; at matched
    displacement the stress difference is ``eta_inf * (rate_a - rate_b)``,
    so ``eta_inf`` is the least-squares slope of stress versus rate across
    records, evaluated on a common displacement grid.
    """
    if len(records) < 2:
        raise CalibrationError("viscosity fit needs records at >= 2 speeds")
    branches = [r.branch("intrude") for r in records]
    rates = [float(np.median(b.rate)) for b in branches]
    if max(rates) - min(rates) <= 1e-12 * max(abs(r) for r in rates):
        raise CalibrationError("records share one speed; eta_inf unidentifiable")
    lo = max(b.disp.min() for b in branches)
    hi = min(b.disp.max() for b in branches)
    if hi <= lo:
        raise CalibrationError("records have no overlapping displacement range")
    grid = np.linspace(lo, hi, 50)
    # per grid point, regress stress on rate; pool the slopes
    stresses = np.array([np.interp(grid, b.disp, b.stress) for b in branches])
    rate_arr = np.array(rates)
    x = rate_arr - rate_arr.mean()
    slopes = (stresses - stresses.mean(axis=0)).T @ x / (x @ x)
    eta_inf = float(np.mean(slopes))
    if eta_inf <= 0.0:
        raise CalibrationError("fitted eta_inf is not positive")
    resid = stresses - (stresses.mean(axis=0) + np.outer(x, slopes))
    rmse = float(np.sqrt(np.mean(resid**2)))
    return FitReport({"eta_inf": eta_inf}, rmse,
                     {"eta_inf": float(np.std(slopes) / math.sqrt(len(slopes)))})


def fit_power_law(record: IntrusionRecord, eta_inf: float = 0.0) -> FitReport:
    """Elastic power law (alpha, n) from the intrusion branch.

    The viscous offset ``eta_inf * rate`` is subtracted first; the
    remainder is fit by log-log linear regression, with ``n`` clipped to
    (0, 1) and flagged when it hits a bound.
    """
    branch = record.branch("intrude")
    mask = branch.disp > 0
    if mask.sum() < 10:
        raise CalibrationError("intrusion branch needs >= 10 samples with disp > 0")
    gamma = branch.disp[mask]
    corrected = branch.stress[mask] - eta_inf * branch.rate[mask]
    if np.any(corrected <= 0):
        raise CalibrationError(
            "viscosity-corrected stresses must be positive for the log-log fit"
        )
    coeffs, cov = np.polyfit(np.log(gamma), np.log(corrected), 1, cov=True)
    n_fit, log_alpha = float(coeffs[0]), float(coeffs[1])
    warnings: tuple[str, ...] = ()
    eps = 1e-6
    if n_fit <= eps:
        n_fit, warnings = eps, ("n pinned at lower bound; stress is displacement-independent",)
    elif n_fit >= 1.0 - eps:
        n_fit, warnings = 1.0 - eps, ("n pinned at upper bound",)
    alpha = math.exp(log_alpha)
    resid = corrected - alpha * gamma**n_fit
    rmse = float(np.sqrt(np.mean(resid**2)))
    stderr = {
        "n": float(np.sqrt(cov[0, 0])),
        "alpha": alpha * float(np.sqrt(cov[1, 1])),
    }
    return FitReport({"alpha": alpha, "n": n_fit}, rmse, stderr, warnings)


def fit_relaxation(record: IntrusionRecord) -> FitReport:
    """Relaxation time from the exponential decay of dwell stress.

    Fits ``sigma(t) = plateau + amp * exp(-(t - t0) / lam)``.  A dwell with
    no visible decay leaves ``lam`` unidentifiable.
    """
    branch = record.branch("dwell")
    t = branch.t - branch.t[0]
    s = branch.stress
    amp0 = float(s[0] - s[-1])
    span = float(np.ptp(s))
    if span <= 1e-9 * max(1.0, abs(float(s[0]))) or amp0 <= 0:
        raise CalibrationError("dwell stress shows no decay; lambda unidentifiable")
    lam0 = float(t[-1]) / 3.0

    def model(tt, plateau, amp, lam):
        return plateau + amp * np.exp(-tt / lam)

    popt, pcov = curve_fit(
        model, t, s,
        p0=(float(s[-1]), amp0, lam0),
        bounds=([-np.inf, 0.0, 1e-6], [np.inf, np.inf, np.inf]),
        maxfev=10_000,
    )
    lam = float(popt[2])
    warnings: tuple[str, ...] = ()
    if t[-1] < 3.0 * lam:
        warnings = (f"dwell ({t[-1]:.3g} s) shorter than 3*lambda ({3*lam:.3g} s); "
                    "fit may be poorly constrained",)
    resid = s - model(t, *popt)
    rmse = float(np.sqrt(np.mean(resid**2)))
    return FitReport({"lam": lam}, rmse, {"lam": float(np.sqrt(pcov[2, 2]))}, warnings)


def fit_suction(record: IntrusionRecord, eta_inf: float = 0.0) -> FitReport:
    """Suction pair (sigma_y, tau_build) from the retraction branch.

    Fits the sealed-phase closed form
    ``sigma(t) = -(1 - exp(-dt/tau_build)) * sigma_y + eta_inf * rate``
    to the descending part of the suction excursion, with positivity
    bounds and initialization from the observed minimum.
    """
    branch = record.branch("retract")
    corrected = branch.stress - eta_inf * branch.rate
    if corrected.min() >= 0.0:
        raise CalibrationError("no suction observed: retraction stress never negative")
    # suction starts at the dwell/retract boundary, one sample before the
    # first retract entry; anchor the exponential there
    first = int(np.searchsorted(record.t, branch.t[0]))
    if first > 0:
        t_onset = float(record.t[first - 1])
    else:
        t_onset = float(branch.t[0] - (branch.t[1] - branch.t[0]))
    i_min = int(np.argmin(corrected))
    dt = branch.t[: i_min + 1] - t_onset
    s = corrected[: i_min + 1]
    depth0 = abs(float(s[-1]))
    # initialization: time to reach 63% of the minimum
    i63 = int(np.searchsorted(-s, 0.63 * depth0))
    tau0 = float(dt[min(i63, len(dt) - 1)]) or float(dt[-1]) / 3.0

    def model(tt, sigma_y, tau_build):
        return -(1.0 - np.exp(-tt / tau_build)) * sigma_y

    popt, pcov = curve_fit(
        model, dt, s,
        p0=(depth0, max(tau0, 1e-3)),
        bounds=([1e-12, 1e-6], [np.inf, np.inf]),
        maxfev=10_000,
    )
    sigma_y, tau_build = float(popt[0]), float(popt[1])
    resid = s - model(dt, *popt)
    rmse = float(np.sqrt(np.mean(resid**2)))
    stderr = {
        "sigma_y": float(np.sqrt(pcov[0, 0])),
        "tau_build": float(np.sqrt(pcov[1, 1])),
    }
    return FitReport({"sigma_y": sigma_y, "tau_build": tau_build}, rmse, stderr)


def _dwell_amplitude(record: IntrusionRecord) -> float:
    try:
        branch = record.branch("dwell")
    except CalibrationError:
        return -math.inf
    return float(branch.stress[0] - branch.stress[-1])


def _suction_depth(record: IntrusionRecord) -> float:
    try:
        branch = record.branch("retract")
    except CalibrationError:
        return math.inf
    return float(branch.stress.min())


def fit_record(
    records: Sequence[IntrusionRecord],
    base: MudDirectionalParams | None = None,
) -> tuple[MudDirectionalParams, FitReport]:
    """Full sequential calibration over one or more records.

    Order: eta_inf (if multiple speeds are present), then (alpha, n), then
    lambda from the dwell, then (sigma_y, tau_build) from the retraction.
    The dwell fit uses the record with the largest decay amplitude and the
    suction fit the record with the deepest excursion (best signal-to-noise
    in each branch).  Parameters the records cannot identify are taken from
    ``base`` (defaulting to the 25% vertical table) and flagged.
    """
    if not records:
        raise CalibrationError("need at least one record")
    if base is None:
        base = builtin_params(0.25, records[0].direction)
    values: dict[str, float] = {}
    warnings: list[str] = []
    rmses: list[float] = []

    if len(records) >= 2:
        try:
            rep = fit_viscosity(records)
            values.update(rep.values)
            rmses.append(rep.rmse)
        except CalibrationError as exc:
            warnings.append(f"eta_inf not fitted: {exc}")
    else:
        warnings.append("single record: eta_inf taken from base parameters")
    eta_inf = values.get("eta_inf", base.eta_inf)

    rep = fit_power_law(records[0], eta_inf)
    values.update(rep.values)
    warnings.extend(rep.warnings)
    rmses.append(rep.rmse)

    rec_dwell = max(records, key=_dwell_amplitude)
    rec_suction = min(records, key=_suction_depth)
    for name, fitter, rec in (
        ("lam", fit_relaxation, rec_dwell),
        ("suction", fit_suction, rec_suction),
    ):
        try:
            rep = fitter(rec, eta_inf) if name == "suction" else fitter(rec)
            values.update(rep.values)
            warnings.extend(rep.warnings)
            rmses.append(rep.rmse)
        except CalibrationError as exc:
            warnings.append(f"{name} not fitted: {exc}")

    params = MudDirectionalParams(
        alpha=values.get("alpha", base.alpha),
        n=values.get("n", base.n),
        lam=values.get("lam", base.lam),
        eta_m=base.eta_m,
        eta_inf=eta_inf,
        gamma_dot_c=base.gamma_dot_c,
        tau_build=values.get("tau_build", base.tau_build),
        tau_leak=base.tau_leak,
        epsilon=base.epsilon,
        sigma_y=values.get("sigma_y", base.sigma_y),
        l_c=base.l_c,
    )
    report = FitReport(values, float(np.mean(rmses)) if rmses else math.nan,
                       warnings=tuple(warnings))
    return params, report
