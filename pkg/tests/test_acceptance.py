"""End-to-end acceptance checks, one test per criterion."""

import math

import numpy as np
import pytest

from mudforce import (
    DirectionalStresses,
    Flat,
    IntrusionRecord,
    RheologyState,
    SemiCylinder,
    SemiSphere,
    VariableAreaFlat,
    builtin_params,
    fit_record,
    fit_relaxation,
    force_semi_sphere,
    gait_profile,
    integrate_mesh,
    max_suction,
    normalize_stress,
    plate_protocol,
    resultant_force,
    simulate,
    step_rheology,
    suction_closed_form,
    thixo_exact,
)
from mudforce.forces import SPHERE_SERIES_SWITCH, _sphere_g

from conftest import synthetic_record


def test_01_parameter_table_consistency():
    """Vertical tables satisfy the yield-stress identity to < 10%."""
    expected_gaps = {0.25: 0.045, 0.35: 0.019, 0.45: 0.035}
    for water, expected in expected_gaps.items():
        p = builtin_params(water, "vertical")
        gap = abs((p.eta_m - p.eta_inf) * p.gamma_dot_c - p.sigma_y) / p.sigma_y
        assert gap < 0.10
        assert gap == pytest.approx(expected, abs=0.005)


def test_02_ode_matches_closed_forms():
    """RK4 at dt = lam/1000 tracks the two-exponential thixotropy solution
    to < 1e-5 over [0, 10 lam]; the suction ODE at held displacement tracks
    its closed form to < 1e-4."""
    p = builtin_params(0.25, "vertical")
    gd = 1.2
    dt = p.lam / 1000.0
    state = RheologyState(xi=0.0)
    t = 0.0
    checkpoints = {round(k * p.lam / dt) for k in (0.5, 1, 2, 5, 10)}
    for i in range(1, round(10 * p.lam / dt) + 1):
        state = step_rheology(state, 0.0, gd, 0.0, dt, p)
        t += dt
        if i in checkpoints:
            exact = thixo_exact(t, gd, p)
            assert abs(state.sigma_th - exact) / abs(exact) < 1e-5

    gamma = 0.5
    dts = p.default_dt()
    s = RheologyState()
    s = step_rheology(s, gamma, -1.0, 0.0, dts, p)  # enter retraction
    for _ in range(int(60 * p.tau_build / dts)):
        s = step_rheology(s, gamma, -1.0, 0.0, dts, p)
    expected = suction_closed_form(1e9, gamma, gamma, p)
    assert abs(s.sigma_s - expected) / abs(expected) < 1e-4


STRESS_TRIPLES = [
    DirectionalStresses(12_000.0, 9_000.0, 20_000.0),
    DirectionalStresses(5_000.0, 5_000.0, 8_000.0),
    DirectionalStresses(30_000.0, 1_000.0, 50_000.0),
]


@pytest.mark.parametrize(
    "shape,depths",
    [
        (Flat(0.08, 0.065), (0.004, 0.02, 0.04)),
        (SemiCylinder(0.045, 0.065), (0.0045, 0.0225, 0.045)),
        (SemiSphere(0.045), (0.0045, 0.0225, 0.045)),
    ],
    ids=["flat", "semi_cylinder", "semi_sphere"],
)
def test_03_mesh_oracle_equivalence(shape, depths):
    """Closed forms vs. surface quadrature: < 1% at 1e4 facets and < 0.2%
    at 1e5 facets over a 36-point (z, varphi, stress) grid per shape; the
    flat vertical force is exact."""
    angles = (0.0, math.pi / 6, math.pi / 4, math.pi / 3)
    for z in depths:
        for varphi in angles:
            motion = (math.cos(varphi), math.sin(varphi), 0.1)
            for stresses in STRESS_TRIPLES:
                closed = resultant_force(shape, z, varphi, stresses)
                ref = math.sqrt(closed.fx**2 + closed.fy**2 + closed.fz**2)
                for resolution, tol in ((10_000, 0.01), (100_000, 0.002)):
                    mesh = integrate_mesh(shape, z, motion, stresses, resolution)
                    err = math.sqrt(
                        (closed.fx - mesh.fx) ** 2
                        + (closed.fy - mesh.fy) ** 2
                        + (closed.fz - mesh.fz) ** 2
                    )
                    assert err / ref < tol
                    if isinstance(shape, Flat):
                        assert mesh.fz == pytest.approx(closed.fz, rel=1e-12)


def test_04_sphere_singularity():
    """Vertical sphere force is continuous through the series-branch switch
    to <= 1e-10 relative, and vanishes as the contact angle goes to zero."""
    eps = 1e-12
    lo = _sphere_g(SPHERE_SERIES_SWITCH * (1.0 - eps))
    hi = _sphere_g(SPHERE_SERIES_SWITCH * (1.0 + eps))
    assert abs(lo - hi) / hi <= 1e-10

    r = 0.045
    stresses = DirectionalStresses(0.0, 0.0, 20_000.0)
    prev = math.inf
    for theta in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5):
        z = r * (1.0 - math.cos(theta))
        fz = force_semi_sphere(r, z, 0.0, stresses).fz
        assert 0.0 <= fz < prev
        prev = fz
    assert prev < 1e-6 * force_semi_sphere(r, r, 0.0, stresses).fz


def test_05_calibration_round_trip():
    """Noise-free records recover all six fitted parameters to < 1e-4
    relative; with 5% multiplicative noise over 100 seeds, the 95th
    percentile of each recovery error stays within its tolerance."""
    truth = builtin_params(0.25, "vertical")
    rates = (0.05, 0.1, 0.2)

    clean = [synthetic_record(truth, r) for r in rates]
    fitted, _ = fit_record(clean, base=truth)
    for attr in ("alpha", "n", "eta_inf", "sigma_y", "tau_build", "lam"):
        got, want = getattr(fitted, attr), getattr(truth, attr)
        assert abs(got - want) / abs(want) < 1e-4, attr

    errors = {k: [] for k in ("alpha", "n", "eta_inf", "sigma_y", "tau_build", "lam")}
    for seed in range(100):
        rng = np.random.default_rng(seed)
        noisy = [synthetic_record(truth, r, noise=0.05, rng=rng) for r in rates]
        fitted, _ = fit_record(noisy, base=truth)
        errors["alpha"].append(abs(fitted.alpha - truth.alpha) / truth.alpha)
        errors["n"].append(abs(fitted.n - truth.n))
        errors["eta_inf"].append(abs(fitted.eta_inf - truth.eta_inf) / truth.eta_inf)
        errors["sigma_y"].append(abs(fitted.sigma_y - truth.sigma_y) / truth.sigma_y)
        errors["tau_build"].append(
            abs(fitted.tau_build - truth.tau_build) / truth.tau_build
        )
        errors["lam"].append(abs(fitted.lam - truth.lam) / truth.lam)

    tolerances = {
        "alpha": 0.05,
        "n": 0.05,  # absolute
        "eta_inf": 0.10,
        "sigma_y": 0.10,
        "tau_build": 0.15,
        "lam": 0.10,
    }
    for name, tol in tolerances.items():
        p95 = float(np.percentile(errors[name], 95))
        assert p95 < tol, f"{name}: 95th percentile {p95:.4g} exceeds {tol}"


def test_06_four_phase_force_signature():
    """Plate protocol on a flat foot: power-law rise, exponential dwell
    relaxation with time constant within 5% of lambda, suction bounded by
    the yield stress, decay toward zero after the seal breaks."""
    pv = builtin_params(0.25, "vertical")
    ph = builtin_params(0.25, "horizontal")
    shape = Flat(0.08, 0.065)
    trace = simulate(shape, plate_protocol(0.04, 0.02, 8.0, 0.005), pv, ph)
    phases = np.array(trace.phase)
    fz = trace.force[:, 2]

    # 1) intrusion rises monotonically (up to solver jitter) and is concave
    intrude = np.flatnonzero(phases == "intrude")
    rise = fz[intrude[1:]]
    assert np.all(np.diff(rise) > -1e-9)
    first_half = rise[: len(rise) // 2]
    second_half = rise[len(rise) // 2:]
    assert (first_half[-1] - first_half[0]) > (second_half[-1] - second_half[0])

    # 2) dwell relaxes exponentially with the thixotropic time constant
    dwell = np.flatnonzero(phases == "dwell")
    record = IntrusionRecord(
        trace.t, trace.gamma[:, 2], trace.gamma_dot[:, 2],
        trace.stress[:, 2], trace.phase,
    )
    rep = fit_relaxation(record)
    assert rep.values["lam"] == pytest.approx(pv.lam, rel=0.05)
    assert fz[dwell[-1]] < fz[dwell[0]]

    # 3) suction occurs; the suction stress itself never exceeds the yield
    # stress (the total force also carries a negative thixotropic term)
    assert fz.min() < 0.0
    assert trace.suction.min() < 0.0
    assert trace.suction.min() >= -pv.sigma_y * (1.0 + 1e-9)

    # 4) the seal breaks near the surface and the force decays to ~0
    assert abs(fz[-1]) < 0.05 * fz.max()


def test_07_ordering_properties():
    """(a) Normalized peak intrusion stress flat > semi-cylinder >
    semi-sphere at matched shallow depth; (b) the elastic stress peak is
    speed-invariant; (c) peak total stress decreases with water content."""
    pv = builtin_params(0.25, "vertical")
    ph = builtin_params(0.25, "horizontal")

    # (a) shallow matched-depth ordering (inverts at large contact angles)
    profile = gait_profile(0.08, 0.002, 0.13, 0.005)
    peaks = {}
    for name, shape in (
        ("flat", Flat(0.08, 0.065)),
        ("cylinder", SemiCylinder(0.045, 0.065)),
        ("sphere", SemiSphere(0.045)),
    ):
        trace = simulate(shape, profile, pv, ph)
        peaks[name] = float(np.nanmax(normalize_stress(trace)))
    assert peaks["flat"] > peaks["cylinder"] > peaks["sphere"]

    # (b) peak elastic stress identical across the three gait speeds
    sb_peaks = []
    for speed in (0.13, 0.2, 0.26):
        trace = simulate(
            Flat(0.08, 0.065), gait_profile(0.08, 0.02, speed, 0.005), pv, ph
        )
        sb = pv.alpha * (trace.depth / pv.l_c) ** pv.n
        sb_peaks.append(float(sb.max()))
    assert sb_peaks[0] == pytest.approx(sb_peaks[1], rel=1e-12)
    assert sb_peaks[1] == pytest.approx(sb_peaks[2], rel=1e-12)

    # (c) peak total stress monotone decreasing in water content; the small
    # tau_leak of the 45% horizontal row demands a finer step
    profile = plate_protocol(0.02, 0.02, 1.0, 0.002)
    totals = []
    for water in (0.25, 0.35, 0.45):
        trace = simulate(
            Flat(0.08, 0.065),
            profile,
            builtin_params(water, "vertical"),
            builtin_params(water, "horizontal"),
        )
        totals.append(float(trace.stress[:, 2].max()))
    assert totals[0] > totals[1] > totals[2]


def test_08_morphing_foot_suction_proxy():
    """Collapsing the retraction-phase area to 40% of the intrusion area
    cuts max suction to <= 45% of the rigid flat foot's."""
    pv = builtin_params(0.25, "vertical")
    ph = builtin_params(0.25, "horizontal")
    profile = plate_protocol(0.04, 0.02, 1.0, 0.005)
    area = 0.08 * 0.065
    rigid = simulate(VariableAreaFlat(area, area), profile, pv, ph)
    morphing = simulate(VariableAreaFlat(area, 0.4 * area), profile, pv, ph)
    assert max_suction(rigid) > 0.0
    assert max_suction(morphing) <= 0.45 * max_suction(rigid)


def test_09_determinism_and_convergence(tmp_path):
    """Repeated runs are byte-identical; halving dt changes the trace by
    < 0.5% in max norm on the shared samples."""
    pv = builtin_params(0.25, "vertical")
    ph = builtin_params(0.25, "horizontal")
    shape = Flat(0.08, 0.065)

    paths = []
    for tag in ("a", "b"):
        trace = simulate(shape, plate_protocol(0.04, 0.02, 1.0, 0.005), pv, ph)
        path = tmp_path / f"trace_{tag}.csv"
        trace.to_csv(path)
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()

    coarse = simulate(shape, plate_protocol(0.04, 0.02, 1.0, 0.01), pv, ph)
    fine = simulate(shape, plate_protocol(0.04, 0.02, 1.0, 0.005), pv, ph)
    n = len(coarse.t)
    scale = float(np.abs(coarse.force).max())
    gap = float(np.abs(fine.force[::2][:n] - coarse.force[:n]).max())
    assert gap < 0.005 * scale
