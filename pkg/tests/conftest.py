import numpy as np
import pytest

from mudforce import IntrusionRecord, builtin_params


@pytest.fixture(scope="session")
def vertical_25():
    return builtin_params(0.25, "vertical")


@pytest.fixture(scope="session")
def horizontal_25():
    return builtin_params(0.25, "horizontal")


def synthetic_record(params, rate, noise=0.0, rng=None, dt=0.01,
                     n_intrude=400, n_dwell=1800, n_retract=300):
    """Noise-free (or noisy) record built from the fitted model forms:
    power-law-plus-viscous intrusion, exponential dwell decay, one-exponential
    suction during retraction."""
    p = params
    t1 = np.arange(1, n_intrude + 1) * dt
    g = rate * t1
    s1 = p.alpha * g**p.n + p.eta_inf * rate
    t2 = t1[-1] + np.arange(1, n_dwell + 1) * dt
    plateau = p.alpha * g[-1] ** p.n
    s2 = plateau + 3.0 * p.eta_inf * rate * np.exp(-(t2 - t1[-1]) / p.lam)
    t3 = t2[-1] + np.arange(1, n_retract + 1) * dt
    s3 = -(1.0 - np.exp(-(t3 - t2[-1]) / p.tau_build)) * p.sigma_y - p.eta_inf * rate
    t = np.concatenate([t1, t2, t3])
    disp = np.concatenate([g, np.full(n_dwell, g[-1]), g[-1] - rate * (t3 - t2[-1])])
    r = np.concatenate([
        np.full(n_intrude, rate), np.zeros(n_dwell), np.full(n_retract, -rate)
    ])
    s = np.concatenate([s1, s2, s3])
    if noise > 0.0:
        assert rng is not None
        s = s * (1.0 + noise * rng.standard_normal(len(s)))
    phase = tuple(
        ["intrude"] * n_intrude + ["dwell"] * n_dwell + ["retract"] * n_retract
    )
    return IntrusionRecord(t, disp, r, s, phase)
