import math

import numpy as np
import pytest

from hpm_ecoepi.model import FIG1_PARAMS, FIG1_STATE, InitialState, ModelParams
from hpm_ecoepi.oracle import NonFiniteState, integrate, sample

DECOUPLED = FIG1_PARAMS.replace(delta=0.0, c1=0.0, c2=0.0, K=math.inf)


def test_linear_growth_exact():
    traj = integrate(DECOUPLED, FIG1_STATE, 1.0, 0.1)
    assert traj.samples[-1, 0] == pytest.approx(0.01 * math.exp(0.1), rel=1e-9)
    assert traj.grid[-1] == 1.0


def test_first_sample_is_initial_state():
    traj = integrate(FIG1_PARAMS, FIG1_STATE, 2.0, 0.1)
    assert tuple(traj.samples[0]) == (0.01, 0.01, 0.01)


def test_last_interval_shortened():
    traj = integrate(FIG1_PARAMS, FIG1_STATE, 1.05, 0.1)
    assert traj.grid[-1] == 1.05
    np.testing.assert_allclose(np.diff(traj.grid)[:-1], 0.1, rtol=1e-12)
    assert np.diff(traj.grid)[-1] == pytest.approx(0.05)


def test_step_larger_than_horizon():
    with pytest.raises(ValueError):
        integrate(FIG1_PARAMS, FIG1_STATE, 1.0, 2.0)


def test_nonfinite_detected():
    p = ModelParams(r=50.0, K=1e-3, c1=0.0, c2=0.0, delta=0.0, e=0.1, d1=0.1, d2=0.1)
    with pytest.raises(NonFiniteState) as info:
        integrate(p, InitialState(1e3, 1.0, 1.0), 10.0, 0.5)
    assert info.value.time > 0


def test_fig1_step_halving():
    # discretisation error at the default step is far below anything we compare with
    a = integrate(FIG1_PARAMS, FIG1_STATE, 10.0, 2e-3)
    b = integrate(FIG1_PARAMS, FIG1_STATE, 10.0, 1e-3)
    assert np.abs(a.samples[-1] - b.samples[-1]).max() <= 1e-10


def test_self_convergence_order():
    def E(h):
        a = integrate(FIG1_PARAMS, FIG1_STATE, 5.0, h)
        b = integrate(FIG1_PARAMS, FIG1_STATE, 5.0, h / 4)
        return np.abs(a.samples - b.samples[::4]).max()

    assert 12 <= E(0.25) / E(0.125) <= 20


def test_determinism():
    a = integrate(FIG1_PARAMS, FIG1_STATE, 3.0, 0.01)
    b = integrate(FIG1_PARAMS, FIG1_STATE, 3.0, 0.01)
    assert a.samples.tobytes() == b.samples.tobytes()


def test_nonnegative():
    rng = np.random.default_rng(5)
    for _ in range(20):
        v = rng.uniform(0, 0.5, 8)
        p = ModelParams(r=max(v[0], 1e-3), K=rng.uniform(0.1, 1.0), c1=v[2], c2=v[3], delta=v[4],
                        e=v[5], d1=max(v[6], 1e-3), d2=max(v[7], 1e-3))
        s = InitialState(*rng.uniform(0.001, 1.0, 3))
        traj = integrate(p, s, 10.0, 1e-2)
        assert traj.samples.min() >= -1e-12


def test_sample_at_grid_points():
    traj = integrate(FIG1_PARAMS, FIG1_STATE, 1.0, 0.1)
    for i in (0, 3, len(traj.grid) - 1):
        assert np.array_equal(sample(traj, traj.grid[i]), traj.samples[i])
    assert tuple(sample(traj, 0.0)) == (0.01, 0.01, 0.01)


def test_sample_midpoint():
    traj = integrate(DECOUPLED, FIG1_STATE, 1.0, 0.1)
    t = 0.45
    exact = np.array([0.01 * math.exp(0.1 * t), 0.01 * math.exp(-0.2 * t), 0.01 * math.exp(-0.2 * t)])
    np.testing.assert_allclose(sample(traj, t), exact, rtol=0, atol=1e-8)


def test_sample_vector_shape():
    traj = integrate(FIG1_PARAMS, FIG1_STATE, 1.0, 0.1)
    assert sample(traj, np.linspace(0, 1, 7)).shape == (7, 3)


def test_sample_out_of_range():
    traj = integrate(FIG1_PARAMS, FIG1_STATE, 1.0, 0.1)
    with pytest.raises(ValueError):
        sample(traj, 1.5)
    with pytest.raises(ValueError):
        sample(traj, -0.1)
