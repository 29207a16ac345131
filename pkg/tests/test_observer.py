"""Heat-flow observer realization: DC behavior, poles, linearity, stability."""

import numpy as np
import pytest

from thermocover.errors import ConfigError
from thermocover.observer import (build_observer, estimate_q_aw,
                                  observer_frequency_response, observer_step,
                                  simulate_design_model)
from thermocover.params import AmbientConfig


AMBIENT = AmbientConfig()


def _iterate(obs, T_w_series, q_series):
    """Drive the raw realization with explicit (T_w, q) input streams."""
    x = np.asarray(obs.x)
    out = np.empty(len(T_w_series))
    for k, (T_w, q) in enumerate(zip(T_w_series, q_series)):
        u = np.array([T_w, q])
        out[k] = (obs.Cd @ x + obs.Dd @ u).item()
        x = obs.Ad @ x + obs.Bd @ u
    return out


def test_ambient_exchange_estimate():
    assert estimate_q_aw(21.0, 21.0, 2.1) == 0.0
    assert estimate_q_aw(25.0, 21.0, 2.1) == pytest.approx(-1.9048, rel=1e-4)
    assert estimate_q_aw(19.0, 21.0, 2.1) > 0.0
    with pytest.raises(ConfigError):
        estimate_q_aw(21.0, 21.0, -1.0)


def test_dc_rejection(heat_params):
    # constant pipe temperature with balanced net heat produces no estimate
    obs = build_observer(heat_params, 1.0)
    obs = obs.warm_start(25.0, 0.0)
    out = _iterate(obs, np.full(500, 25.0), np.zeros(500))
    assert np.max(np.abs(out)) < 1e-9


def test_high_frequency_gain(heat_params):
    # the pipe-temperature channel approaches 1/R_c at the band edge
    obs = build_observer(heat_params, 0.01)
    gains = observer_frequency_response(obs, np.pi / 0.01 * 0.999)
    assert abs(gains[0]) == pytest.approx(1.0 / heat_params.R_c, rel=1e-2)


def test_filter_poles(heat_params):
    # natural filter constants place the poles at the network's own rates
    obs = build_observer(heat_params, 1.0)
    g1, g2 = obs.filter_time_constants
    assert 1.0 / g1 == pytest.approx(4.217e-5, rel=1e-3)
    assert 1.0 / g2 == pytest.approx(2.081e-2, rel=1e-3)
    # and the discrete realization is strictly stable
    assert np.max(np.abs(np.linalg.eigvals(obs.Ad))) < 1.0


def test_linearity(heat_params):
    obs = build_observer(heat_params, 0.5, filter_time_constants=(5.0, 1.0))
    rng = np.random.default_rng(7)
    T1, q1 = rng.normal(size=(2, 400))
    T2, q2 = rng.normal(size=(2, 400))
    a, b = 1.7, -0.4
    mixed = _iterate(obs, a * T1 + b * T2, a * q1 + b * q2)
    split = a * _iterate(obs, T1, q1) + b * _iterate(obs, T2, q2)
    scale = np.max(np.abs(mixed)) + 1e-30
    assert np.max(np.abs(mixed - split)) / scale < 1e-9


def test_bounded_state_long_run(heat_params):
    obs = build_observer(heat_params, 1.0, filter_time_constants=(2.0, 0.5))
    rng = np.random.default_rng(3)
    out = _iterate(obs, rng.uniform(-1, 1, 100_000),
                   rng.uniform(-1, 1, 100_000))
    assert np.all(np.isfinite(out))
    # bounded by the realization's worst-case gain, no drift over 10^5 steps
    assert np.max(np.abs(out)) < 1e6


def test_observer_step_equilibrium(heat_params):
    # every temperature at ambient, pump off: the estimate stays at zero
    obs = build_observer(heat_params, 1.0)
    obs = obs.warm_start(AMBIENT.T_amb, 0.0)
    for _ in range(200):
        obs, q_hat = observer_step(obs, AMBIENT.T_amb, AMBIENT.T_amb, False,
                                   heat_params, AMBIENT)
        assert abs(q_hat) < 1e-9


def test_warm_start_fixed_point(heat_params):
    obs = build_observer(heat_params, 1.0, filter_time_constants=(3.0, 1.0))
    obs = obs.warm_start(24.0, 1.5)
    out = _iterate(obs, np.full(50, 24.0), np.full(50, 1.5))
    assert np.max(np.abs(out - out[0])) < 1e-9


def test_design_model_zero_contact(heat_params):
    # simulating the observer's own design model with no contact and closing
    # the loop on the same net heat yields a vanishing estimate
    t_s = 1.0
    n = 4000
    q = np.zeros(n)
    q[10:] = 0.8
    T_w = simulate_design_model(heat_params, t_s, q, np.zeros(n))
    obs = build_observer(heat_params, t_s)
    out = _iterate(obs, T_w, q)
    assert np.max(np.abs(out[100:])) < 1e-6
