"""Shared fixtures and synthetic-trace helpers for the test suite."""

import numpy as np
import pytest

from thermocover.fopdt import fopdt_step_response
from thermocover.params import AmbientConfig, Mode, preset_params
from thermocover.plant import PlantState, step_plant
from thermocover.sysid import StepTrace


@pytest.fixture(scope="session")
def heat_params():
    return preset_params(Mode.HEAT)


@pytest.fixture(scope="session")
def cool_params():
    return preset_params(Mode.COOL)


def make_fopdt_trace(params, step=19.0, base=21.0, n=3000, t_s=1.0,
                     sigma=0.0, seed=None):
    """Synthetic single-step trace of the combined first-order model.

    The input steps from ``base`` to ``base + step`` at the second sample;
    the response follows the closed-form step response from the same time.
    """
    t = t_s * np.arange(n)
    u = np.full(n, base + step)
    u[0] = base
    y = np.array([base if k == 0
                  else base + fopdt_step_response(params, step, 0.0,
                                                  (k - 1) * t_s)
                  for k in range(n)])
    if sigma > 0.0:
        rng = np.random.default_rng(seed)
        y = y + rng.normal(0.0, sigma, size=y.shape)
    return StepTrace(t=t, u=u, y=y, mode=params.mode)


def make_plant_step_run(params, n=3000, pump_off_at=1500, base=21.0,
                        level=40.0):
    """Open-loop plant run: input step at the second sample, pump switched
    off partway through so the free-cooling dynamics are excited too.

    Returns (t, u, T_co, T_w, T_c, pump_on) as arrays sampled at 1 s.
    """
    ambient = AmbientConfig()
    state = PlantState.uniform(base)
    dt = 0.1
    t, u, y_co, y_w, y_c, pump = [], [], [], [], [], []
    for k in range(n):
        cmd = base if k == 0 else level
        on = k < pump_off_at
        t.append(float(k))
        u.append(cmd)
        y_co.append(state.T_co)
        y_w.append(state.T_w)
        y_c.append(state.T_c)
        pump.append(on)
        for _ in range(10):
            state = step_plant(state, cmd, on, 0.0, params, ambient, dt,
                               peltier_lag=0.0, peltier_power=float("inf"))
    return tuple(np.asarray(a) for a in (t, u, y_co, y_w, y_c, pump))
