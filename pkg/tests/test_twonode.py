"""Two-node pipe/cover network realization and its transfer function."""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from thermocover.twonode import (two_node_model, water_response,
                                 water_transfer_direct)


def test_eigenvalue_structure(heat_params):
    model = two_node_model(heat_params)
    lam = np.sort(np.linalg.eigvals(model.A).real)
    assert lam[1] == pytest.approx(0.0, abs=1e-15)
    assert lam[0] < 0.0


def test_asymptotic_heating_rate(heat_params):
    # constant 1 W into the water node integrates over the total capacitance
    model = two_node_model(heat_params)
    rate = 1.0 / (heat_params.C_w + heat_params.C_c)
    assert rate == pytest.approx(0.0050557, rel=1e-4)

    def deriv(_t, x):
        return model.A @ x + model.B @ np.array([1.0, 0.0])

    sol = solve_ivp(deriv, (0.0, 5000.0), [0.0, 0.0], rtol=1e-10,
                    atol=1e-12, dense_output=True)
    dT = (sol.sol(5000.0)[0] - sol.sol(4000.0)[0]) / 1000.0
    assert dT == pytest.approx(rate, rel=1e-6)


def test_equilibrium_is_constant(heat_params):
    model = two_node_model(heat_params)
    x = np.array([25.0, 25.0])
    assert np.allclose(model.A @ x, 0.0, atol=1e-15)


def test_isolated_network_conserves_heat(heat_params):
    # unequal initial temperatures relax to the capacitance-weighted mean
    model = two_node_model(heat_params)
    x0 = np.array([30.0, 20.0])

    def deriv(_t, x):
        return model.A @ x

    sol = solve_ivp(deriv, (0.0, 1e6), x0, rtol=1e-11, atol=1e-12)
    mean = (heat_params.C_w * x0[0] + heat_params.C_c * x0[1]) \
        / (heat_params.C_w + heat_params.C_c)
    assert sol.y[0, -1] == pytest.approx(mean, rel=1e-8)
    assert sol.y[1, -1] == pytest.approx(mean, rel=1e-8)


def test_frequency_response_matches_rational_form(heat_params, cool_params):
    for params in (heat_params, cool_params):
        model = two_node_model(params)
        for omega in np.logspace(-4.0, 0.0, 20):
            direct = water_transfer_direct(params, 1j * omega)
            realized = water_response(model, 1j * omega)
            assert abs(realized - direct) / abs(direct) < 1e-9
