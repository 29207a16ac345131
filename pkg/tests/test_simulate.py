"""Closed-loop simulation wiring: determinism, trace shape, contact truth."""

import numpy as np

from thermocover.plant import ContactEvent, ContactKind
from thermocover.scenario import ScenarioSpec
from thermocover.simulate import simulate


def _short_scenario(**kw):
    base = dict(name="short", setpoints=((23.0, 60.0),), t_s=1.0, dt=0.1)
    base.update(kw)
    return ScenarioSpec(**base)


def test_zero_length_scenario():
    spec = _short_scenario(total_duration=0.0)
    trace = simulate(spec)
    assert len(trace) == 0


def test_time_grid_and_columns():
    trace = simulate(_short_scenario())
    assert len(trace) == 60
    assert np.allclose(np.diff(trace.t), 1.0)
    assert np.all(np.isfinite(trace.T_c))
    assert np.all(trace.T_p_cmd >= 5.0) and np.all(trace.T_p_cmd <= 60.0)


def test_determinism():
    spec = _short_scenario()
    a = simulate(spec).to_csv_text()
    b = simulate(spec).to_csv_text()
    assert a == b


def test_contact_truth_confined_to_window():
    event = ContactEvent.preset(ContactKind.GRASP, start=20.0)
    trace = simulate(_short_scenario(contacts=(event,)))
    inside = (trace.t >= 20.0) & (trace.t <= 25.0)
    assert np.all(trace.q_i_true[~inside] == 0.0)
    assert np.any(trace.q_i_true[inside] != 0.0)
    assert np.all(trace.contact_flag == inside)


def test_cover_heats_toward_setpoint():
    trace = simulate(_short_scenario(setpoints=((24.0, 300.0),)))
    assert trace.T_c[-1] > trace.T_c[0] + 1.0
