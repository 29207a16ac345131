"""Closed-loop simulation: controller, observer and plant in lockstep.

Controller and observer run at the sample rate t_s; the plant integrates at
the substep rate dt.  Everything is deterministic: the same scenario always
produces a bit-identical trace.
"""

from __future__ import annotations

from .errors import NumericError, ThermocoverError
from .mpc import ThermalController
from .observer import build_observer, observer_step
from .params import Mode
from .plant import PlantState, contact_heat_flow, pump_flow, step_plant
from .scenario import ScenarioSpec
from .trace import SimTrace


def _observer_for(scenario: ScenarioSpec, controller: ThermalController):
    tc = scenario.observer_tc
    filt = None if tc <= 0.0 else (tc, tc)
    return build_observer(controller.params, scenario.t_s,
                          filter_time_constants=filt)


def simulate(scenario: ScenarioSpec) -> SimTrace:
    """Run a scenario to completion and return the sampled trace."""
    t_s = scenario.t_s
    n_samples = round(scenario.duration / t_s)
    n_sub = round(t_s / scenario.dt)
    ambient = scenario.ambient

    controller = ThermalController(
        cfg=scenario.controller,
        ambient=ambient,
        target=scenario.target,
        hysteresis=scenario.pump,
    )
    preview_len = max(
        scenario.controller.effective_horizon(m.d)
        for m in controller._models.values()
    )

    state = PlantState.uniform(scenario.start_temp)
    observer = None
    observer_mode: Mode | None = None

    rows = []
    for k in range(n_samples):
        t = k * t_s
        measurement = state.T_c if scenario.target.value == "cover" \
            else state.T_w
        preview = scenario.setpoint_preview(t, preview_len)
        cmd, pump_on = controller.step(measurement, state.T_w, preview)
        params = controller.params

        if observer is None or controller.mode is not observer_mode:
            observer = _observer_for(scenario, controller)
            q_w0 = pump_flow(state.T_co, state.T_w, pump_on, params)
            q_aw0 = (ambient.T_amb - state.T_w) / params.R_aw
            observer = observer.warm_start(state.T_w, q_w0 + q_aw0)
            observer_mode = controller.mode

        observer, q_hat = observer_step(observer, state.T_w, state.T_co,
                                        pump_on, params, ambient)

        q_i_true = sum(contact_heat_flow(c, state.T_c, t)
                       for c in scenario.contacts)
        in_contact = any(c.active(t) for c in scenario.contacts)
        q_w = pump_flow(state.T_co, state.T_w, pump_on, params)
        rows.append((t, cmd, state.T_p, state.T_co, state.T_w, state.T_c,
                     pump_on, q_w, q_i_true, q_hat, in_contact))

        try:
            for j in range(n_sub):
                t_sub = t + j * scenario.dt
                q_i = sum(contact_heat_flow(c, state.T_c, t_sub)
                          for c in scenario.contacts)
                state = step_plant(state, cmd, pump_on, q_i, params, ambient,
                                   scenario.dt,
                                   peltier_lag=scenario.peltier_lag,
                                   peltier_power=scenario.peltier_power)
        except NumericError as exc:
            raise NumericError(
                f"{scenario.name}: plant step failed at t = {t:.6g} s: {exc}"
            ) from exc
        except ThermocoverError as exc:
            raise type(exc)(f"{scenario.name}: at t = {t:.6g} s: {exc}") \
                from exc

    return SimTrace.from_rows(rows, name=scenario.name,
                              meta={"scenario": scenario})
