"""Declarative experiment descriptions and the built-in protocol set.

A scenario pins everything a run needs: setpoint schedule, control target,
contact events, environment, controller and detection settings.  Scenarios
serialize to the flat key-value format and round-trip exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import kvio
from .errors import ConfigError
from .mpc import MpcConfig, PenaltyForm, PumpHysteresis
from .params import AmbientConfig, Target
from .plant import (DEFAULT_PELTIER_LAG, DEFAULT_PELTIER_POWER, ContactEvent,
                    ContactKind)

#: Detection-grade observer filter time constant (s), applied to both poles.
#: 0 selects the natural (identification-exact) constants, which are far too
#: slow to see a 5 s touch.
DEFAULT_OBSERVER_TC = 1.0


@dataclass(frozen=True)
class DetectionConfig:
    threshold: float = 0.12      # W, on the (optionally smoothed) estimate
    min_hold: float = 1.0        # s the threshold must stay exceeded
    switch_gate: float = 6.0     # s ignored after each pump toggle
    smoothing_cutoff: float = 0.0  # rad/s first-order smoothing; 0 = off

    def __post_init__(self):
        if self.threshold <= 0.0:
            raise ConfigError("detection threshold must be positive")
        if self.min_hold < 0.0 or self.switch_gate < 0.0:
            raise ConfigError("min_hold and switch_gate must be non-negative")


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    setpoints: tuple          # ((value deg C, hold s), ...)
    target: Target = Target.COVER
    contacts: tuple = ()
    ambient: AmbientConfig = field(default_factory=AmbientConfig)
    controller: MpcConfig = field(default_factory=MpcConfig)
    detection: DetectionConfig = field(default_factory=DetectionConfig)
    pump: PumpHysteresis = field(default_factory=PumpHysteresis)
    t_s: float = 1.0
    dt: float = 0.1
    total_duration: float | None = None
    initial_temp: float | None = None   # None -> ambient
    peltier_lag: float = DEFAULT_PELTIER_LAG
    peltier_power: float = DEFAULT_PELTIER_POWER
    observer_tc: float = DEFAULT_OBSERVER_TC

    def __post_init__(self):
        for value, hold in self.setpoints:
            if hold <= 0.0:
                raise ConfigError("setpoint hold durations must be positive")
        if self.t_s <= 0.0 or self.dt <= 0.0:
            raise ConfigError("t_s and dt must be positive")
        n_sub = self.t_s / self.dt
        if abs(n_sub - round(n_sub)) > 1e-9:
            raise ConfigError("dt must divide t_s")
        if round(n_sub) < 10:
            raise ConfigError("need at least 10 plant substeps per sample")
        if self.controller.t_s != self.t_s:
            # the controller's internal model must be discretized at the
            # rate the loop actually runs
            object.__setattr__(self, "controller",
                               replace(self.controller, t_s=self.t_s))
        dur = self.duration
        for c in self.contacts:
            if c.start < 0.0 or c.start + c.duration > dur:
                raise ConfigError(
                    f"contact at t = {c.start} s falls outside the run"
                )

    @property
    def duration(self) -> float:
        if self.total_duration is not None:
            return self.total_duration
        return float(sum(hold for _, hold in self.setpoints))

    @property
    def start_temp(self) -> float:
        return self.ambient.T_amb if self.initial_temp is None \
            else self.initial_temp

    def setpoint_at(self, t: float) -> float:
        if not self.setpoints:
            return self.start_temp
        acc = 0.0
        for value, hold in self.setpoints:
            acc += hold
            if t < acc:
                return value
        return self.setpoints[-1][0]

    def setpoint_preview(self, t: float, n: int) -> np.ndarray:
        """Reference preview handed to the controller.

        The current setpoint is held over the whole window: setpoint changes
        come from the operator at run time, so the controller cannot
        anticipate them.
        """
        return np.full(n, self.setpoint_at(t))

    def segments(self):
        """(start, end, setpoint) triples, clipped to the run duration."""
        out = []
        acc = 0.0
        dur = self.duration
        for value, hold in self.setpoints:
            start, acc = acc, acc + hold
            out.append((start, min(acc, dur), value))
            if acc >= dur:
                break
        return out


# ---------------------------------------------------------------------------
# Built-in experiment protocols

def _exp1(name, setpoints, initial):
    return ScenarioSpec(
        name=name,
        setpoints=tuple(setpoints),
        target=Target.COVER,
        initial_temp=initial,
        t_s=1.0,
        dt=0.1,
    )


def _exp2(name, contacts):
    # starts pre-warmed at the first setpoint: the sensing protocol begins
    # once the display temperature is reached, as on the rig
    return ScenarioSpec(
        name=name,
        setpoints=((23.0, 90.0), (24.0, 90.0), (25.0, 90.0)),
        target=Target.PIPE,
        contacts=tuple(contacts),
        initial_temp=23.0,
        t_s=0.5,
        dt=0.05,
        observer_tc=0.4,
    )


def builtin_scenarios() -> dict:
    """The experiment protocols, keyed by name."""
    scenarios = [
        _exp1("exp1_heat",
              [(23.0, 600.0), (25.0, 600.0), (27.0, 600.0)], initial=None),
        _exp1("exp1_cool",
              [(21.5, 600.0), (21.0, 600.0), (20.0, 600.0)], initial=23.0),
        _exp1("exp1_heat_after_cool",
              [(21.0, 450.0), (23.0, 600.0), (24.0, 600.0)], initial=27.0),
        _exp2("exp2_grasp",
              [ContactEvent.preset(ContactKind.GRASP, start=135.0)]),
        _exp2("exp2_softtouch",
              [ContactEvent.preset(ContactKind.SOFT_TOUCH, start=135.0)]),
        _exp2("exp2_nocontact", []),
    ]
    return {s.name: s for s in scenarios}


# ---------------------------------------------------------------------------
# Flat key-value serialization

def scenario_to_kv(spec: ScenarioSpec) -> dict:
    out = {
        "name": spec.name,
        "target": spec.target.value,
        "t_s": spec.t_s,
        "dt": spec.dt,
        "initial_temp": "ambient" if spec.initial_temp is None
        else spec.initial_temp,
        "peltier_lag": spec.peltier_lag,
        "peltier_power": spec.peltier_power,
        "observer_tc": spec.observer_tc,
        "setpoints": " ".join(f"{v:g}:{h:g}" for v, h in spec.setpoints),
    }
    if spec.total_duration is not None:
        out["total_duration"] = spec.total_duration
    for i, c in enumerate(spec.contacts):
        out[f"contact.{i}.start"] = c.start
        out[f"contact.{i}.duration"] = c.duration
        out[f"contact.{i}.kind"] = c.kind.value
        out[f"contact.{i}.conductance"] = c.contact_conductance
        out[f"contact.{i}.t_skin"] = c.T_skin
    out["ambient.t_amb"] = spec.ambient.T_amb
    out["ambient.q_a"] = spec.ambient.q_a
    out["ambient.t_skin"] = spec.ambient.T_skin
    out["controller.H"] = spec.controller.H
    out["controller.W1"] = spec.controller.W1
    out["controller.W2"] = spec.controller.W2
    out["controller.T_min_th"] = spec.controller.T_min_th
    out["controller.T_max_th"] = spec.controller.T_max_th
    out["controller.penalty_form"] = spec.controller.penalty_form.value
    out["pump.on_band"] = spec.pump.on_band
    out["pump.off_band"] = spec.pump.off_band
    out["detection.threshold"] = spec.detection.threshold
    out["detection.min_hold"] = spec.detection.min_hold
    out["detection.switch_gate"] = spec.detection.switch_gate
    out["detection.smoothing_cutoff"] = spec.detection.smoothing_cutoff
    return out


def _parse_setpoints(text) -> tuple:
    if not str(text).strip():
        return ()
    out = []
    for chunk in str(text).split():
        value, _, hold = chunk.partition(":")
        try:
            out.append((float(value), float(hold)))
        except ValueError as exc:
            raise ConfigError(f"bad setpoint entry {chunk!r}") from exc
    return tuple(out)


def scenario_from_kv(items: dict) -> ScenarioSpec:
    items = dict(items)

    def take(key, default):
        return items.pop(key, default)

    name = str(take("name", "scenario"))
    try:
        target = Target(str(take("target", "cover")).lower())
    except ValueError as exc:
        raise ConfigError("target must be cover or pipe") from exc
    initial = take("initial_temp", "ambient")
    initial_temp = None if str(initial).lower() == "ambient" else float(initial)

    contacts = []
    i = 0
    while f"contact.{i}.start" in items:
        try:
            kind = ContactKind(str(take(f"contact.{i}.kind", "grasp")).lower())
        except ValueError as exc:
            raise ConfigError("contact kind must be grasp or soft_touch") \
                from exc
        contacts.append(ContactEvent(
            start=float(take(f"contact.{i}.start", 0.0)),
            duration=float(take(f"contact.{i}.duration", 5.0)),
            kind=kind,
            contact_conductance=float(take(f"contact.{i}.conductance", 0.8)),
            T_skin=float(take(f"contact.{i}.t_skin", 33.0)),
        ))
        i += 1

    ambient = AmbientConfig(
        T_amb=float(take("ambient.t_amb", 21.0)),
        q_a=float(take("ambient.q_a", 0.0)),
        T_skin=float(take("ambient.t_skin", 33.0)),
    )
    base_ctrl = MpcConfig(t_s=float(items.get("t_s", 1.0)))
    try:
        penalty = PenaltyForm(
            str(take("controller.penalty_form",
                     base_ctrl.penalty_form.value)).lower())
    except ValueError as exc:
        raise ConfigError("penalty_form must be magnitude or increment") \
            from exc
    controller = MpcConfig(
        H=int(take("controller.H", base_ctrl.H)),
        W1=float(take("controller.W1", base_ctrl.W1)),
        W2=float(take("controller.W2", base_ctrl.W2)),
        T_min_th=float(take("controller.T_min_th", base_ctrl.T_min_th)),
        T_max_th=float(take("controller.T_max_th", base_ctrl.T_max_th)),
        t_s=base_ctrl.t_s,
        penalty_form=penalty,
    )
    pump = PumpHysteresis(
        on_band=float(take("pump.on_band", 0.3)),
        off_band=float(take("pump.off_band", 0.1)),
    )
    detection = DetectionConfig(
        threshold=float(take("detection.threshold",
                             DetectionConfig.threshold)),
        min_hold=float(take("detection.min_hold", DetectionConfig.min_hold)),
        switch_gate=float(take("detection.switch_gate",
                               DetectionConfig.switch_gate)),
        smoothing_cutoff=float(take("detection.smoothing_cutoff",
                                    DetectionConfig.smoothing_cutoff)),
    )

    total = take("total_duration", None)
    spec = ScenarioSpec(
        name=name,
        setpoints=_parse_setpoints(take("setpoints", "")),
        target=target,
        contacts=tuple(contacts),
        ambient=ambient,
        controller=controller,
        detection=detection,
        pump=pump,
        t_s=float(take("t_s", 1.0)),
        dt=float(take("dt", 0.1)),
        total_duration=None if total is None else float(total),
        initial_temp=initial_temp,
        peltier_lag=float(take("peltier_lag", DEFAULT_PELTIER_LAG)),
        peltier_power=float(take("peltier_power", DEFAULT_PELTIER_POWER)),
        observer_tc=float(take("observer_tc", DEFAULT_OBSERVER_TC)),
    )
    if items:
        raise ConfigError(f"unknown scenario keys: {sorted(items)}")
    return spec


def load_scenario(path) -> ScenarioSpec:
    return scenario_from_kv(kvio.load(path))


def save_scenario(spec: ScenarioSpec, path) -> None:
    kvio.dump(scenario_to_kv(spec), path, header=f"scenario {spec.name}")


def apply_overrides(spec: ScenarioSpec, overrides) -> ScenarioSpec:
    """Rebuild a scenario with ``key=value`` strings applied on top."""
    return scenario_from_kv(kvio.apply_overrides(scenario_to_kv(spec),
                                                 overrides))
