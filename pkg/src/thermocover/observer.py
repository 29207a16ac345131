"""Heat-flow observer: estimates contact heat from pipe-side temperatures.

The estimate inverts the water-channel model,

    q_hat = [ (R_c C_w C_c s^2 + (C_w + C_c) s) T_w
              - (R_c C_c s + 1) (q_w + q_aw) ] / F(s),

with the realizability filter F(s) = (g1 s + 1)(g2 s + 1).  The natural
choice g1 = R_c C_w, g2 = R_c C_c makes the inversion exact for the model's
own contact channel; faster filter constants trade that exactness for the
bandwidth needed to catch short touches, in the usual disturbance-observer
way.  Both inputs are measurable without touching the cover surface: q_w
follows from the tank/pipe temperature difference, q_aw from ambient.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import cont2discrete, lfilter

from .errors import ConfigError
from .params import AmbientConfig, PlantParams


def estimate_q_aw(T_w: float, T_amb: float, R_aw: float) -> float:
    """Ambient-exchange heat flow into the water pipe (negative = loss)."""
    if R_aw <= 0.0:
        raise ConfigError("R_aw must be positive")
    return (T_amb - T_w) / R_aw


def _observer_canonical(num_rows, den):
    """Shared-denominator MISO realization in observer canonical form."""
    a1, a0 = den[1], den[2]
    A = np.array([[-a1, 1.0], [-a0, 0.0]])
    C = np.array([[1.0, 0.0]])
    B = np.zeros((2, len(num_rows)))
    D = np.zeros((1, len(num_rows)))
    for j, num in enumerate(num_rows):
        D[0, j] = num[0]
        B[0, j] = num[1] - num[0] * a1
        B[1, j] = num[2] - num[0] * a0
    return A, B, C, D


@dataclass(frozen=True)
class ObserverState:
    """Discrete observer realization plus its two-entry filter state."""

    Ad: np.ndarray
    Bd: np.ndarray
    Cd: np.ndarray
    Dd: np.ndarray
    x: tuple            # filter state, 2 entries
    q_hat: float        # last estimate, W
    t_s: float
    filter_time_constants: tuple

    def reset(self) -> "ObserverState":
        """Zero the filter state (cold start)."""
        return replace(self, x=(0.0, 0.0), q_hat=0.0)

    def warm_start(self, T_w: float, q: float) -> "ObserverState":
        """Set the state to its fixed point for constant inputs.

        Avoids the long startup transient of the slow filter pole when the
        rig begins in thermal equilibrium.
        """
        u = np.array([T_w, q])
        x = np.linalg.solve(np.eye(2) - self.Ad, self.Bd @ u)
        q_hat = (self.Cd @ x + self.Dd @ u).item()
        return replace(self, x=(float(x[0]), float(x[1])), q_hat=q_hat)


def build_observer(params: PlantParams, t_s: float,
                   filter_time_constants: tuple | None = None) -> ObserverState:
    """Build the discrete-time observer (trapezoidal discretization).

    ``filter_time_constants`` picks the two poles of F(s); ``None`` uses the
    natural constants (R_c C_w, R_c C_c) for which the model inversion is
    exact.
    """
    if t_s <= 0.0:
        raise ConfigError("sampling time must be positive")
    if filter_time_constants is None:
        g1 = params.R_c * params.C_w
        g2 = params.R_c * params.C_c
    else:
        g1, g2 = filter_time_constants
        if g1 <= 0.0 or g2 <= 0.0:
            raise ConfigError("filter time constants must be positive")

    lead = g1 * g2
    den = (1.0, (g1 + g2) / lead, 1.0 / lead)
    num_Tw = (
        params.R_c * params.C_w * params.C_c / lead,
        (params.C_w + params.C_c) / lead,
        0.0,
    )
    num_q = (0.0, -params.R_c * params.C_c / lead, -1.0 / lead)

    A, B, C, D = _observer_canonical([num_Tw, num_q], den)
    Ad, Bd, Cd, Dd, _ = cont2discrete((A, B, C, D), t_s, method="bilinear")
    return ObserverState(
        Ad=Ad, Bd=Bd, Cd=Cd, Dd=Dd,
        x=(0.0, 0.0), q_hat=0.0, t_s=t_s,
        filter_time_constants=(g1, g2),
    )


def observer_step(obs: ObserverState, T_w: float, T_co: float, pump_on: bool,
                  params: PlantParams,
                  ambient: AmbientConfig) -> tuple[ObserverState, float]:
    """Advance the observer one sample and return (new state, q_hat).

    q_w is closed from the measurable tank/pipe difference and gated by the
    pump; the filter keeps integrating with q_w = 0 while the pump is off.
    """
    q_w = (T_co - T_w) / params.R_w if pump_on else 0.0
    q = q_w + estimate_q_aw(T_w, ambient.T_amb, params.R_aw)
    u = np.array([T_w, q])
    x = np.asarray(obs.x)
    q_hat = (obs.Cd @ x + obs.Dd @ u).item()
    x_next = obs.Ad @ x + obs.Bd @ u
    new = replace(obs, x=(float(x_next[0]), float(x_next[1])), q_hat=q_hat)
    return new, q_hat


def observer_frequency_response(obs: ObserverState, omega: float) -> np.ndarray:
    """Per-input complex response of the discrete realization at omega rad/s."""
    z = np.exp(1j * omega * obs.t_s)
    M = z * np.eye(2) - obs.Ad
    X = np.linalg.solve(M, obs.Bd)
    return (obs.Cd @ X + obs.Dd).ravel()


@dataclass(frozen=True)
class LowPassSmoother:
    """Optional first-order smoothing for the raw estimate."""

    alpha: float
    y: float = 0.0

    @staticmethod
    def from_cutoff(cutoff: float, t_s: float) -> "LowPassSmoother":
        if cutoff <= 0.0:
            raise ConfigError("cutoff must be positive")
        alpha = 1.0 - np.exp(-cutoff * t_s)
        return LowPassSmoother(alpha=float(alpha))

    def step(self, value: float) -> tuple["LowPassSmoother", float]:
        y = self.y + self.alpha * (value - self.y)
        return replace(self, y=y), y


# ---------------------------------------------------------------------------
# Design-model channels (continuous transfer functions of the linear
# pipe-cover model the observer is derived from), used for validation.

def water_channel_tf(params: PlantParams):
    """(q_w + q_aw) -> T_w of the design model, as (num, den)."""
    num = [params.R_c * params.C_c, 1.0]
    den = [params.R_c * params.C_w * params.C_c,
           params.C_w + params.C_c, 0.0]
    return num, den


def contact_channel_tf(params: PlantParams):
    """q_i -> T_w channel the observer design assumes, as (num, den)."""
    num = np.polymul([params.R_c * params.C_w, 1.0],
                     [params.R_c * params.C_c, 1.0]).tolist()
    den = [params.R_c * params.C_w * params.C_c,
           params.C_w + params.C_c, 0.0]
    return num, den


def simulate_design_model(params: PlantParams, t_s: float,
                          q_series, qi_series) -> np.ndarray:
    """Sampled T_w of the design model under the two input streams.

    Both channels are discretized by the same trapezoidal rule as the
    observer, so feeding the result back in closes an exact algebraic loop.
    """
    q_series = np.asarray(q_series, dtype=float)
    qi_series = np.asarray(qi_series, dtype=float)
    if q_series.shape != qi_series.shape:
        raise ConfigError("input streams must have equal length")
    T_w = np.zeros_like(q_series)
    for tf, u in ((water_channel_tf(params), q_series),
                  (contact_channel_tf(params), qi_series)):
        num, den = tf
        (bz, az), _ = _bilinear_tf(num, den, t_s)
        T_w += lfilter(bz, az, u)
    return T_w


def _bilinear_tf(num, den, t_s):
    bz, az, _ = cont2discrete((num, den), t_s, method="bilinear")
    return (np.atleast_1d(np.squeeze(bz)), np.atleast_1d(az)), t_s
