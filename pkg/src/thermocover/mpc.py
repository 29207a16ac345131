"""Receding-horizon temperature control with box-bounded Peltier commands.

The predictor is the discrete first-order-plus-dead-time model; the cost
trades tracking error against a command penalty (either command magnitude
relative to a reference temperature, or command increments).  The solver is
projected gradient descent with exact line search on the quadratic, which is
plenty for the small horizons involved.  Pump actuation is bang-bang with
hysteresis, mirroring the stop-at-setpoint behaviour of the rig.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, ConvergenceError
from .fopdt import DiscreteFOPDT, discretize_fopdt
from .params import AmbientConfig, Mode, PlantParams, Target, preset_params


class PenaltyForm(enum.Enum):
    MAGNITUDE = "magnitude"
    INCREMENT = "increment"


@dataclass(frozen=True)
class MpcConfig:
    H: int = 20
    W1: float = 1.0
    W2: float = 1e-4
    T_min_th: float = 5.0
    T_max_th: float = 60.0
    t_s: float = 1.0
    penalty_form: PenaltyForm = PenaltyForm.MAGNITUDE

    def __post_init__(self):
        if self.H < 1:
            raise ConfigError("horizon must be at least 1")
        if self.W1 <= 0.0 or self.W2 < 0.0:
            raise ConfigError("need W1 > 0 and W2 >= 0")
        if self.T_min_th >= self.T_max_th:
            raise ConfigError("command bounds must satisfy min < max")
        if self.t_s <= 0.0:
            raise ConfigError("sampling time must be positive")

    def effective_horizon(self, d: int) -> int:
        """Horizon actually used for a model with d samples of dead time.

        Commands only influence predictions beyond the dead time, so the
        horizon is stretched to keep a fixed preview window past it.
        """
        if d < 20:
            return self.H
        return max(self.H, d + 20)


@dataclass(frozen=True)
class PredictionData:
    """Affine map from future commands to predicted temperatures."""

    Phi: np.ndarray    # H x H, strictly zero in the first d rows
    free: np.ndarray   # response to current state and past commands
    refs: np.ndarray   # setpoint preview
    d: int
    model: DiscreteFOPDT


def build_prediction(model: DiscreteFOPDT, T_now: float, past_inputs,
                     setpoints) -> PredictionData:
    """Assemble the prediction map for one receding-horizon solve.

    ``past_inputs`` are the last d applied commands, oldest first; on
    startup they should be padded with the current measurement (the
    steady-state-consistent value under unit DC gain).
    """
    refs = np.asarray(setpoints, dtype=float)
    H = len(refs)
    if H < 1:
        raise ConfigError("setpoint preview must contain at least one entry")
    past = np.asarray(past_inputs, dtype=float)
    if len(past) != model.d:
        raise ConfigError(
            f"need exactly {model.d} past commands, got {len(past)}"
        )
    a, b, d = model.a, model.b, model.d

    apow = a ** np.arange(H + 1)
    free = apow[1:] * T_now
    # contribution of past commands u(k-d) .. u(k-1)
    for m in range(1, d + 1):
        i = np.arange(m, H + 1)
        free[i - 1] += b * apow[i - m] * past[m - 1]
    Phi = np.zeros((H, H))
    for i in range(d + 1, H + 1):
        j = np.arange(0, i - d)
        Phi[i - 1, j] = b * apow[i - 1 - d - j]
    return PredictionData(Phi=Phi, free=free, refs=refs, d=d, model=model)


@dataclass(frozen=True)
class MpcSolution:
    sequence: np.ndarray
    cost: float
    active_lower: np.ndarray
    active_upper: np.ndarray
    iterations: int
    kkt_residual: float

    @property
    def command(self) -> float:
        return float(self.sequence[0])


_MAX_ITER = 10_000
_KKT_TOL = 1e-8


def _penalty_matrix(form: PenaltyForm, H: int, u_ref: float, u_prev: float):
    if form is PenaltyForm.MAGNITUDE:
        P = np.eye(H)
        v = np.full(H, u_ref)
    else:
        P = np.eye(H) - np.eye(H, k=-1)
        v = np.zeros(H)
        v[0] = u_prev
    return P, v


def solve_mpc(qp: PredictionData, cfg: MpcConfig, u_ref: float = 0.0,
              u_prev: float | None = None,
              warm_start=None) -> MpcSolution:
    """Minimize the tracking-plus-penalty quadratic over the command box."""
    H = len(qp.refs)
    if u_prev is None:
        u_prev = u_ref
    P, v = _penalty_matrix(cfg.penalty_form, H, u_ref, u_prev)
    e = qp.free - qp.refs

    Hm = 2.0 * (cfg.W1 * qp.Phi.T @ qp.Phi + cfg.W2 * P.T @ P)
    g0 = 2.0 * (cfg.W1 * qp.Phi.T @ e - cfg.W2 * P.T @ v)
    lo, hi = cfg.T_min_th, cfg.T_max_th

    def cost_of(u):
        r1 = qp.Phi @ u + e
        r2 = P @ u - v
        return float(cfg.W1 * r1 @ r1 + cfg.W2 * r2 @ r2)

    def grad(u):
        return Hm @ u + g0

    # Fast path: interior unconstrained minimizer already satisfies KKT.
    try:
        u_star = np.linalg.solve(Hm, -g0)
        if np.all(u_star >= lo) and np.all(u_star <= hi):
            return _finish(u_star, cost_of, grad, lo, hi, 0)
        u = np.clip(u_star, lo, hi)
    except np.linalg.LinAlgError:
        u = np.clip(np.full(H, u_ref), lo, hi)

    if warm_start is not None and len(warm_start) == H:
        w = np.clip(np.asarray(warm_start, dtype=float), lo, hi)
        if cost_of(w) < cost_of(u):
            u = w

    eigmax = float(np.linalg.eigvalsh(Hm)[-1])
    if eigmax <= 0.0:
        return _finish(u, cost_of, grad, lo, hi, 0)
    step = 1.0 / eigmax
    tol = 1e-9 * max(1.0, hi - lo)

    for it in range(1, _MAX_ITER + 1):
        g = grad(u)
        residual = float(np.max(np.abs(u - np.clip(u - g, lo, hi))))
        if residual < _KKT_TOL:
            return _finish(u, cost_of, grad, lo, hi, it - 1)
        # projected gradient step with exact line search settles the
        # active set ...
        trial = np.clip(u - step * g, lo, hi)
        dvec = trial - u
        curv = float(dvec @ Hm @ dvec)
        if curv <= 0.0:
            alpha = 1.0
        else:
            alpha = min(1.0, max(0.0, -float(g @ dvec) / curv))
        u = u + alpha * dvec
        # ... and a Newton step on the free variables finishes quickly even
        # when the quadratic is badly conditioned.
        g = grad(u)
        free = ~(((u <= lo + tol) & (g > 0.0))
                 | ((u >= hi - tol) & (g < 0.0)))
        if np.any(free):
            dn = np.zeros_like(u)
            try:
                dn[free] = np.linalg.solve(Hm[np.ix_(free, free)], -g[free])
            except np.linalg.LinAlgError:
                continue
            dvec = np.clip(u + dn, lo, hi) - u
            curv = float(dvec @ Hm @ dvec)
            if curv > 0.0:
                alpha = min(1.0, max(0.0, -float(g @ dvec) / curv))
                cand = u + alpha * dvec
                if cost_of(cand) < cost_of(u):
                    u = cand

    g = grad(u)
    residual = float(np.max(np.abs(u - np.clip(u - g, lo, hi))))
    raise ConvergenceError(
        f"projected gradient hit {_MAX_ITER} iterations "
        f"(KKT residual {residual:.3e})",
        residual=residual,
    )


def _finish(u, cost_of, grad, lo, hi, iterations):
    g = grad(u)
    residual = float(np.max(np.abs(u - np.clip(u - g, lo, hi))))
    tol = 1e-9 * max(1.0, hi - lo)
    return MpcSolution(
        sequence=u,
        cost=cost_of(u),
        active_lower=u <= lo + tol,
        active_upper=u >= hi - tol,
        iterations=iterations,
        kkt_residual=residual,
    )


# ---------------------------------------------------------------------------
# Pump hysteresis

@dataclass(frozen=True)
class PumpHysteresis:
    on_band: float = 0.3
    off_band: float = 0.1
    state: bool = False

    def __post_init__(self):
        if self.off_band > self.on_band:
            raise ConfigError("off_band must not exceed on_band")


def pump_step(h: PumpHysteresis, T_meas: float,
              T_cmd: float) -> tuple[PumpHysteresis, bool]:
    """Bang-bang pump logic: run while far from the setpoint, stop near it."""
    err = abs(T_meas - T_cmd)
    state = h.state
    if err > h.on_band:
        state = True
    elif err < h.off_band:
        state = False
    return replace(h, state=state), state


# ---------------------------------------------------------------------------
# Receding-horizon controller

#: Deadband on (setpoint - water temperature) for heat/cool preset switching.
MODE_DEADBAND = 0.1

#: Innovation gains of the offset observer (state / output disturbance).
#: L1 = 0, L2 = 1 keeps the model state open loop and assigns the whole
#: innovation to the disturbance, the classic step-response (DMC) update.
_OBS_L1 = 0.0
_OBS_L2 = 1.0


@dataclass
class ThermalController:
    """Composes the preview solver, mode switching and pump hysteresis.

    One instance drives one simulation; all persistent state (command
    history, pump latch, previous solution) lives here.
    """

    cfg: MpcConfig
    ambient: AmbientConfig
    target: Target = Target.COVER
    hysteresis: PumpHysteresis = field(default_factory=PumpHysteresis)
    mode: Mode | None = None

    def __post_init__(self):
        self._params = {m: preset_params(m, self.target) for m in Mode}
        self._models = {
            m: discretize_fopdt(p, self.cfg.t_s)
            for m, p in self._params.items()
        }
        max_d = max(m.d for m in self._models.values())
        self._history: list[float] = []
        self._max_history = max(max_d, 1)
        self._last_solution = None
        self._last_cmd: float | None = None
        self._x_hat: float | None = None
        self._p_hat = 0.0

    @property
    def params(self) -> PlantParams:
        if self.mode is None:
            raise ConfigError("controller has not stepped yet")
        return self._params[self.mode]

    def _select_mode(self, setpoint: float, T_w: float) -> Mode:
        delta = setpoint - T_w
        if self.mode is None:
            return Mode.HEAT if delta >= 0.0 else Mode.COOL
        if delta > MODE_DEADBAND:
            return Mode.HEAT
        if delta < -MODE_DEADBAND:
            return Mode.COOL
        return self.mode

    def step(self, measurement: float, T_w: float,
             setpoint_preview) -> tuple[float, bool]:
        """One control sample: returns (Peltier command, pump on)."""
        preview = np.asarray(setpoint_preview, dtype=float)
        if preview.size < 1:
            raise ConfigError("setpoint preview must not be empty")
        r_now = float(preview[0])

        new_mode = self._select_mode(r_now, T_w)
        if new_mode is not self.mode:
            self.mode = new_mode
            self._last_solution = None
            self._x_hat = None
            self._p_hat = 0.0
        model = self._models[new_mode]

        H = self.cfg.effective_horizon(model.d)
        refs = np.empty(H)
        n = min(H, preview.size)
        refs[:n] = preview[:n]
        refs[n:] = preview[-1]

        past = self._history[-model.d:] if model.d else []
        if len(past) < model.d:
            past = [measurement] * (model.d - len(past)) + past

        self.hysteresis, pump_on = pump_step(self.hysteresis, measurement,
                                             r_now)

        # Offset correction: a two-state innovation observer splits the
        # measurement into the model state x_hat and a slowly varying output
        # disturbance p_hat.  Shifting the reference by p_hat gives integral
        # action, removing the steady-state error the gain-mismatched unit-DC
        # model would otherwise leave.  While the pump is off the commands
        # cannot reach the load, so x_hat is re-anchored instead of updated
        # and the learned disturbance is kept for the next on-phase.
        if self._x_hat is None:
            self._x_hat = measurement - self._p_hat
        if pump_on:
            innovation = measurement - (self._x_hat + self._p_hat)
            self._x_hat += _OBS_L1 * innovation
            self._p_hat += _OBS_L2 * innovation
        else:
            self._x_hat = measurement - self._p_hat

        qp = build_prediction(model, self._x_hat, past, refs - self._p_hat)
        warm = None
        if self._last_solution is not None and len(self._last_solution) == H:
            warm = np.roll(self._last_solution, -1)
            warm[-1] = warm[-2]
        sol = solve_mpc(qp, self.cfg, u_ref=self.ambient.T_amb,
                        u_prev=self._last_cmd, warm_start=warm)
        cmd = sol.command
        self._last_solution = sol.sequence
        self._last_cmd = cmd
        self._history.append(cmd)
        if len(self._history) > self._max_history:
            del self._history[: len(self._history) - self._max_history]

        if pump_on:
            u_delayed = past[0] if model.d else cmd
            self._x_hat = model.a * self._x_hat + model.b * u_delayed
        return cmd, pump_on
