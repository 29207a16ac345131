"""Parameter identification from step-response traces.

Two fitters mirror how the hardware constants were derived:

* ``fit_fopdt`` recovers the combined time constant and dead time of the
  first-order-plus-dead-time approximation from a single step response.
  Dead time makes the least-squares problem nonconvex, so the classic
  fraction-of-rise two-point method seeds the search, the dead time is
  refined by golden-section with the remaining parameters solved inside,
  and a final Gauss-Newton polish runs over everything.

* ``fit_two_node`` recovers the RC-network constants (R_w, C_w, R_c, C_c,
  R_aw) from one or more traces against the three-node plant ODEs, with the
  tank constants (C_co, R_co) held known.  Traces must contain both pump-on
  and pump-off stretches or the pump resistance drops out of the dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .errors import ConfigError, IllConditionedFitError
from .params import AmbientConfig, Mode
from .trace import SimTrace


@dataclass(frozen=True)
class StepTrace:
    """Uniformly sampled (time, input level, measured temperature) record."""

    t: np.ndarray
    u: np.ndarray          # commanded input level (Peltier temperature)
    y: np.ndarray          # measured temperature
    signal: str = "T_c"    # which node y was measured at
    pump_on: np.ndarray | None = None
    mode: Mode = Mode.HEAT

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.size < 3:
            raise ConfigError("trace too short to fit")
        steps = np.diff(t)
        if np.max(np.abs(steps - steps[0])) > 1e-6 * max(steps[0], 1e-12):
            raise ConfigError("trace must be uniformly sampled")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "u", np.asarray(self.u, dtype=float))
        object.__setattr__(self, "y", np.asarray(self.y, dtype=float))
        if self.pump_on is not None:
            object.__setattr__(self, "pump_on",
                               np.asarray(self.pump_on, dtype=bool))

    @property
    def t_s(self) -> float:
        return float(self.t[1] - self.t[0])

    @property
    def step_index(self) -> int:
        """Index of the single input step."""
        changes = np.flatnonzero(np.diff(self.u) != 0.0)
        if changes.size == 0:
            raise ConfigError("input never steps")
        if changes.size > 1:
            raise ConfigError("expected a single input step")
        return int(changes[0] + 1)

    @staticmethod
    def from_sim_trace(trace: SimTrace, signal: str = "T_w",
                       mode: Mode = Mode.HEAT) -> "StepTrace":
        return StepTrace(t=trace.t, u=trace.T_p_cmd,
                         y=trace.column(signal), signal=signal,
                         pump_on=trace.pump_on, mode=mode)

    @staticmethod
    def from_csv(path, signal: str = "T_w",
                 mode: Mode = Mode.HEAT) -> "StepTrace":
        return StepTrace.from_sim_trace(SimTrace.from_csv(path),
                                        signal=signal, mode=mode)


@dataclass(frozen=True)
class FitReport:
    parameters: dict
    residual_rms: float
    confidence: dict = field(default_factory=dict)
    warnings: tuple = ()

    def to_kv(self) -> dict:
        out = dict(self.parameters)
        out["residual_rms"] = self.residual_rms
        for name, hw in self.confidence.items():
            out[f"confidence.{name}"] = hw
        return out


def golden_section(f, lo: float, hi: float, tol: float = 1e-4,
                   max_iter: int = 200) -> float:
    """Minimize a unimodal scalar function on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# FOPDT fit

def _fopdt_basis(t, t_step, L_d, tau):
    arg = t - t_step - L_d
    phi = np.where(arg > 0.0, 1.0 - np.exp(-np.maximum(arg, 0.0) / tau), 0.0)
    return phi


def _linear_fit(y, phi):
    """Best (offset, gain) for y ~ y0 + K*phi; returns (y0, K, sse)."""
    A = np.column_stack([np.ones_like(phi), phi])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = y - A @ coef
    return coef[0], coef[1], float(res @ res)


def _two_point_init(t, y, t_step):
    """Fraction-of-rise initializer for (tau, L_d)."""
    y0 = float(np.mean(y[t < t_step])) if np.any(t < t_step) else float(y[0])
    y_inf = float(np.mean(y[t >= t[-1] - 0.05 * (t[-1] - t[0])]))
    rise = y_inf - y0
    if abs(rise) < 1e-12:
        raise IllConditionedFitError("trace shows no response to the step")
    frac = (y - y0) / rise
    after = t >= t_step

    def crossing(level):
        hit = np.flatnonzero(after & (frac >= level))
        if hit.size == 0:
            raise IllConditionedFitError(
                f"response never reaches {level:.0%} of its rise; "
                "trace does not settle"
            )
        return float(t[hit[0]] - t_step)

    t28 = crossing(0.283)
    t63 = crossing(0.632)
    tau = max(1.5 * (t63 - t28), 1e-6)
    L_d = max(t63 - tau, 0.0)
    return tau, L_d, y0, y_inf


def fit_fopdt(trace: StepTrace) -> FitReport:
    """Fit (R_com_C_com, L_d, gain, offset) to a single step response."""
    t, y = trace.t, trace.y
    k_step = trace.step_index
    t_step = float(t[k_step])
    span = float(t[-1] - t_step)

    tau0, L0, *_ = _two_point_init(t, y, t_step)
    if span < 3.0 * tau0:
        raise IllConditionedFitError(
            f"trace covers only {span / tau0:.2f} time constants; need >= 3"
        )

    def inner_sse(L_d):
        def over_tau(tau):
            return _linear_fit(y, _fopdt_basis(t, t_step, L_d, tau))[2]
        tau = golden_section(over_tau, tau0 / 5.0, tau0 * 5.0,
                             tol=1e-3 * tau0)
        return over_tau(tau), tau

    L_hi = max(2.0 * L0, 0.5 * tau0, 4.0 * trace.t_s)
    L_opt = golden_section(lambda L: inner_sse(L)[0], 0.0, L_hi,
                           tol=1e-3 * max(trace.t_s, 1.0))
    _, tau_opt = inner_sse(L_opt)
    y0, K, _ = _linear_fit(y, _fopdt_basis(t, t_step, L_opt, tau_opt))

    # Gauss-Newton polish over all four parameters
    def residual(p):
        tau, L_d, gain, off = p
        return off + gain * _fopdt_basis(t, t_step, abs(L_d), abs(tau)) - y

    sol = least_squares(residual, x0=[tau_opt, L_opt, K, y0], method="lm")
    tau_f, L_f, K_f, y0_f = abs(sol.x[0]), abs(sol.x[1]), sol.x[2], sol.x[3]
    rms = float(np.sqrt(np.mean(sol.fun ** 2)))

    u_step = float(trace.u[k_step] - trace.u[k_step - 1])
    params = {
        "R_com_C_com": tau_f,
        "L_d": L_f,
        "gain": K_f,
        "offset": y0_f,
        "q_a": u_step - K_f,
    }
    conf = _confidence(sol.jac, rms, ("R_com_C_com", "L_d", "gain", "offset"))
    return FitReport(parameters=params, residual_rms=rms, confidence=conf)


def _confidence(jac, rms, names):
    try:
        cov = np.linalg.inv(jac.T @ jac)
    except np.linalg.LinAlgError:
        return {}
    hw = rms * np.sqrt(np.maximum(np.diag(cov), 0.0))
    return {name: float(h) for name, h in zip(names, hw)}


# ---------------------------------------------------------------------------
# Two-node (plus known tank) fit

_TWO_NODE_NAMES = ("R_w", "C_w", "R_c", "C_c", "R_aw")
_TWO_NODE_INIT = {"R_w": 5.0, "C_w": 150.0, "R_c": 60.0, "C_c": 0.3,
                  "R_aw": 2.0}
_SIGNAL_INDEX = {"T_co": 0, "T_w": 1, "T_c": 2}


def _plant_matrices(R_w, C_w, R_c, C_c, R_aw, C_co, R_co, pump_on):
    """State [T_co, T_w, T_c], inputs [T_p, T_amb]."""
    gw = 1.0 / R_w if pump_on else 0.0
    A = np.array([
        [-(1.0 / R_co + gw) / C_co, gw / C_co, 0.0],
        [gw / C_w, -(gw + 1.0 / R_aw + 1.0 / R_c) / C_w, 1.0 / (R_c * C_w)],
        [0.0, 1.0 / (R_c * C_c), -1.0 / (R_c * C_c)],
    ])
    B = np.array([
        [1.0 / (R_co * C_co), 0.0],
        [0.0, 1.0 / (R_aw * C_w)],
        [0.0, 0.0],
    ])
    return A, B


def _segment_bounds(trace: StepTrace):
    pump = trace.pump_on if trace.pump_on is not None \
        else np.zeros(len(trace.t), dtype=bool)
    change = (np.diff(trace.u) != 0.0) | (np.diff(pump) != 0)
    cuts = np.concatenate(([0], np.flatnonzero(change) + 1, [len(trace.t)]))
    return cuts, pump


def _simulate_trace(theta, trace: StepTrace, C_co, R_co,
                    ambient: AmbientConfig, x0):
    """Piecewise-constant-input response via eigendecomposition."""
    R_w, C_w, R_c, C_c, R_aw = theta
    cuts, pump = _segment_bounds(trace)
    t = trace.t
    x = np.array(x0, dtype=float)
    out = np.empty((len(t), 3))
    for a, b in zip(cuts[:-1], cuts[1:]):
        A, B = _plant_matrices(R_w, C_w, R_c, C_c, R_aw, C_co, R_co,
                               bool(pump[a]))
        u = np.array([trace.u[a], ambient.T_amb])
        x_ss = np.linalg.solve(A, -B @ u)
        lam, V = np.linalg.eig(A)
        c0 = np.linalg.solve(V, x - x_ss)
        dt_rel = (t[a:b] - t[a])[:, None]
        modes = np.exp(lam[None, :] * dt_rel)
        seg = np.real(modes * c0[None, :] @ V.T) + x_ss[None, :]
        out[a:b] = seg
        # continue from the segment's true endpoint, one sample past t[b-1]
        t_end = t[b - 1] - t[a] + (t[1] - t[0])
        x = np.real(V @ (c0 * np.exp(lam * t_end))) + x_ss
    return out


def fit_two_node(traces, C_co: float, R_co: float,
                 ambient: AmbientConfig | None = None) -> FitReport:
    """Least-squares fit of the RC-network constants to one or more traces."""
    if ambient is None:
        ambient = AmbientConfig()
    traces = list(traces)
    if not traces:
        raise ConfigError("need at least one trace")

    x0_list = []
    for tr in traces:
        if tr.signal not in _SIGNAL_INDEX:
            raise ConfigError(f"unknown measured signal {tr.signal!r}")
        x0_list.append(np.full(3, float(tr.y[0])))

    n_res = sum(len(tr.t) for tr in traces)

    def residual(log_theta):
        theta = np.exp(log_theta)
        parts = []
        try:
            for tr, x0 in zip(traces, x0_list):
                sim = _simulate_trace(theta, tr, C_co, R_co, ambient, x0)
                parts.append(sim[:, _SIGNAL_INDEX[tr.signal]] - tr.y)
            res = np.concatenate(parts)
        except np.linalg.LinAlgError:
            return np.full(n_res, 1e6)
        if not np.all(np.isfinite(res)):
            return np.full(n_res, 1e6)
        return res

    # bounds keep the search in a physically generous region so degenerate
    # parameter vectors (singular dynamics, overflowing exponentials) are
    # never visited
    x_init = np.log([_TWO_NODE_INIT[n] for n in _TWO_NODE_NAMES])
    sol = least_squares(residual, x0=x_init, method="trf",
                        bounds=(x_init - 8.0, x_init + 8.0),
                        x_scale="jac", xtol=1e-12, ftol=1e-12)
    theta = np.exp(sol.x)
    rms = float(np.sqrt(np.mean(sol.fun ** 2)))

    col_norms = np.linalg.norm(sol.jac, axis=0)
    scale = max(float(np.max(col_norms)), 1e-300)
    dead = [n for n, c in zip(_TWO_NODE_NAMES, col_norms)
            if c < 1e-8 * scale]
    if dead:
        raise IllConditionedFitError(
            f"insufficient excitation: {', '.join(dead)} cannot be "
            "identified from these traces",
            unidentifiable=dead,
        )
    warnings = tuple(
        f"{n} weakly identifiable (relative sensitivity "
        f"{c / scale:.2e})"
        for n, c in zip(_TWO_NODE_NAMES, col_norms)
        if c < 1e-4 * scale
    )

    params = {n: float(v) for n, v in zip(_TWO_NODE_NAMES, theta)}
    conf = {n: float(h * v) for (n, h), v in
            zip(_confidence(sol.jac, rms, _TWO_NODE_NAMES).items(), theta)}
    return FitReport(parameters=params, residual_rms=rms, confidence=conf,
                     warnings=warnings)
