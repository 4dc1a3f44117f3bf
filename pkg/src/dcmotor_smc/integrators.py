"""Fixed-step integration of the motor and the sampled-data closed loop.

The plant is integrated with ``dt_plant`` while the controller runs every
``dt_control`` and its output is held (zero-order hold) in between. Switching
can therefore happen at most once per control period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .controllers import lyapunov_value, reference_state
from .errors import ControllerFault, DomainError, IntegrationBlowup
from .motor import MotorParams, MotorState
from .scenarios import Scenario, disturbance_at

METHODS = ("euler", "rk4")
BLOWUP_LIMIT = 1e6


@dataclass(frozen=True)
class SimConfig:
    dt_plant: float = 1e-4
    dt_control: float = 1e-3
    t_end: float = 35.0
    method: str = "rk4"

    def __post_init__(self):
        for name in ("dt_plant", "dt_control", "t_end"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise DomainError(f"{name} must be a finite real number, got {value!r}", field=name)
            object.__setattr__(self, name, float(value))
        if self.method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}, got {self.method!r}", field="method")
        if not 0.0 < self.dt_plant <= self.dt_control:
            raise DomainError("need 0 < dt_plant <= dt_control", field="dt_plant")
        if self.dt_control > self.t_end:
            raise DomainError("need dt_control <= t_end", field="dt_control")
        ratio = self.dt_control / self.dt_plant
        if abs(ratio - round(ratio)) > 1e-9 * ratio:
            raise DomainError("dt_control must be an integer multiple of dt_plant", field="dt_control")

    @property
    def substeps(self) -> int:
        return int(round(self.dt_control / self.dt_plant))

    @property
    def n_samples(self) -> int:
        return int(math.floor(self.t_end / self.dt_control + 1e-9)) + 1


COLUMNS = ("t", "setpoint", "omega", "i", "u", "u_eq", "s_value", "v_lyap", "c_r")


@dataclass(frozen=True)
class SimulationTrace:
    """Column-oriented record of a closed-loop run, one row per control instant.

    Units: ``t`` s, ``setpoint``/``omega`` rad/s, ``i`` A, ``u``/``u_eq`` V,
    ``c_r`` N m. ``u`` is the command actually applied, after saturation.
    """

    t: np.ndarray
    setpoint: np.ndarray
    omega: np.ndarray
    i: np.ndarray
    u: np.ndarray
    u_eq: np.ndarray
    s_value: np.ndarray
    v_lyap: np.ndarray
    c_r: np.ndarray

    @classmethod
    def from_rows(cls, rows) -> "SimulationTrace":
        rows = list(rows)
        if rows:
            cols = np.asarray(rows, dtype=float).T
        else:
            cols = np.empty((len(COLUMNS), 0))
        return cls(*(np.ascontiguousarray(c) for c in cols))

    def __len__(self) -> int:
        return int(self.t.size)

    def rows(self):
        return zip(*(getattr(self, name) for name in COLUMNS))

    def slice(self, start: int, stop: int) -> "SimulationTrace":
        return SimulationTrace(*(getattr(self, name)[start:stop] for name in COLUMNS))


def _euler(i, w, u, c_r, R, L, J, f, k, dt):
    di = (u - R * i - k * w) / L
    dw = (k * i - f * w - c_r) / J
    return i + dt * di, w + dt * dw


def _rk4(i, w, u, c_r, R, L, J, f, k, dt):
    h = 0.5 * dt
    k1i = (u - R * i - k * w) / L
    k1w = (k * i - f * w - c_r) / J
    i2 = i + h * k1i
    w2 = w + h * k1w
    k2i = (u - R * i2 - k * w2) / L
    k2w = (k * i2 - f * w2 - c_r) / J
    i3 = i + h * k2i
    w3 = w + h * k2w
    k3i = (u - R * i3 - k * w3) / L
    k3w = (k * i3 - f * w3 - c_r) / J
    i4 = i + dt * k3i
    w4 = w + dt * k3w
    k4i = (u - R * i4 - k * w4) / L
    k4w = (k * i4 - f * w4 - c_r) / J
    s = dt / 6.0
    return (i + s * (k1i + 2.0 * k2i + 2.0 * k3i + k4i),
            w + s * (k1w + 2.0 * k2w + 2.0 * k3w + k4w))


_STEPPERS = {"euler": _euler, "rk4": _rk4}


def _checked_step(stepper, state, u, c_r, params, dt):
    if not dt > 0.0:
        raise DomainError(f"dt must be > 0, got {dt!r}", field="dt")
    p = params
    i, w = stepper(state[0], state[1], u, c_r, p.R, p.L, p.J, p.f, p.k, dt)
    if not (math.isfinite(i) and math.isfinite(w)):
        raise IntegrationBlowup(f"non-finite state after a step of dt={dt!r}", step=dt)
    return MotorState(i, w)


def step_euler(state: MotorState, u: float, c_r: float, params: MotorParams, dt: float) -> MotorState:
    """Explicit Euler step ``x + dt * f(x, u, c_r)``."""
    return _checked_step(_euler, state, u, c_r, params, dt)


def step_rk4(state: MotorState, u: float, c_r: float, params: MotorParams, dt: float) -> MotorState:
    """Classical Runge-Kutta step with ``u`` and ``c_r`` held over the step."""
    return _checked_step(_rk4, state, u, c_r, params, dt)


def integrate_constant(state, u, c_r, params, dt, n_steps, method="rk4") -> MotorState:
    """Open-loop run of ``n_steps`` with constant inputs; returns the final state."""
    stepper = _STEPPERS[method]
    p = params
    i, w = state
    for _ in range(n_steps):
        i, w = stepper(i, w, u, c_r, p.R, p.L, p.J, p.f, p.k, dt)
    if not (math.isfinite(i) and math.isfinite(w)):
        raise IntegrationBlowup(f"non-finite state after {n_steps} steps of dt={dt!r}", step=n_steps)
    return MotorState(i, w)


def simulate(controller, scenario: Scenario, params: MotorParams, cfg: SimConfig) -> SimulationTrace:
    """Run the sampled-data loop from ``t = 0`` to ``cfg.t_end``.

    At every control instant the controller sees the reference state and the
    measured state and returns a command, which is clipped to
    ``+-params.u_max`` and held while the plant takes ``cfg.substeps`` steps.
    The disturbance is sampled at the same instants and held likewise.

    Raises
    ------
    ControllerFault
        The controller returned a non-finite command.
    IntegrationBlowup
        The state left the ``1e6`` envelope or became non-finite.
    """
    if scenario.t_end + 1e-12 < cfg.t_end:
        raise DomainError("scenario horizon is shorter than the simulation horizon", field="t_end")

    stepper = _STEPPERS[cfg.method]
    R, L, J, f0, k = params.R, params.L, params.J, params.f, params.k
    u_max = params.u_max
    dt_c = cfg.dt_control
    dt_p = cfg.dt_plant
    substeps = cfg.substeps
    n = cfg.n_samples

    omega_d = scenario.target_speed
    x_d = reference_state(omega_d, params)
    memory = controller.initial_memory()
    i, w = scenario.initial_state
    profile = scenario.disturbance

    rows = []
    for step in range(n):
        t = step * dt_c
        dist = disturbance_at(profile, t)
        out, memory = controller.control(memory, x_d, MotorState(i, w), dt_c)
        if not (math.isfinite(out.u) and math.isfinite(out.u_eq) and math.isfinite(out.s)):
            raise ControllerFault(f"{controller.kind} controller returned u={out.u!r} at t={t:.6g} s")
        u = min(u_max, max(-u_max, out.u))
        rows.append((t, omega_d, w, i, u, out.u_eq, out.s, lyapunov_value(out.s), dist.c_r))
        if step == n - 1:
            break

        f = f0 + dist.delta_f
        c_r = dist.c_r
        for _ in range(substeps):
            i, w = stepper(i, w, u, c_r, R, L, J, f, k, dt_p)
        if not (abs(i) <= BLOWUP_LIMIT and abs(w) <= BLOWUP_LIMIT):
            raise IntegrationBlowup(
                f"state left the sanity envelope at control step {step + 1} "
                f"(t={(step + 1) * dt_c:.6g} s): i={i!r} A, omega={w!r} rad/s",
                step=step + 1,
                t=(step + 1) * dt_c,
            )
    return SimulationTrace.from_rows(rows)
