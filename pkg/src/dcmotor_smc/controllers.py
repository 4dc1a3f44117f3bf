"""Speed controllers: PID baseline and sliding-mode control with a Lyapunov monitor.

Sliding-mode sign convention
----------------------------
The surface is defined on the tracking error, ``s = c (x_d - x)``. For a
constant reference ``x_d`` this gives ``s' = -c (A x + B u)``, so the control
that keeps ``s' = 0`` is ``u_eq = -(c B)^-1 c A x`` and the full law is

    u = u_eq + kappa * switch(s)

which yields ``V' = s s' = -kappa (c B) s switch(s)``. ``V`` therefore
decreases off the surface exactly when ``kappa (c B) > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import DomainError, TraceError
from .motor import MotorParams, MotorState, StateMatrices, steady_state_current


def sign(x: float) -> int:
    """Three-valued sign; ``sign(0) == 0`` so an exact surface hit adds no switching."""
    if x > 0.0:
        return 1
    if x < 0.0:
        return -1
    return 0


def _finite(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise DomainError(f"{name} must be a finite real number, got {value!r}", field=name)
    return float(value)


# ---------------------------------------------------------------------------
# Sliding-mode control
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SlidingSurface:
    """Linear surface ``s = c1 (i_d - i) + c2 (omega_d - omega)``.

    Parameters
    ----------
    c1, c2 : float
        Weights on the current and speed errors. ``c1`` must be non-zero
        because ``c B = c1 / L`` is inverted by the equivalent control.
    kappa : float
        Switching gain [V]. Must share the sign of ``c1`` so that
        ``kappa (c B) > 0``.
    phi : float
        Boundary-layer half-width. ``0`` selects pure sign switching.
    allow_unstable : bool
        Skip the ``kappa (c B) > 0`` check. Only meant for demonstrating what
        a violated reaching condition looks like.
    """

    c1: float = 0.05
    c2: float = 1.0
    kappa: float = 50.0
    phi: float = 0.5
    allow_unstable: bool = False

    def __post_init__(self):
        for name in ("c1", "c2", "kappa", "phi"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.c1 == 0.0:
            raise DomainError("singular surface: c1 = 0 makes c.B = c1/L zero", field="c1")
        if self.phi < 0.0:
            raise DomainError(f"phi must be >= 0, got {self.phi!r}", field="phi")
        if not self.allow_unstable and self.kappa * self.c1 <= 0.0:
            raise DomainError(
                "reaching condition violated: kappa*(c.B) must be > 0 "
                f"(kappa={self.kappa!r}, c1={self.c1!r})",
                field="kappa",
            )

    @property
    def c(self) -> np.ndarray:
        return np.array([self.c1, self.c2])

    def switch(self, s: float) -> float:
        if self.phi == 0.0:
            return float(sign(s))
        return min(1.0, max(-1.0, s / self.phi))


class SmcOutput(NamedTuple):
    u: float
    u_eq: float
    s: float


def reference_state(omega_d: float, params: MotorParams, c_r_nominal: float = 0.0) -> MotorState:
    """Full reference ``(i_d, omega_d)`` for a speed setpoint.

    ``i_d`` is the steady-state current at ``omega_d``, which makes ``s = 0``
    an equilibrium of the nominal closed loop.
    """
    return MotorState(steady_state_current(omega_d, c_r_nominal, params), omega_d)


def sliding_value(surface: SlidingSurface, x_d: MotorState, x: MotorState) -> float:
    return surface.c1 * (x_d[0] - x[0]) + surface.c2 * (x_d[1] - x[1])


def _cb(surface: SlidingSurface, m: StateMatrices) -> float:
    return surface.c1 * m.B[0, 0] + surface.c2 * m.B[1, 0]


def equivalent_control(surface: SlidingSurface, m: StateMatrices, x: MotorState) -> float:
    """Control that zeroes ``s'`` for the nominal plant: ``-(c B)^-1 c A x``."""
    cb = _cb(surface, m)
    if cb == 0.0:
        raise DomainError("singular surface: c.B = 0", field="c1")
    A = m.A
    c1, c2 = surface.c1, surface.c2
    ca0 = c1 * A[0, 0] + c2 * A[1, 0]
    ca1 = c1 * A[0, 1] + c2 * A[1, 1]
    return -(ca0 * x[0] + ca1 * x[1]) / cb


def smc_control(surface: SlidingSurface, m: StateMatrices, x_d: MotorState, x: MotorState) -> SmcOutput:
    s = sliding_value(surface, x_d, x)
    u_eq = equivalent_control(surface, m, x)
    return SmcOutput(u_eq + surface.kappa * surface.switch(s), u_eq, s)


def lyapunov_value(s: float) -> float:
    return 0.5 * s * s


# ---------------------------------------------------------------------------
# PID baseline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PidConfig:
    """Gains and limits of the baseline speed PID.

    ``tf_d`` is the time constant of the first-order filter on the
    derivative term; ``0`` means a raw backward difference.
    """

    kp: float = 0.05
    ki: float = 0.46
    kd: float = 0.0
    u_limit: float = 240.0
    tf_d: float = 0.01

    def __post_init__(self):
        for name in ("kp", "ki", "kd", "u_limit", "tf_d"):
            value = _finite(name, getattr(self, name))
            object.__setattr__(self, name, value)
            if value < 0.0:
                raise DomainError(f"{name} must be >= 0, got {value!r}", field=name)
        if self.u_limit == 0.0:
            raise DomainError("u_limit must be > 0", field="u_limit")


@dataclass(frozen=True)
class PidState:
    integral: float = 0.0
    derivative: float = 0.0
    prev_error: float = 0.0
    primed: bool = False


def pid_update(cfg: PidConfig, st: PidState, error: float, dt: float) -> tuple:
    """One PID sample. Returns ``(u, new_state)``.

    The integral uses rectangular accumulation and is frozen (conditional
    integration) whenever the tentative output is saturated in the direction
    the error would push it further. No derivative is taken on the very
    first sample, which avoids a kick from the setpoint step.
    """
    if not dt > 0.0:
        raise DomainError(f"dt must be > 0, got {dt!r}", field="dt")

    if st.primed:
        d = (cfg.tf_d * st.derivative + (error - st.prev_error)) / (cfg.tf_d + dt)
    else:
        d = 0.0

    integral = st.integral + error * dt
    u = cfg.kp * error + cfg.ki * integral + cfg.kd * d
    if abs(u) > cfg.u_limit and sign(u) == sign(error):
        integral = st.integral
        u = cfg.kp * error + cfg.ki * integral + cfg.kd * d
    u = min(cfg.u_limit, max(-cfg.u_limit, u))
    return u, PidState(integral, d, error, True)


# ---------------------------------------------------------------------------
# Controller variants consumed by the simulator
# ---------------------------------------------------------------------------

class ControlOutput(NamedTuple):
    u: float
    u_eq: float
    s: float


@dataclass(frozen=True)
class PidController:
    """PID on the speed error. Reports ``u_eq = s = 0`` in traces."""

    config: PidConfig = PidConfig()
    kind = "pid"

    def initial_memory(self) -> PidState:
        return PidState()

    def control(self, memory: PidState, x_d: MotorState, x: MotorState, dt: float):
        u, memory = pid_update(self.config, memory, x_d[1] - x[1], dt)
        return ControlOutput(u, 0.0, 0.0), memory


@dataclass(frozen=True)
class SmcController:
    surface: SlidingSurface
    matrices: StateMatrices
    kind = "smc"

    def __post_init__(self):
        cb = _cb(self.surface, self.matrices)
        if cb == 0.0:
            raise DomainError("singular surface: c.B = 0", field="c1")
        if not self.surface.allow_unstable and self.surface.kappa * cb <= 0.0:
            raise DomainError("reaching condition violated: kappa*(c.B) must be > 0", field="kappa")

    def initial_memory(self) -> None:
        return None

    def control(self, memory, x_d: MotorState, x: MotorState, dt: float):
        out = smc_control(self.surface, self.matrices, x_d, x)
        return ControlOutput(*out), memory


Controller = Union[PidController, SmcController]


# ---------------------------------------------------------------------------
# Reaching-condition monitor
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReachingReport:
    violations: list
    max_vdot_outside_layer: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return not self.violations


def check_reaching(trace, phi: float, tolerance: float = 0.0, relative: bool = False) -> ReachingReport:
    """Verify ``V' < 0`` wherever the trace sits outside the boundary layer.

    ``V'`` is estimated by central differences of the ``v_lyap`` column, so
    the first and last samples are never judged. A sample with ``|s| > phi``
    is a violation when ``V' >= tolerance``; with ``relative=True`` the
    tolerance is multiplied by ``max(V)``.
    """
    t = np.asarray(trace.t, dtype=float)
    v = np.asarray(trace.v_lyap, dtype=float)
    s = np.asarray(trace.s_value, dtype=float)
    if t.size < 3:
        raise TraceError(f"reaching check needs at least 3 samples, got {t.size}")
    if relative:
        tolerance = tolerance * float(np.max(v))

    vdot = (v[2:] - v[:-2]) / (t[2:] - t[:-2])
    outside = np.abs(s[1:-1]) > phi
    flagged = outside & (vdot >= tolerance)
    violations = [float(x) for x in t[1:-1][flagged]]
    max_vdot = float(np.max(vdot[outside])) if outside.any() else float("-inf")
    return ReachingReport(violations, max_vdot, float(tolerance))
