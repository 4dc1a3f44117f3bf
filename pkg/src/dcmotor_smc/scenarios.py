"""Experiment scenarios: setpoint calibration and load/friction disturbance profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DomainError
from .motor import MotorState, rpm_to_rad_s

RPM_PER_SETPOINT_VOLT = 660.0
DISTURBANCE_KINDS = ("none", "load_step", "load_pulse", "friction_step")


def setpoint_to_speed(volts: float) -> float:
    """Bench setpoint in volts to shaft speed in rad/s (1 V <-> 660 RPM)."""
    if volts < 0.0:
        raise DomainError(f"setpoint must be >= 0 V, got {volts!r}", field="setpoint_volts")
    return rpm_to_rad_s(RPM_PER_SETPOINT_VOLT * volts)


class DisturbanceSample(NamedTuple):
    c_r: float
    delta_f: float


@dataclass(frozen=True)
class DisturbanceProfile:
    """Shaft disturbance applied during a run.

    ``load_step`` and ``friction_step`` switch on at ``t_on`` and stay on;
    ``t_off`` only matters for ``load_pulse``. ``magnitude`` is a torque in
    N m for the load kinds and an extra viscous coefficient in N m s for
    ``friction_step``.
    """

    kind: str = "none"
    magnitude: float = 0.0
    t_on: float = 0.0
    t_off: float = 0.0

    def __post_init__(self):
        if self.kind not in DISTURBANCE_KINDS:
            raise DomainError(
                f"unknown disturbance kind {self.kind!r}; expected one of {', '.join(DISTURBANCE_KINDS)}",
                field="disturbance",
            )
        for name in ("magnitude", "t_on", "t_off"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise DomainError(f"{name} must be a finite real number, got {value!r}", field=name)
            object.__setattr__(self, name, float(value))
        if self.magnitude < 0.0:
            raise DomainError("disturbance magnitude must be >= 0", field="magnitude")
        if self.t_on < 0.0:
            raise DomainError("t_on must be >= 0", field="t_on")
        if self.t_off < self.t_on:
            raise DomainError("t_off must be >= t_on", field="t_off")

    @property
    def active(self) -> bool:
        return self.kind != "none"


def disturbance_at(profile: DisturbanceProfile, t: float) -> DisturbanceSample:
    if t < 0.0:
        raise DomainError(f"t must be >= 0, got {t!r}", field="t")
    kind = profile.kind
    if kind == "none" or t < profile.t_on:
        return DisturbanceSample(0.0, 0.0)
    if kind == "load_pulse":
        if t >= profile.t_off:
            return DisturbanceSample(0.0, 0.0)
        return DisturbanceSample(profile.magnitude, 0.0)
    if kind == "load_step":
        return DisturbanceSample(profile.magnitude, 0.0)
    return DisturbanceSample(0.0, profile.magnitude)


@dataclass(frozen=True)
class Scenario:
    """Constant speed setpoint plus an optional disturbance.

    The defaults reproduce the bench protocol: a 1 V (660 RPM) setpoint and a
    two-second load pulse applied once both controllers have settled.
    """

    setpoint_volts: float = 1.0
    t_end: float = 35.0
    disturbance: DisturbanceProfile = field(
        default_factory=lambda: DisturbanceProfile("load_pulse", 8.0, 25.0, 27.0)
    )
    initial_state: MotorState = MotorState(0.0, 0.0)

    def __post_init__(self):
        for name in ("setpoint_volts", "t_end"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise DomainError(f"{name} must be a finite real number, got {value!r}", field=name)
            object.__setattr__(self, name, float(value))
        if self.t_end <= 0.0:
            raise DomainError("t_end must be > 0", field="t_end")
        if self.setpoint_volts < 0.0:
            raise DomainError("setpoint_volts must be >= 0", field="setpoint_volts")
        if self.disturbance.active and self.disturbance.t_off > self.t_end:
            raise DomainError("disturbance t_off must be <= t_end", field="t_off")
        if not all(math.isfinite(v) for v in self.initial_state):
            raise DomainError("initial state must be finite", field="initial_state")
        object.__setattr__(self, "initial_state", MotorState(*map(float, self.initial_state)))

    @property
    def target_speed(self) -> float:
        return setpoint_to_speed(self.setpoint_volts)
