"""Armature-controlled DC motor: dynamics, state-space form and analytic oracles.

State vector is ``x = [i, omega]`` (armature current in A, shaft speed in
rad/s). All quantities are SI; RPM only appears through :func:`rad_s_to_rpm`
and :func:`rpm_to_rad_s` at the I/O boundary.

The electrical equation is ``u = R i + L di/dt + k omega`` and the mechanical
one ``k i - c_r = f omega + J domega/dt``, with a single constant ``k`` used
both as torque constant and back-EMF constant.

Note on the state matrix: the back-EMF entry ``A[0, 1]`` is ``-k/L``. The
symbolic matrix as often printed for this motor shows ``+k/L``, which
contradicts both the voltage equation and the numeric matrix (``-1/0.0028``
for ``k = 1``). The negative sign is used here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import DomainError

RAD_S_PER_RPM = 2.0 * math.pi / 60.0


class MotorState(NamedTuple):
    """Instantaneous plant state (also used for state derivatives)."""

    i: float = 0.0
    omega: float = 0.0


@dataclass(frozen=True)
class MotorParams:
    """Physical constants of the permanent-magnet DC motor.

    Defaults are the bench motor's datasheet values, with the torque constant
    ``k = 1`` read off the numeric state matrix and ``u_max`` the 24 V
    nominal supply.

    Parameters
    ----------
    R : float
        Armature resistance [ohm].
    L : float
        Armature inductance [H].
    J : float
        Rotor inertia [kg m^2].
    f : float
        Viscous friction [N m s].
    k : float
        Torque / back-EMF constant [N m/A] = [V s/rad].
    u_max : float
        Armature voltage limit [V], applied symmetrically.
    """

    R: float = 5.5
    L: float = 0.0028
    J: float = 0.0163
    f: float = 0.2
    k: float = 1.0
    u_max: float = 24.0

    def __post_init__(self):
        for name in ("R", "L", "J", "f", "k", "u_max"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise DomainError(f"{name} must be a real number, got {value!r}", field=name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}", field=name)
            object.__setattr__(self, name, float(value))
        for name in ("R", "L", "J", "k", "u_max"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)!r}", field=name)
        if self.f < 0.0:
            raise DomainError(f"f must be >= 0, got {self.f!r}", field="f")

    def with_friction(self, f: float) -> "MotorParams":
        return replace(self, f=f)

    @property
    def electrical_time_constant(self) -> float:
        return self.L / self.R


@dataclass(frozen=True)
class StateMatrices:
    """``x' = A x + B u``, ``omega = C_out x + D u``."""

    A: np.ndarray
    B: np.ndarray
    C_out: np.ndarray
    D: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.A)

    def is_hurwitz(self) -> bool:
        return bool(np.all(self.eigenvalues().real < 0.0))


@dataclass(frozen=True)
class TransferFunction:
    """Speed response ``Omega(s) = num/den U(s) - dist_num/den C_r(s)``.

    Coefficient lists are in ascending powers of ``s``.
    """

    num: tuple
    den: tuple
    dist_num: tuple

    def dc_gain(self) -> float:
        return self.num[0] / self.den[0]

    def load_dc_gain(self) -> float:
        return self.dist_num[0] / self.den[0]


def _check_finite(**values):
    for name, value in values.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value!r}", field=name)


def derivative(state: MotorState, u: float, c_r: float, params: MotorParams) -> MotorState:
    """Right-hand side of the motor ODEs.

    Returns ``(di/dt, domega/dt)`` packed in a :class:`MotorState`.

    Raises
    ------
    DomainError
        If the state or either input is not finite.
    """
    i, omega = state
    _check_finite(i=i, omega=omega, u=u, c_r=c_r)
    di = (u - params.R * i - params.k * omega) / params.L
    domega = (params.k * i - params.f * omega - c_r) / params.J
    return MotorState(di, domega)


def state_matrices(params: MotorParams) -> StateMatrices:
    R, L, J, f, k = params.R, params.L, params.J, params.f, params.k
    A = np.array([[-R / L, -k / L], [k / J, -f / J]])
    B = np.array([[1.0 / L], [0.0]])
    C_out = np.array([[0.0, 1.0]])
    D = np.array([[0.0]])
    return StateMatrices(A=A, B=B, C_out=C_out, D=D)


def transfer_function(params: MotorParams) -> TransferFunction:
    R, L, J, f, k = params.R, params.L, params.J, params.f, params.k
    den = (R * f + k * k, R * J + L * f, L * J)
    return TransferFunction(num=(k,), den=den, dist_num=(R, L))


def steady_state_speed(u: float, c_r: float, params: MotorParams) -> float:
    """Equilibrium speed for constant voltage ``u`` and load torque ``c_r``."""
    R, f, k = params.R, params.f, params.k
    return (k * u - R * c_r) / (R * f + k * k)


def steady_state_current(omega: float, c_r: float, params: MotorParams) -> float:
    """Current that holds ``omega`` constant against friction and load."""
    return (params.f * omega + c_r) / params.k


def steady_state_voltage(omega: float, c_r: float, params: MotorParams) -> float:
    """Armature voltage needed to hold ``omega`` against friction and load."""
    return params.R * steady_state_current(omega, c_r, params) + params.k * omega


def rad_s_to_rpm(omega: float) -> float:
    return omega / RAD_S_PER_RPM


def rpm_to_rad_s(rpm: float) -> float:
    return rpm * RAD_S_PER_RPM
