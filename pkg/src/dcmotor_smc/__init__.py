"""Closed-loop simulation of DC-motor speed control: sliding mode vs PID."""

from .config import ExperimentConfig, default_config, parse_config, serialize_config
from .controllers import (
    PidConfig,
    PidController,
    PidState,
    SlidingSurface,
    SmcController,
    check_reaching,
    equivalent_control,
    lyapunov_value,
    pid_update,
    reference_state,
    sign,
    sliding_value,
    smc_control,
)
from .errors import (
    ConfigError,
    ControllerFault,
    DisturbanceBeforeSettling,
    DomainError,
    IntegrationBlowup,
    MotorSimError,
    TraceError,
)
from .experiment import compare, emit_csv, read_csv, run_experiment
from .integrators import SimConfig, SimulationTrace, simulate, step_euler, step_rk4
from .metrics import (
    chattering_metrics,
    compute_metrics,
    control_effort,
    disturbance_drop,
    settling_time,
)
from .motor import (
    MotorParams,
    MotorState,
    derivative,
    state_matrices,
    steady_state_speed,
    transfer_function,
)
from .scenarios import DisturbanceProfile, Scenario, disturbance_at, setpoint_to_speed

__version__ = "0.1.0"
