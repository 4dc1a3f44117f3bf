"""Line-oriented experiment configuration.

A document is UTF-8 text with one ``section.key = value`` assignment per
line. ``#`` starts a comment; blank lines are ignored. Keys that are left out
take their default. Sections: ``controller``, ``motor``, ``sim``, ``pid``,
``surface``, ``scenario``, ``output``. Run ``dcmotor-smc defaults --emit``
for the full list with default values.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace

from .controllers import PidConfig, PidController, SlidingSurface, SmcController
from .errors import ConfigError, DomainError
from .integrators import SimConfig
from .motor import MotorParams, MotorState, state_matrices
from .scenarios import DisturbanceProfile, Scenario

# The datasheet motor cannot reach 660 RPM from 24 V (ceiling 109 RPM), so experiments
# run the same motor from a wider supply.
EXPERIMENT_SUPPLY_V = 240.0
CONTROLLER_KINDS = ("pid", "smc")


@dataclass(frozen=True)
class OutputConfig:
    dir: str = "out"
    name: str = "run"


@dataclass(frozen=True)
class ExperimentConfig:
    controller_kind: str = "smc"
    motor: MotorParams = field(default_factory=lambda: MotorParams(u_max=EXPERIMENT_SUPPLY_V))
    sim: SimConfig = field(default_factory=lambda: SimConfig(t_end=Scenario().t_end))
    pid: PidConfig = field(default_factory=PidConfig)
    surface: SlidingSurface = field(default_factory=SlidingSurface)
    scenario: Scenario = field(default_factory=Scenario)
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self):
        if self.controller_kind not in CONTROLLER_KINDS:
            raise DomainError(f"controller kind must be pid or smc, got {self.controller_kind!r}",
                              field="kind")

    def build_controller(self):
        if self.controller_kind == "pid":
            return PidController(self.pid)
        return SmcController(self.surface, state_matrices(self.motor))

    def with_controller(self, kind: str) -> "ExperimentConfig":
        return replace(self, controller_kind=kind)


# section -> key -> value type
_FLOAT, _STR, _BOOL = "float", "str", "bool"

SCHEMA = {
    "controller": {"kind": _STR},
    "motor": {"R": _FLOAT, "L": _FLOAT, "J": _FLOAT, "f": _FLOAT, "k": _FLOAT, "u_max": _FLOAT},
    "sim": {"dt_plant": _FLOAT, "dt_control": _FLOAT, "method": _STR},
    "pid": {"kp": _FLOAT, "ki": _FLOAT, "kd": _FLOAT, "u_limit": _FLOAT, "tf_d": _FLOAT},
    "surface": {"c1": _FLOAT, "c2": _FLOAT, "kappa": _FLOAT, "phi": _FLOAT, "allow_unstable": _BOOL},
    "scenario": {"setpoint_volts": _FLOAT, "t_end": _FLOAT, "disturbance": _STR,
                 "magnitude": _FLOAT, "t_on": _FLOAT, "t_off": _FLOAT,
                 "i0": _FLOAT, "omega0": _FLOAT},
    "output": {"dir": _STR, "name": _STR},
}

# domain-error field names that differ from the config key
_FIELD_ALIASES = {"initial_state": "omega0"}

_LINE = re.compile(r"^([A-Za-z_]\w*)\.([A-Za-z_]\w*)\s*=\s*(.*?)\s*$")


def _to_values(cfg: ExperimentConfig) -> dict:
    sc = cfg.scenario
    return {
        "controller": {"kind": cfg.controller_kind},
        "motor": {name: getattr(cfg.motor, name) for name in SCHEMA["motor"]},
        "sim": {"dt_plant": cfg.sim.dt_plant, "dt_control": cfg.sim.dt_control, "method": cfg.sim.method},
        "pid": {name: getattr(cfg.pid, name) for name in SCHEMA["pid"]},
        "surface": {name: getattr(cfg.surface, name) for name in SCHEMA["surface"]},
        "scenario": {
            "setpoint_volts": sc.setpoint_volts,
            "t_end": sc.t_end,
            "disturbance": sc.disturbance.kind,
            "magnitude": sc.disturbance.magnitude,
            "t_on": sc.disturbance.t_on,
            "t_off": sc.disturbance.t_off,
            "i0": sc.initial_state.i,
            "omega0": sc.initial_state.omega,
        },
        "output": {"dir": cfg.output.dir, "name": cfg.output.name},
    }


def _convert(kind, raw, where, line):
    if kind == _FLOAT:
        try:
            value = float(raw)
        except ValueError:
            raise ConfigError(f"{where}: expected a number, got {raw!r}", line) from None
        if not math.isfinite(value):
            raise ConfigError(f"{where}: value must be finite, got {raw!r}", line)
        return value
    if kind == _BOOL:
        low = raw.lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ConfigError(f"{where}: expected true or false, got {raw!r}", line)
    if not raw:
        raise ConfigError(f"{where}: empty value", line)
    return raw


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a configuration document.

    Raises
    ------
    ConfigError
        Syntax error, unknown or duplicate key, wrong value type, or an
        invariant violation. The message carries the offending line number.
    """
    values = _to_values(ExperimentConfig())
    lines = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        content = raw_line.split("#", 1)[0].strip()
        if not content:
            continue
        m = _LINE.match(content)
        if m is None:
            raise ConfigError(f"expected 'section.key = value', got {content!r}", lineno)
        section, key, raw = m.groups()
        if section not in SCHEMA:
            raise ConfigError(f"unknown section {section!r}", lineno)
        if key not in SCHEMA[section]:
            raise ConfigError(f"unknown key {section}.{key}", lineno)
        if (section, key) in lines:
            raise ConfigError(f"duplicate key {section}.{key} (first set on line {lines[section, key]})",
                              lineno)
        values[section][key] = _convert(SCHEMA[section][key], raw, f"{section}.{key}", lineno)
        lines[section, key] = lineno

    def build(section, factory):
        try:
            return factory()
        except DomainError as exc:
            key = _FIELD_ALIASES.get(exc.field, exc.field)
            line = lines.get((section, key))
            if line is None:
                # cross-field invariant: blame the last key set in the section
                related = [ln for (sec, _), ln in lines.items()
                           if sec == section or (section == "sim" and sec == "scenario")]
                line = max(related, default=None)
            raise ConfigError(f"{section}: {exc}", line) from None

    v = values
    motor = build("motor", lambda: MotorParams(**v["motor"]))
    pid = build("pid", lambda: PidConfig(**v["pid"]))
    surface = build("surface", lambda: SlidingSurface(**v["surface"]))
    sc = v["scenario"]
    disturbance = build("scenario", lambda: DisturbanceProfile(
        sc["disturbance"], sc["magnitude"], sc["t_on"], sc["t_off"]))
    scenario = build("scenario", lambda: Scenario(
        sc["setpoint_volts"], sc["t_end"], disturbance, MotorState(sc["i0"], sc["omega0"])))
    sim = build("sim", lambda: SimConfig(t_end=scenario.t_end, **v["sim"]))
    output = OutputConfig(**v["output"])
    cfg = build("controller", lambda: ExperimentConfig(
        v["controller"]["kind"], motor, sim, pid, surface, scenario, output))
    build("surface", cfg.build_controller)
    return cfg


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_config(cfg: ExperimentConfig) -> str:
    """Render ``cfg`` as a complete document; ``parse_config`` inverts it."""
    out = ["# dcmotor-smc experiment configuration"]
    for section, entries in _to_values(cfg).items():
        out.append("")
        for key, value in entries.items():
            out.append(f"{section}.{key} = {_format(value)}")
    return "\n".join(out) + "\n"


def default_config() -> ExperimentConfig:
    return ExperimentConfig()
