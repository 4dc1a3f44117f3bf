"""Running configured experiments and writing their artifacts."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional

from .config import ExperimentConfig
from .controllers import ReachingReport, check_reaching
from .errors import ConfigError, MotorSimError, TraceError
from .integrators import SimulationTrace, simulate
from .metrics import Metrics, compute_metrics
from .motor import rad_s_to_rpm, rpm_to_rad_s

CSV_HEADER = ("t", "setpoint_rpm", "omega_rpm", "current_a", "u_v", "u_eq_v", "s", "v_lyap", "c_r_nm")

# comparison thresholds
MIN_SETTLING_RATIO = 3.0
MIN_PID_DROP_PCT = 20.0
MAX_SMC_DROP_PCT = 5.0
MIN_DROP_RATIO = 4.0


class RunResult(NamedTuple):
    trace: SimulationTrace
    metrics: Optional[Metrics]
    reaching: Optional[ReachingReport]
    metrics_error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.metrics is not None and (self.reaching is None or self.reaching.ok)


def run_experiment(cfg: ExperimentConfig) -> RunResult:
    """Simulate ``cfg`` and compute its metrics.

    Sliding-mode runs are also checked against the reaching condition. A
    failed check, or a trace the metrics cannot be computed on (for example
    a speed that never settled before the disturbance), is reported through
    ``RunResult.ok`` rather than raised, so the trace is always returned.
    Simulation faults propagate.
    """
    controller = cfg.build_controller()
    trace = simulate(controller, cfg.scenario, cfg.motor, cfg.sim)
    reaching = check_reaching(trace, cfg.surface.phi) if cfg.controller_kind == "smc" else None
    try:
        metrics, error = compute_metrics(trace, cfg.scenario), None
    except TraceError as exc:
        metrics, error = None, str(exc)
    return RunResult(trace, metrics, reaching, error)


# ---------------------------------------------------------------------------
# CSV traces
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x + 0.0:.9g}"


def emit_csv(trace: SimulationTrace, path) -> Path:
    """Write ``trace`` with speeds in RPM and 9 significant digits."""
    path = Path(path)
    lines = [",".join(CSV_HEADER)]
    for t, sp, w, i, u, u_eq, s, v, c_r in trace.rows():
        row = (t, rad_s_to_rpm(sp), rad_s_to_rpm(w), i, u, u_eq, s, v, c_r)
        lines.append(",".join(_fmt(float(x)) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def read_csv(path) -> SimulationTrace:
    """Inverse of :func:`emit_csv` (up to the 9-digit rounding)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        rows = []
        for rec in reader:
            t, sp, w, i, u, u_eq, s, v, c_r = map(float, rec)
            rows.append((t, rpm_to_rad_s(sp), rpm_to_rad_s(w), i, u, u_eq, s, v, c_r))
    return SimulationTrace.from_rows(rows)


def plot_script(csv_name: str, title: str) -> str:
    """Gnuplot script drawing speed, control and surface from a trace CSV."""
    return "\n".join([
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set multiplot layout 3,1 title '%s'" % title,
        "set ylabel 'speed [RPM]'",
        "plot '%s' using 't':'setpoint_rpm' with lines, '' using 't':'omega_rpm' with lines" % csv_name,
        "set ylabel 'voltage [V]'",
        "plot '%s' using 't':'u_v' with lines, '' using 't':'u_eq_v' with lines" % csv_name,
        "set ylabel 'surface'",
        "set xlabel 't [s]'",
        "plot '%s' using 't':'s' with lines" % csv_name,
        "unset multiplot",
        "",
    ])


# ---------------------------------------------------------------------------
# PID vs SMC comparison
# ---------------------------------------------------------------------------

def _ratio(a: float, b: float) -> float:
    if a == b:
        return 1.0
    if b == 0.0:
        return math.inf
    return a / b


@dataclass
class ComparisonReport:
    pid: Optional[Metrics] = None
    smc: Optional[Metrics] = None
    smc_reaching_ok: Optional[bool] = None
    errors: dict = field(default_factory=dict)
    settling_ratio: Optional[float] = None
    drop_ratio: Optional[float] = None
    effort_ratio: Optional[float] = None
    checks: dict = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return self.pid is not None and self.smc is not None

    @property
    def passed(self) -> bool:
        return self.complete and all(self.checks.values())

    def render(self) -> str:
        out = ["PID vs SMC comparison", ""]
        if not self.complete:
            out.append("status: INCOMPLETE")
            for label, msg in sorted(self.errors.items()):
                out.append(f"  {label} run failed: {msg}")
            return "\n".join(out) + "\n"

        rows = [
            ("settling_time [s]", "settling_time"),
            ("overshoot [%]", "overshoot_pct"),
            ("disturbance drop [%]", "dist_drop_pct"),
            ("recovery time [s]", "recovery_time"),
            ("control rms [V]", "control_rms"),
            ("control peak [V]", "control_peak"),
            ("switch count", "switch_count"),
            ("switch rate [Hz]", "switch_rate"),
        ]
        out.append(f"{'metric':<24}{'pid':>16}{'smc':>16}")
        for label, name in rows:
            a, b = getattr(self.pid, name), getattr(self.smc, name)
            out.append(f"{label:<24}{a:>16.6g}{b:>16.6g}")
        out.append("")
        out.append(f"settling ratio pid/smc: {self.settling_ratio:.6g}")
        out.append(f"drop ratio pid/smc:     {self.drop_ratio:.6g}")
        out.append(f"effort ratio pid/smc:   {self.effort_ratio:.6g}")
        out.append("")
        for name, ok in self.checks.items():
            out.append(f"[{'PASS' if ok else 'FAIL'}] {name}")
        out.append("")
        out.append("status: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(out) + "\n"


def _shared_blocks(cfg: ExperimentConfig):
    return (cfg.motor, cfg.sim, cfg.scenario)


def compare(cfg_pid: ExperimentConfig, cfg_smc: ExperimentConfig, out_dir=None,
            plot: bool = False) -> ComparisonReport:
    """Run both configurations on the shared plant and scenario.

    With ``out_dir`` set, writes ``pid.csv``, ``smc.csv`` and ``report.txt``
    there (plus gnuplot scripts when ``plot`` is true).

    Raises
    ------
    ConfigError
        The two configurations differ in their motor, sim or scenario blocks.
    """
    if _shared_blocks(cfg_pid) != _shared_blocks(cfg_smc):
        raise ConfigError("compare needs identical motor, sim and scenario blocks in both configs")

    report = ComparisonReport()
    results = {}
    for label, cfg in (("pid", cfg_pid), ("smc", cfg_smc)):
        try:
            results[label] = run_experiment(cfg)
        except MotorSimError as exc:
            report.errors[label] = str(exc)
            continue
        if results[label].metrics_error:
            report.errors[label] = results[label].metrics_error

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for label, res in results.items():
            emit_csv(res.trace, out_dir / f"{label}.csv")
            if plot:
                (out_dir / f"{label}.gp").write_text(plot_script(f"{label}.csv", label), encoding="utf-8")

    if "pid" in results:
        report.pid = results["pid"].metrics
    if "smc" in results:
        report.smc = results["smc"].metrics
        report.smc_reaching_ok = results["smc"].ok

    if report.complete:
        a, b = report.pid, report.smc
        report.settling_ratio = _ratio(a.settling_time, b.settling_time)
        report.drop_ratio = _ratio(a.dist_drop_pct, b.dist_drop_pct)
        report.effort_ratio = _ratio(a.control_rms, b.control_rms)
        report.checks = {
            f"settling ratio >= {MIN_SETTLING_RATIO:g}": report.settling_ratio >= MIN_SETTLING_RATIO,
            f"pid drop >= {MIN_PID_DROP_PCT:g}%": a.dist_drop_pct >= MIN_PID_DROP_PCT,
            f"smc drop <= {MAX_SMC_DROP_PCT:g}%": b.dist_drop_pct <= MAX_SMC_DROP_PCT,
            f"drop ratio >= {MIN_DROP_RATIO:g}": report.drop_ratio >= MIN_DROP_RATIO,
            "smc reaching condition holds": bool(report.smc_reaching_ok),
        }

    if out_dir is not None:
        (out_dir / "report.txt").write_text(report.render(), encoding="utf-8")
    return report
