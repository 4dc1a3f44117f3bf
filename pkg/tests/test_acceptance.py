"""Acceptance criteria, one test per criterion.

Each test appends a ``PASS``/``FAIL`` line to a shared log that is echoed in
the pytest terminal summary, then asserts.
"""

from dataclasses import replace
from pathlib import Path

import numpy as np

from conftest import exact_response
from dcmotor_smc.config import default_config, parse_config, serialize_config
from dcmotor_smc.controllers import ControlOutput, SlidingSurface, equivalent_control
from dcmotor_smc.experiment import compare, emit_csv, run_experiment
from dcmotor_smc.integrators import SimConfig, integrate_constant, simulate
from dcmotor_smc.motor import (
    MotorParams,
    MotorState,
    derivative,
    state_matrices,
    steady_state_speed,
    transfer_function,
)
from dcmotor_smc.scenarios import DisturbanceProfile, Scenario

FIXTURES = Path(__file__).parent / "fixtures"


def _record(log, n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    log.append(line)
    print(line)


class _Hold:
    kind = "const"

    def __init__(self, u):
        self.u = u

    def initial_memory(self):
        return None

    def control(self, memory, x_d, x, dt):
        return ControlOutput(self.u, 0.0, 0.0), memory


def test_criterion_1_model_consistency(acceptance_log):
    rng = np.random.default_rng(1)
    p = MotorParams()
    m = state_matrices(p)
    worst = 0.0
    for _ in range(1000):
        x = MotorState(*rng.uniform([-50.0, -500.0], [50.0, 500.0]))
        u = rng.uniform(-240.0, 240.0)
        got = np.array(derivative(x, u, 0.0, p))
        want = m.A @ np.array(x) + m.B.ravel() * u
        worst = max(worst, float(np.max(np.abs(got - want) / np.abs(want))))

    dc_err = 0.0
    for _ in range(100):
        q = MotorParams(R=rng.uniform(0.1, 10.0), L=rng.uniform(1e-4, 0.1), J=rng.uniform(1e-3, 1.0),
                        f=rng.uniform(0.0, 2.0), k=rng.uniform(0.1, 3.0))
        ss = steady_state_speed(1.0, 0.0, q)
        dc_err = max(dc_err, abs(transfer_function(q).dc_gain() - ss) / ss)

    ok = worst <= 1e-12 and dc_err <= 1e-12
    _record(acceptance_log, 1, ok,
            f"derivative vs A.x+B.u max rel err {worst:.1e}, DC gain rel err {dc_err:.1e} (tol 1e-12)")
    assert ok


def test_criterion_2_integrator_order(acceptance_log):
    p = MotorParams()
    exact = exact_response(p, (0.0, 0.0), 24.0, 0.0, 0.1)

    def err(method, dt):
        x = integrate_constant(MotorState(0.0, 0.0), 24.0, 0.0, p, dt, int(round(0.1 / dt)), method)
        return np.linalg.norm(np.array(x) - exact) / np.linalg.norm(exact)

    rk4 = err("rk4", 2e-4) / err("rk4", 1e-4)
    euler = err("euler", 2e-5) / err("euler", 1e-5)
    ok = 8.0 <= rk4 <= 32.0 and abs(euler - 2.0) <= 0.4
    _record(acceptance_log, 2, ok,
            f"RK4 error ratio {rk4:.2f} (16 within x2), Euler ratio {euler:.3f} (2 +/- 20%)")
    assert ok


def test_criterion_3_steady_state(acceptance_log):
    p = MotorParams(f=0.2)
    quiet = Scenario(setpoint_volts=0.0, t_end=5.0, disturbance=DisturbanceProfile())
    trace = simulate(_Hold(24.0), quiet, p, SimConfig(t_end=5.0))
    rel = abs(trace.omega[-1] - 11.4286) / 11.4286
    ok = rel <= 1e-3
    _record(acceptance_log, 3, ok, f"omega(5 s) = {trace.omega[-1]:.5f} rad/s, rel err {rel:.1e} (tol 1e-3)")
    assert ok


def test_criterion_4_equivalent_control(acceptance_log):
    rng = np.random.default_rng(4)
    p = MotorParams()
    m = state_matrices(p)
    states = rng.uniform([-50.0, -500.0], [50.0, 500.0], size=(1000, 2))
    worst = 0.0
    for _ in range(100):
        c1 = rng.uniform(0.01, 1.0) * rng.choice([-1.0, 1.0])
        surface = SlidingSurface(c1=c1, c2=rng.uniform(-5.0, 5.0),
                                 kappa=np.copysign(rng.uniform(1.0, 100.0), c1),
                                 phi=rng.uniform(0.0, 1.0))
        c = surface.c
        for x in states:
            u_eq = equivalent_control(surface, m, MotorState(*x))
            residual = -c @ (m.A @ x + m.B.ravel() * u_eq)
            worst = max(worst, abs(float(residual)))
    ok = worst <= 1e-10
    _record(acceptance_log, 4, ok, f"max |c.(A.x + B.u_eq)| = {worst:.1e} over 100 surfaces x 1000 states "
                                   f"(tol 1e-10)")
    assert ok


def test_criterion_5_lyapunov_reaching(acceptance_log, default_runs):
    smc = default_runs["smc"]
    flipped_cfg = parse_config("surface.kappa = -50\nsurface.allow_unstable = true\n")
    flipped = run_experiment(flipped_cfg)
    ok = (not smc.reaching.violations) and smc.ok and bool(flipped.reaching.violations) and not flipped.ok
    _record(acceptance_log, 5, ok,
            f"default SMC violations {len(smc.reaching.violations)}, "
            f"flipped kappa violations {len(flipped.reaching.violations)}, flipped run ok={flipped.ok}")
    assert ok


def test_criterion_6_settling_contrast(acceptance_log, default_runs):
    t_pid = default_runs["pid"].metrics.settling_time
    t_smc = default_runs["smc"].metrics.settling_time
    ok = np.isfinite(t_pid) and t_smc <= t_pid / 3.0
    _record(acceptance_log, 6, ok, f"settling PID {t_pid:.3f} s, SMC {t_smc:.3f} s, ratio {t_pid / t_smc:.1f} "
                                   f"(need >= 3)")
    assert ok


def test_criterion_7_robustness_contrast(acceptance_log, default_runs):
    d_pid = default_runs["pid"].metrics.dist_drop_pct
    d_smc = default_runs["smc"].metrics.dist_drop_pct
    ok = d_pid >= 20.0 and d_smc <= 5.0
    _record(acceptance_log, 7, ok, f"load drop PID {d_pid:.2f}% (need >= 20), SMC {d_smc:.2f}% (need <= 5)")
    assert ok


def test_criterion_8_chattering(acceptance_log, default_runs):
    cfg = default_config()
    hard = run_experiment(replace(cfg, surface=replace(cfg.surface, phi=0.0))).metrics
    soft = default_runs["smc"].metrics
    control_rate = 1.0 / cfg.sim.dt_control
    ok = 0.0 < hard.switch_rate <= control_rate and soft.switch_count < hard.switch_count
    _record(acceptance_log, 8, ok,
            f"phi=0 switch rate {hard.switch_rate:.1f} Hz (bound {control_rate:.0f} Hz), "
            f"switches phi=0 {hard.switch_count} vs phi={cfg.surface.phi} {soft.switch_count}")
    assert ok


def test_criterion_9_reproducibility(acceptance_log, tmp_path):
    cfg = default_config()
    pid, smc = cfg.with_controller("pid"), cfg.with_controller("smc")
    compare(pid, smc, out_dir=tmp_path / "a")
    compare(pid, smc, out_dir=tmp_path / "b")
    names = ("pid.csv", "smc.csv", "report.txt")
    same_runs = all((tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes() for n in names)

    text = serialize_config(cfg)
    once = serialize_config(parse_config(text))
    round_trip = once == text and serialize_config(parse_config(once)) == once

    scenario = Scenario(t_end=0.002, disturbance=DisturbanceProfile())
    trace = simulate(smc.build_controller(), scenario, cfg.motor, SimConfig(t_end=0.002))
    golden = emit_csv(trace, tmp_path / "golden.csv").read_bytes() == \
        (FIXTURES / "golden_smc_3row.csv").read_bytes()

    ok = same_runs and round_trip and golden
    _record(acceptance_log, 9, ok, f"compare byte-identical {same_runs}, config round-trip {round_trip}, "
                                   f"golden CSV {golden}")
    assert ok
