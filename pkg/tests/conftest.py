import numpy as np
import pytest
import scipy.linalg

from dcmotor_smc.config import default_config
from dcmotor_smc.experiment import run_experiment

ACCEPTANCE_LINES = []


def exact_response(params, x0, u, c_r, t):
    """Closed-form state at time ``t`` for constant inputs (augmented expm)."""
    R, L, J, f, k = params.R, params.L, params.J, params.f, params.k
    M = np.zeros((4, 4))
    M[:2, :2] = [[-R / L, -k / L], [k / J, -f / J]]
    M[0, 2] = 1.0 / L
    M[1, 3] = -1.0 / J
    z = scipy.linalg.expm(M * t) @ np.array([x0[0], x0[1], u, c_r])
    return z[:2]


@pytest.fixture(scope="session")
def default_runs():
    cfg = default_config()
    return {
        "pid": run_experiment(cfg.with_controller("pid")),
        "smc": run_experiment(cfg.with_controller("smc")),
    }


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
