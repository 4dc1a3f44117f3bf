import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcmotor_smc.errors import DomainError
from dcmotor_smc.motor import (
    MotorParams,
    MotorState,
    derivative,
    rad_s_to_rpm,
    rpm_to_rad_s,
    state_matrices,
    steady_state_current,
    steady_state_speed,
    transfer_function,
)

DATASHEET = MotorParams()
NO_FRICTION = MotorParams(f=0.0)

positive = st.floats(1e-3, 1e2, allow_nan=False)
params_st = st.builds(
    MotorParams,
    R=positive,
    L=st.floats(1e-4, 1.0),
    J=st.floats(1e-4, 1.0),
    f=st.floats(0.0, 5.0),
    k=st.floats(1e-2, 5.0),
)
state_st = st.builds(MotorState, st.floats(-50, 50), st.floats(-500, 500))


def test_defaults_match_datasheet():
    p = MotorParams()
    assert (p.R, p.L, p.J, p.f, p.k, p.u_max) == (5.5, 0.0028, 0.0163, 0.2, 1.0, 24.0)


@pytest.mark.parametrize("field,value", [
    ("R", 0.0), ("L", -1.0), ("J", 0.0), ("k", 0.0), ("f", -0.1), ("u_max", 0.0),
    ("R", math.nan), ("J", math.inf),
])
def test_invalid_params_rejected(field, value):
    with pytest.raises(DomainError) as info:
        MotorParams(**{field: value})
    assert info.value.field == field


def test_derivative_at_origin():
    assert derivative(MotorState(0.0, 0.0), 0.0, 0.0, DATASHEET) == (0.0, 0.0)


def test_derivative_full_voltage_from_rest():
    di, dw = derivative(MotorState(0.0, 0.0), 24.0, 0.0, DATASHEET)
    assert di == pytest.approx(8571.428571428571, rel=1e-12)
    assert dw == 0.0


def test_derivative_matches_frictionless_matrix():
    # numeric state matrix with k = 1, f = 0
    A = np.array([[-5.5 / 0.0028, -1 / 0.0028], [1 / 0.0163, 0.0]])
    expected = A @ np.array([1.0, 10.0])
    di, dw = derivative(MotorState(1.0, 10.0), 0.0, 0.0, NO_FRICTION)
    assert di == pytest.approx(-5535.714285714285, rel=1e-12)
    assert dw == pytest.approx(61.34969325153374, rel=1e-12)
    np.testing.assert_allclose([di, dw], expected, rtol=1e-12)


@pytest.mark.parametrize("bad", [
    dict(state=MotorState(math.nan, 0.0), u=0.0, c_r=0.0),
    dict(state=MotorState(0.0, 0.0), u=math.inf, c_r=0.0),
    dict(state=MotorState(0.0, 0.0), u=0.0, c_r=math.nan),
])
def test_derivative_rejects_non_finite(bad):
    with pytest.raises(DomainError):
        derivative(bad["state"], bad["u"], bad["c_r"], DATASHEET)


def test_state_matrices_frictionless_case():
    m = state_matrices(NO_FRICTION)
    np.testing.assert_allclose(m.A, [[-1964.2857142857142, -357.14285714285717],
                                     [61.34969325153374, 0.0]], rtol=1e-12)
    np.testing.assert_allclose(m.B.ravel(), [357.14285714285717, 0.0], rtol=1e-12)
    assert m.A[0, 0] == -5.5 / 0.0028
    assert m.A[1, 0] == 1 / 0.0163
    np.testing.assert_array_equal(m.C_out, [[0.0, 1.0]])
    np.testing.assert_array_equal(m.D, [[0.0]])


def test_state_matrices_keep_friction():
    assert state_matrices(DATASHEET).A[1, 1] == pytest.approx(-12.269938650306749, rel=1e-12)


@settings(max_examples=50)
@given(params_st, st.lists(state_st, min_size=10, max_size=10), st.floats(-100, 100))
def test_derivative_equals_state_space(p, states, u):
    m = state_matrices(p)
    for x in states:
        got = np.array(derivative(x, u, 0.0, p))
        want = m.A @ np.array(x) + m.B.ravel() * u
        np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12 * np.abs(want).max() + 1e-300)


def test_transfer_function_datasheet():
    tf = transfer_function(DATASHEET)
    assert tf.num == (1.0,)
    np.testing.assert_allclose(tf.den, [2.1, 0.09021, 4.564e-5], rtol=1e-12)
    assert tf.dist_num == (5.5, 0.0028)
    assert tf.den[2] > 0


def test_transfer_function_dc_gain_without_friction():
    tf = transfer_function(MotorParams(f=0.0, k=2.5))
    assert tf.dc_gain() == pytest.approx(1 / 2.5, rel=1e-15)


@pytest.mark.parametrize("u,c_r,p,expected", [
    (24.0, 0.0, DATASHEET, 24.0 / 2.1),
    (24.0, 0.0, NO_FRICTION, 24.0),
    (0.0, 0.0, DATASHEET, 0.0),
])
def test_steady_state_speed(u, c_r, p, expected):
    assert steady_state_speed(u, c_r, p) == pytest.approx(expected, rel=1e-12, abs=1e-15)


@given(params_st, st.floats(-100, 100), st.floats(-5, 5))
def test_steady_state_matches_transfer_function(p, u, c_r):
    tf = transfer_function(p)
    via_tf = tf.num[0] / tf.den[0] * u - tf.dist_num[0] / tf.den[0] * c_r
    assert steady_state_speed(u, c_r, p) == pytest.approx(via_tf, rel=1e-12, abs=1e-12)


@given(params_st, st.floats(-100, 100), st.floats(-5, 5))
def test_steady_state_is_equilibrium(p, u, c_r):
    w = steady_state_speed(u, c_r, p)
    i = steady_state_current(w, c_r, p)
    di, dw = derivative(MotorState(i, w), u, c_r, p)
    # scale the check by the size of the terms that cancel
    assert abs(di) * p.L <= 1e-9 * (abs(u) + 1.0)
    assert abs(dw) * p.J <= 1e-9 * (abs(p.k * i) + abs(c_r) + 1.0)


@given(params_st)
def test_open_loop_is_hurwitz(p):
    m = state_matrices(p)
    assert np.trace(m.A) < 0
    assert np.linalg.det(m.A) > 0
    assert m.is_hurwitz()


def test_rpm_round_trip():
    assert rad_s_to_rpm(rpm_to_rad_s(660.0)) == pytest.approx(660.0, rel=1e-15)
    assert rpm_to_rad_s(60.0) == pytest.approx(2 * math.pi)


@pytest.mark.parametrize("u,c_r", [(24.0, 0.0), (145.0, 8.0), (-10.0, 0.3)])
def test_datasheet_equilibrium_absolute(u, c_r):
    w = steady_state_speed(u, c_r, DATASHEET)
    i = steady_state_current(w, c_r, DATASHEET)
    di, dw = derivative(MotorState(i, w), u, c_r, DATASHEET)
    assert abs(di) < 1e-9 and abs(dw) < 1e-9
