import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as stn
from scipy import signal

from stoprotor.controllers import (CascadedGains, CascadeState, PidGains,
                                   PidState, cascaded_step, reset,
                                   single_loop_step)
from stoprotor.errors import ConfigurationError
from stoprotor.loopsim import simulate_loop

ETA_YAW = 0.0345
SINGLE = PidGains(0.004, 0.010, 0.561)
CASCADED = CascadedGains(PidGains(13.100, 0.002, 0.0),
                         PidGains(13.600, 0.036, 1.370e-5))


class TestGainValidation:
    def test_negative_gain_rejected(self):
        with pytest.raises(ConfigurationError):
            PidGains(-0.1)

    def test_bad_limits_rejected(self):
        with pytest.raises(ConfigurationError):
            PidGains(1.0, output_limits=(1.0, -1.0))

    def test_outer_derivative_forbidden(self):
        with pytest.raises(ConfigurationError):
            CascadedGains(PidGains(1.0, 0.0, 0.5), PidGains(1.0))


class TestSingleLoop:
    def test_zero_error_gives_zero_output(self):
        state = PidState()
        for _ in range(50):
            assert single_loop_step(state, SINGLE, 1.0, 1.0, 1e-3) == 0.0

    def test_pure_proportional(self):
        state = PidState()
        out = single_loop_step(state, PidGains(1.0), 2.5, 0.0, 1e-3)
        assert out == 2.5

    def test_matches_continuous_oracle_on_step(self):
        # independent oracle: continuous closed-loop transfer function of the
        # PID on 1/(eta s^2), stepped by scipy.signal
        kp, ki, kd = SINGLE.kp, SINGLE.ki, SINGLE.kd
        num = [kd, kp, ki]
        den = [ETA_YAW, kd, kp, ki]
        t = np.arange(0.0, 10.0005, 1e-3)
        _, y_ref = signal.step((num, den), T=t)
        resp = simulate_loop(SINGLE, ETA_YAW, dt=1e-3, horizon=10.0)
        for instant in (0.5, 1.0, 2.0, 5.0, 10.0):
            i = int(round(instant / 1e-3))
            assert resp.y[i] == pytest.approx(y_ref[i], abs=0.02)

    def test_cascaded_tuned_gains_track_step(self):
        resp = simulate_loop(CASCADED, ETA_YAW, dt=1e-3, horizon=60.0)
        assert not resp.diverged
        assert abs(resp.e[-1]) < 1e-3  # steady-state error heading to zero


class TestCascade:
    def test_all_errors_zero(self):
        state = CascadeState()
        assert cascaded_step(state, CASCADED, 0.0, 0.0, 0.0, 1e-3) == 0.0

    def test_unity_chain(self):
        gains = CascadedGains(PidGains(1.0), PidGains(1.0))
        state = CascadeState()
        assert cascaded_step(state, gains, 1.0, 0.0, 0.0, 1e-3) == 1.0

    def test_outer_saturation_limits_rate_setpoint(self):
        gains = CascadedGains(PidGains(10.0, output_limits=(-2.0, 2.0)),
                              PidGains(1.0))
        state = CascadeState()
        # outer wants 10, clamps to 2, inner P=1 passes it through
        assert cascaded_step(state, gains, 1.0, 0.0, 0.0, 1e-3) == 2.0


class TestReset:
    def test_reset_zeroes_accumulators(self):
        state = PidState()
        single_loop_step(state, SINGLE, 1.0, 0.0, 1e-3)
        assert state.integral != 0.0 or state.prev_error != 0.0
        reset(state)
        assert (state.integral, state.prev_error, state.last_output) == (0.0, 0.0, 0.0)

    def test_step_after_reset_equals_fresh(self):
        used = PidState()
        for _ in range(10):
            single_loop_step(used, SINGLE, 1.0, 0.3, 1e-3)
        reset(used)
        fresh = PidState()
        assert (single_loop_step(used, SINGLE, 0.7, 0.1, 1e-3)
                == single_loop_step(fresh, SINGLE, 0.7, 0.1, 1e-3))

    def test_reset_idempotent(self):
        state = CascadeState()
        cascaded_step(state, CASCADED, 1.0, 0.0, 0.0, 1e-3)
        reset(state)
        snapshot = (state.outer.integral, state.inner.integral)
        reset(state)
        assert (state.outer.integral, state.inner.integral) == snapshot == (0.0, 0.0)


@settings(max_examples=30, deadline=None)
@given(stn.lists(stn.floats(-100.0, 100.0), min_size=1, max_size=200))
def test_output_never_exceeds_limits(errors):
    gains = PidGains(2.0, 1.5, 0.1, output_limits=(-0.7, 0.9))
    state = PidState()
    for e in errors:
        u = state.step(gains, e, 1e-3)
        assert -0.7 <= u <= 0.9


@settings(max_examples=30, deadline=None)
@given(stn.lists(stn.floats(-100.0, 100.0), min_size=1, max_size=200))
def test_integral_term_never_exceeds_windup(errors):
    gains = PidGains(0.5, 3.0, 0.0, windup_limits=(-0.3, 0.3))
    state = PidState()
    for e in errors:
        state.step(gains, e, 1e-3)
        assert -0.3 <= state.integral <= 0.3


def test_feedforward_holds_setpoint_with_zero_initial_error():
    # on the linearized plant a zero initial error stays exactly zero
    for gains in (SINGLE, CASCADED):
        resp = simulate_loop(gains, ETA_YAW, dt=1e-3, horizon=10.0, reference=0.0)
        assert float(np.max(np.abs(resp.e))) < 1e-9


def test_peak_command_contrast_on_step():
    single = simulate_loop(SINGLE, ETA_YAW, dt=1e-3, horizon=2.0)
    cascaded = simulate_loop(CASCADED, ETA_YAW, dt=1e-3, horizon=2.0)
    assert cascaded.peak_command() < single.peak_command()


def test_cascaded_bounds_load_disturbance():
    resp = simulate_loop(CASCADED, ETA_YAW, dt=1e-3, horizon=60.0,
                         disturbance_time=1.0, disturbance=1.0)
    assert not resp.diverged
    assert abs(resp.e[-1]) < 1e-2
