# -*- coding: utf-8 -*-
import pytest
from mpmath import mpc, mpf

from cli.pipelines import dpv_states
from dpv.fg_system import DpvSystem
from proj_util_pkg.common.errors import DivisionByZero, SingularStep
from proj_util_pkg.common.precision import relative_error
from recurrences.engine import RecurrenceEngine, p_coef, pb_coef
from toeplitz.weight_params import WeightParams

TOLERANCE = mpf(10) ** -35


def test_first_step_uses_closed_form(ctx, dpv_params):
    oracle = RecurrenceEngine.oracle_sequence(dpv_params, 3, ctx=ctx)
    r1 = oracle.r[1]
    t = mpc(dpv_params.t)
    expected = t * (p_coef(dpv_params, 0) + pb_coef(dpv_params, 1) * r1) / (
        p_coef(dpv_params, 0) + pb_coef(dpv_params, 1) * t * r1)
    state = DpvSystem.dpv_step(DpvSystem.seed(dpv_params, r1, oracle.rbar[1], ctx=ctx), ctx=ctx)
    assert state.N == 1
    assert relative_error(state.g, expected) < mpf(10) ** -50
    image = DpvSystem.to_fg(oracle.window(2), ctx=ctx, index=1)
    assert relative_error(image.g, expected) < mpf(10) ** -50


def test_base_state(ctx, dpv_params):
    oracle = RecurrenceEngine.oracle_sequence(dpv_params, 2, ctx=ctx)
    base = DpvSystem.to_fg(oracle.window(1), ctx=ctx, index=0)
    assert base.f == 0 and base.fbar == 0
    assert base.g is None


def test_oracle_images_satisfy_recurrences(ctx, dpv_params):
    oracle = RecurrenceEngine.oracle_sequence(dpv_params, 9, ctx=ctx)
    images = DpvSystem.oracle_images(oracle, ctx=ctx)
    report = DpvSystem.closure_residuals(images, ctx=ctx)
    assert set(report.residuals) == {"g_recurrence", "f_recurrence", "g_recurrence_conjugate",
                                     "f_recurrence_conjugate"}
    assert report.worst < TOLERANCE


def test_propagation_matches_oracle(ctx, dpv_params):
    propagated, images = dpv_states(dpv_params, 8, ctx=ctx)
    assert len(propagated) == len(images) == 8
    assert DpvSystem.compare_states(propagated, images) < TOLERANCE


def test_first_system_only(ctx, dpv_params):
    oracle = RecurrenceEngine.oracle_sequence(dpv_params, 5, ctx=ctx)
    states = DpvSystem.dpv_sequence(dpv_params, oracle.r[1], None, 4, ctx=ctx)
    assert all(state.fbar is None for state in states)
    images = DpvSystem.oracle_images(oracle, ctx=ctx, conjugate=False)
    assert DpvSystem.compare_states(states, images) < TOLERANCE


def test_singular_step_names_denominator(ctx):
    params = WeightParams(mu="0.3", omega1="0.2", omega2="0.1", t="0.5,0.2")
    state = DpvSystem.seed(params, "0.1").model_copy(update={"N": 2, "f": mpc(0), "g": mpc("0.4")})
    with pytest.raises(SingularStep) as excinfo:
        DpvSystem.dpv_step(state, ctx=ctx)
    assert excinfo.value.denominator == "f_N"


def test_t_one_is_rejected(ctx):
    params = WeightParams(mu="0.3", omega1="0.2", omega2="0.1", t=1)
    oracle = RecurrenceEngine.oracle_sequence(params, 3, ctx=ctx)
    with pytest.raises(DivisionByZero):
        DpvSystem.to_fg(oracle.window(3), ctx=ctx)


def test_state_row(ctx, dpv_params):
    oracle = RecurrenceEngine.oracle_sequence(dpv_params, 3, ctx=ctx)
    row = DpvSystem.to_fg(oracle.window(3), ctx=ctx).to_row()
    assert row["N"] == 2
    assert all(isinstance(row[name], str) for name in ("f", "g", "fbar", "gbar"))
