# -*- coding: utf-8 -*-
import pytest
from mpmath import mp, mpc, mpf

from applications.ising import IsingApplications
from hypergeometric.series import PartitionHypergeometric
from proj_util_pkg.common.errors import DegenerateForm, DivisionByZero
from proj_util_pkg.common.precision import PrecisionContext, relative_error
from proj_util_pkg.special.special_functions import SpecialFunctions
from recurrences.engine import METHOD_STEP_21, RecurrenceEngine
from recurrences.reflection_state import ReflectionState
from toeplitz.determinants import ToeplitzOracle
from toeplitz.moments import MomentCalculator, MomentTable
from toeplitz.weight_params import WeightParams

AGREEMENT = mpf(10) ** -25


def test_init_state_matches_first_reflection(ctx, generic_params):
    table = MomentCalculator.build_table("general", range(-1, 2), generic_params, ctx=ctx)
    state = RecurrenceEngine.init_state(generic_params, ctx=ctx, table=table)
    r1, rbar1 = ToeplitzOracle.reflection_from_dets(1, table, ctx=ctx)
    assert state.N == 1
    assert state.r(0) == 1 and state.rbar(0) == 1
    assert abs(state.r_N - r1) < mpf(10) ** -50
    assert abs(state.rbar_N - rbar1) < mpf(10) ** -50


def test_init_state_rejects_zero_w0(ctx):
    table = MomentTable(values={-1: mpc(1), 0: mpc(0), 1: mpc(1)}, source="test")
    params = WeightParams(mu="0.3", omega1="0.2", t="0.5")
    with pytest.raises(DivisionByZero):
        RecurrenceEngine.init_state(params, ctx=ctx, table=table)


def test_step_22_matches_oracle(ctx, generic_params):
    table = MomentCalculator.build_table("general", range(-9, 10), generic_params, ctx=ctx)
    sequence = RecurrenceEngine.run(generic_params, 8, ctx=ctx, table=table)
    oracle = RecurrenceEngine.oracle_sequence(generic_params, 8, ctx=ctx, table=table)
    assert sequence.N_max == 8
    assert RecurrenceEngine.compare_sequences(sequence, oracle) < AGREEMENT


def test_step_22_matches_oracle_with_jump(ctx, circle_params):
    table = MomentCalculator.build_table("general", range(-7, 8), circle_params, ctx=ctx)
    sequence = RecurrenceEngine.run(circle_params, 6, ctx=ctx, table=table)
    oracle = RecurrenceEngine.oracle_sequence(circle_params, 6, ctx=ctx, table=table)
    assert RecurrenceEngine.compare_sequences(sequence, oracle) < AGREEMENT


def test_step_21_agrees_with_step_22(ctx, generic_params):
    table = MomentCalculator.build_table("general", range(-7, 8), generic_params, ctx=ctx)
    first = RecurrenceEngine.run(generic_params, 6, ctx=ctx, table=table)
    second = RecurrenceEngine.run(generic_params, 6, METHOD_STEP_21, ctx=ctx, table=table)
    assert RecurrenceEngine.compare_sequences(first, second) < AGREEMENT


def test_step_21_degenerates_without_omega2(ctx):
    params = WeightParams(mu="0.3", omega1="0.2", omega2=0, t="0.4,0.1")
    state = RecurrenceEngine.init_state(params, ctx=ctx)
    with pytest.raises(DegenerateForm):
        RecurrenceEngine.step_2_1(state, ctx=ctx)


def test_ising_critical_step(ctx):
    params = IsingApplications.ising_params(1, "low")
    state = ReflectionState.seed(params, mpf(1) / 3, -1)
    for step in (RecurrenceEngine.step_2_2, RecurrenceEngine.step_2_1):
        advanced = step(state, ctx=ctx)
        assert abs(advanced.r_N + mpf(1) / 15) < mpf(10) ** -50
        assert abs(advanced.rbar_N - 1) < mpf(10) ** -50


def test_trivial_seed_short_circuits(ctx):
    table = MomentCalculator.build_table("cue-gap", range(-6, 7), ctx=ctx, xi=0, phi="1.2")
    params = WeightParams.from_phi(mu=0, omega1=0, phi="1.2")
    sequence = RecurrenceEngine.run(params, 5, ctx=ctx, table=table)
    assert all(r == 0 and rbar == 0 for r, rbar in zip(sequence.r[1:], sequence.rbar[1:]))


def test_tau_sequence_reproduces_determinants(ctx, generic_params):
    table = MomentCalculator.build_table("general", range(-7, 8), generic_params, ctx=ctx)
    sequence = RecurrenceEngine.run(generic_params, 6, ctx=ctx, table=table)
    tau = RecurrenceEngine.tau_sequence(sequence, table.w(0), ctx=ctx)
    dets = ToeplitzOracle.determinant_sequence(table, 6, ctx=ctx)
    expected_second = table.w(0) ** 2 - table.w(1) * table.w(-1)
    assert relative_error(tau.values[2], expected_second) < mpf(10) ** -50
    assert max(relative_error(a, b) for a, b in zip(tau.values, dets)) < AGREEMENT
    for N in range(1, 6):
        ratio = tau.values[N + 1] * tau.values[N - 1] / tau.values[N] ** 2
        assert relative_error(ratio, tau.ratios[N]) < mpf(10) ** -40


def test_tau_sequence_ising_critical(ctx):
    closed = IsingApplications.critical_point(6)
    sequence = RecurrenceEngine.oracle_sequence(None, 6, ctx=ctx, table=MomentCalculator.build_table(
        "ising-low", range(-6, 7), IsingApplications.ising_params(1, "low"), ctx=ctx, k=1))
    tau = RecurrenceEngine.tau_sequence(sequence, 2 / mp.pi, ctx=ctx)
    assert abs(tau.values[1] - 2 / mp.pi) < mpf(10) ** -50
    for a, b in zip(tau.values, closed.correlations):
        assert relative_error(a, b) < mpf(10) ** -40


def test_subleading_at_critical_point(ctx):
    closed = IsingApplications.critical_point(6)
    params = IsingApplications.ising_params(1, "low")
    states = [ReflectionState.seed(params, closed.r_values[1], closed.rbar_values[1])]
    for _ in range(4):
        states.append(RecurrenceEngine.step_2_2(states[-1], ctx=ctx))
    expected = IsingApplications.critical_l_values(6)
    for state in states[2:]:
        l_ratio, _ = RecurrenceEngine.compute_subleading(state, ctx=ctx)
        assert relative_error(l_ratio, expected[state.N - 1]) < mpf(10) ** -40


def test_subleading_linear_relation(ctx, generic_params):
    oracle = RecurrenceEngine.oracle_sequence(generic_params, 7, ctx=ctx)
    for N in range(2, 6):
        state = oracle.window(N + 1)
        l_ratio, lbar_ratio = RecurrenceEngine.compute_subleading(state, ctx=ctx)
        assert relative_error(l_ratio, oracle.l[N]) < mpf(10) ** -35
        assert relative_error(lbar_ratio, oracle.lbar[N]) < mpf(10) ** -35
        swapped = RecurrenceEngine.compute_subleading_swapped(state, ctx=ctx)
        assert relative_error(swapped, oracle.lbar[N]) < mpf(10) ** -35


def test_t_one_closed_form(ctx):
    params = WeightParams(mu="0.3", omega1="0.2", omega2="0.15", t=1)
    oracle = RecurrenceEngine.oracle_sequence(params, 4, ctx=ctx)
    for N in range(1, 5):
        closed = PartitionHypergeometric.special_point_values(params, N, "one", ctx=ctx)
        assert relative_error(oracle.r[N], closed["r"]) < mpf(10) ** -40
        assert relative_error(oracle.rbar[N], closed["rbar"]) < mpf(10) ** -40
        assert relative_error(oracle.l[N], closed["l"]) < mpf(10) ** -40


def test_t_zero_closed_form(ctx):
    # t = 0 時 w_n 正比於 1/(Γ(1+n+μ+ω)Γ(1-n-μ+ω̄))
    params = WeightParams(mu="0.3", omega1="0.2", omega2="0.15", t=0)
    sf = SpecialFunctions
    values = {
        n: sf.rgamma(1 + n + params.mu + params.omega) * sf.rgamma(1 - n - params.mu + params.omega_bar)
        for n in range(-5, 6)
    }
    oracle = RecurrenceEngine.oracle_sequence(params, 4, ctx=ctx, table=MomentTable(values=values, source="t0"))
    for N in range(1, 5):
        closed = PartitionHypergeometric.special_point_values(params, N, "zero", ctx=ctx)
        assert relative_error(oracle.r[N], closed["r"]) < mpf(10) ** -40
        assert relative_error(oracle.rbar[N], closed["rbar"]) < mpf(10) ** -40
        assert relative_error(oracle.l[N], closed["l"]) < mpf(10) ** -40


def test_run_verified_returns_sequence(ctx):
    params = WeightParams(mu="0.3,0.1", omega1="0.2", omega2="0.15", t=mp.expj(mpf("0.7")) * mpf("0.6"))
    sequence = RecurrenceEngine.run_verified(params, 10, ctx=ctx)
    assert sequence.N_max == 10


def test_run_requires_positive_n_max(ctx, generic_params):
    with pytest.raises(ValueError):
        RecurrenceEngine.run(generic_params, 0, ctx=ctx)


def test_sequence_frame_columns(ctx, generic_params):
    sequence = RecurrenceEngine.oracle_sequence(generic_params, 3, ctx=ctx)
    frame = sequence.to_frame()
    assert list(frame.columns) == ["N", "re_r", "im_r", "re_rbar", "im_rbar"]
    assert len(frame) == 4
    with pytest.raises(IndexError):
        sequence.window(4)


def test_escalated_context_keeps_tolerance():
    ctx = PrecisionContext(decimal_digits=40)
    assert ctx.escalated().decimal_digits == 80
    assert ctx.escalated().tol == ctx.tol
