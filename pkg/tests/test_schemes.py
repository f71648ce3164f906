# -*- coding: utf-8 -*-
import json

import pytest
from mpmath import mp, mpc, mpf

from dpv.schemes import SCHEME_L01, SCHEME_L14, TIME_CONVENTIONS, TauSchemes, pvi_time
from proj_util_pkg.common.errors import DivisionByZero
from proj_util_pkg.common.precision import relative_error
from recurrences.engine import RecurrenceEngine
from toeplitz.determinants import ToeplitzOracle
from toeplitz.moments import MomentCalculator
from toeplitz.weight_params import WeightParams

AGREEMENT = mpf(10) ** -28


@pytest.fixture
def table(ctx, dpv_params):
    return MomentCalculator.build_table("general", range(-9, 10), dpv_params, ctx=ctx)


def test_time_conventions():
    s = mpc("0.3", "0.4")
    assert pvi_time("weight", s) == s
    assert abs(pvi_time("pvi", s) - 1 / (1 - s)) < mpf(10) ** -55
    assert abs(pvi_time("inverse", s) * s - 1) < mpf(10) ** -55
    with pytest.raises(DivisionByZero):
        pvi_time("pvi", 1)
    with pytest.raises(ValueError):
        pvi_time("other", s)


def test_initial_data(ctx, dpv_params):
    T0, T1, dT1 = TauSchemes.initial_data(dpv_params, ctx=ctx)
    assert T0 == 1
    assert relative_error(T1, MomentCalculator.moment_general(0, dpv_params, ctx=ctx)) < mpf(10) ** -50
    numeric = TauSchemes.log_derivative_numeric(dpv_params, ctx=ctx)
    analytic = TauSchemes._log_derivative(T1, dT1, dpv_params.mu)
    assert relative_error(analytic, numeric) < mpf(10) ** -25


@pytest.mark.parametrize("scheme", [SCHEME_L01, SCHEME_L14])
def test_scheme_matches_determinants(ctx, dpv_params, table, scheme):
    dets = ToeplitzOracle.determinant_sequence(table, 8, ctx=ctx)
    trace = TauSchemes.run_scheme(scheme, dpv_params, 8, ctx=ctx, table=table)
    assert trace.convention in TIME_CONVENTIONS[scheme]
    assert len(trace.T) == 9
    second = table.w(0) ** 2 - table.w(1) * table.w(-1)
    assert relative_error(trace.T[2], second) < AGREEMENT
    assert TauSchemes.compare_with(trace, dets) < AGREEMENT


def test_schemes_agree_with_tau_sequence(ctx, dpv_params, table):
    sequence = RecurrenceEngine.run(dpv_params, 6, ctx=ctx, table=table)
    tau = RecurrenceEngine.tau_sequence(sequence, table.w(0), ctx=ctx)
    first = TauSchemes.run_scheme(SCHEME_L01, dpv_params, 6, ctx=ctx, table=table)
    second = TauSchemes.run_scheme(SCHEME_L14, dpv_params, 6, ctx=ctx, table=table)
    assert TauSchemes.compare_with(first, second.T) < AGREEMENT
    assert TauSchemes.compare_with(first, tau.values) < AGREEMENT


def test_annotate_and_jsonl(ctx, dpv_params, table):
    dets = ToeplitzOracle.determinant_sequence(table, 4, ctx=ctx)
    trace = TauSchemes.annotate(TauSchemes.run_scheme(SCHEME_L01, dpv_params, 4, ctx=ctx, table=table), dets)
    assert all(row.residual is not None and row.residual < AGREEMENT for row in trace.rows)
    lines = [json.loads(line) for line in trace.to_jsonl().splitlines()]
    assert [line["N"] for line in lines] == list(range(5))
    assert set(lines[0]) == {"N", "f", "g", "q", "p", "T", "residual"}


def test_oracle_l01_closure(ctx, dpv_params):
    convention = TauSchemes.resolve_convention(SCHEME_L01, dpv_params, ctx=ctx)
    oracle = RecurrenceEngine.oracle_sequence(dpv_params, 7, ctx=ctx)
    report = TauSchemes.oracle_l01_closure(oracle, convention=convention, ctx=ctx)
    assert set(report.residuals) == {"g_recurrence", "f_recurrence"}
    assert report.worst < AGREEMENT


def test_hamiltonian_stays_finite(ctx, dpv_params, table):
    trace = TauSchemes.run_scheme(SCHEME_L14, dpv_params, 6, ctx=ctx, table=table)
    for row in trace.rows:
        assert mp.isfinite(mpc(row.q)) and mp.isfinite(mpc(row.p))


def test_zero_mu_is_rejected(ctx):
    params = WeightParams(mu=0, omega1="0.3", omega2="0.1", t="0.4,0.2")
    for runner in (TauSchemes.l01_scheme, TauSchemes.l14_scheme):
        with pytest.raises(DivisionByZero):
            runner(1, mpc("0.9"), mpc("0.1"), params, 3, ctx=ctx)


def test_l01_closed_form_at_half_exponent(ctx):
    # μ = 1/2, ω = 0：w(z) = (tz)^{-1/2} + (tz)^{1/2}，I_2 = 16(1 + 2s/3 + s²)/(3π²s)
    s = mpf("0.3")
    params = WeightParams(mu="0.5", omega1=0, omega2=0, t="0.3")
    trace = TauSchemes.run_scheme(SCHEME_L01, params, 2, ctx=ctx, convention="pvi")
    P = 3 + 2 * s + 3 * s ** 2
    assert relative_error(trace.rows[0].q, 1 / (1 + s)) < mpf(10) ** -50
    assert relative_error(trace.rows[1].q, (3 + s) / P) < mpf(10) ** -50
    assert relative_error(trace.rows[1].p, -2 * P * (1 - s) / ((3 + s) * (1 + 3 * s) * (1 + s))) < mpf(10) ** -50
    assert relative_error(trace.T[1], 2 / mp.pi * (1 + s) / mp.sqrt(s)) < mpf(10) ** -50
    assert relative_error(trace.T[2], 16 * (1 + 2 * s / 3 + s ** 2) / (3 * mp.pi ** 2 * s)) < mpf(10) ** -50


def test_l01_on_real_axis(ctx):
    params = WeightParams(mu=1, omega1="0.3", omega2="0.1", t="0.5")
    T0, T1, dT1 = TauSchemes.initial_data(params, ctx=ctx)
    analytic = TauSchemes._log_derivative(T1, dT1, params.mu)
    assert abs(analytic - mpc("-0.16952", "0.05146")) < mpf(10) ** -5
    assert relative_error(TauSchemes.log_derivative_numeric(params, ctx=ctx), analytic) < mpf(10) ** -25
    assert TauSchemes.resolve_convention(SCHEME_L01, params, ctx=ctx) == "pvi"
    table = MomentCalculator.build_table("general", range(-7, 8), params, ctx=ctx)
    dets = ToeplitzOracle.determinant_sequence(table, 6, ctx=ctx)
    assert TauSchemes.compare_with(TauSchemes.run_scheme(SCHEME_L01, params, 6, ctx=ctx), dets) < AGREEMENT


def test_numeric_seed_on_circle(ctx, circle_params):
    coarse = TauSchemes.log_derivative_numeric(circle_params, ctx=ctx)
    fine = TauSchemes.log_derivative_numeric(circle_params, ctx=ctx.escalated())
    assert abs(coarse - mpc(0, 1) * circle_params.mu) > mpf(10) ** -10
    assert relative_error(coarse, fine) < mpf(10) ** -25
