# -*- coding: utf-8 -*-
import pytest
from mpmath import mp, mpc, mpf

from cli.panels import check_gauss_sum
from hypergeometric.series import PartitionHypergeometric
from proj_util_pkg.common.errors import PoleError, PreconditionError
from proj_util_pkg.common.precision import as_complex, relative_error
from proj_util_pkg.special.special_functions import SpecialFunctions
from recurrences.engine import RecurrenceEngine
from toeplitz.determinants import ToeplitzOracle
from toeplitz.moments import MomentCalculator
from toeplitz.weight_params import WeightParams

hyp = PartitionHypergeometric.hyp_2f1_partition


def test_zero_argument(ctx):
    value, diagnostics = hyp("0.3", "0.4", "1.2", 0, 4, ctx=ctx)
    assert value == 1
    assert diagnostics.converged


@pytest.mark.parametrize("a, b, c, t", [
    ("0.3,0.1", "0.7", "1.9,-0.2", "0.2,0.1"),
    ("-0.45", "1.2,0.3", "2.5", "-0.2"),
    ("1.1", "-0.35", "0.8,0.4", "0.1,-0.15"),
])
def test_single_variable_reduction(ctx, a, b, c, t):
    a, b, c, t = (as_complex(x) for x in (a, b, c, t))
    value, diagnostics = hyp(a, b, c, t, 1, ctx=ctx, tolerance=mpf(10) ** -32)
    assert diagnostics.converged
    assert relative_error(value, SpecialFunctions.gauss_2f1(a, b, c, t, ctx=ctx)) < mpf(10) ** -30


def test_parameter_symmetry(ctx):
    a, b, c, t = mpc("0.3", "0.1"), mpc("-0.4"), mpc("1.7"), mpc("0.2", "0.05")
    first, _ = hyp(a, b, c, t, 3, ctx=ctx, tolerance=mpf(10) ** -30)
    second, _ = hyp(b, a, c, t, 3, ctx=ctx, tolerance=mpf(10) ** -30)
    assert first == second


def test_terminating_series(ctx):
    value, diagnostics = hyp(-2, "0.4", "1.3", "0.9", 3, ctx=ctx)
    assert diagnostics.terminating
    assert diagnostics.max_weight_used == 6


def test_divergent_argument_rejected(ctx):
    with pytest.raises(PreconditionError):
        hyp("0.3", "0.4", "1.2", "1.2", 2, ctx=ctx)


def test_c_pole(ctx):
    with pytest.raises(PoleError):
        hyp("0.3", "0.4", -1, "0.2", 2, ctx=ctx)


@pytest.mark.parametrize("mu", ["0.5", "1", "1.5"])
def test_gauss_summation(ctx, mu):
    assert check_gauss_sum(ctx, mu, "0.3", "0.1", 4) < mpf(10) ** -45


def test_tau_and_reflections_match_determinants(ctx):
    params = WeightParams(mu=1, omega1="0.3", omega2="0.1", t="0.5")
    table = MomentCalculator.build_table("general", range(-7, 8), params, ctx=ctx)
    dets = ToeplitzOracle.determinant_sequence(table, 6, ctx=ctx)
    oracle = RecurrenceEngine.oracle_sequence(params, 6, ctx=ctx, table=table)
    assert relative_error(PartitionHypergeometric.tau_via_hyp(params, 1, ctx=ctx), table.w(0) * params.t) < \
        mpf(10) ** -45
    for N in range(1, 7):
        tau = PartitionHypergeometric.tau_via_hyp(params, N, ctx=ctx, with_t_factor=True)
        assert relative_error(tau, dets[N]) < mpf(10) ** -40
        r, rbar = PartitionHypergeometric.reflection_via_hyp(params, N, ctx=ctx)
        assert relative_error(r, oracle.r[N]) < mpf(10) ** -40
        assert relative_error(rbar, oracle.rbar[N]) < mpf(10) ** -40


def test_tau_at_zero_is_gamma_prefactor(ctx):
    params = WeightParams(mu="0.3", omega1="0.2", omega2="0.1", t=0)
    sf = SpecialFunctions
    expected = mpc(1)
    for j in range(3):
        expected *= (mp.factorial(j) * sf.gamma(2 * params.omega1 + j + 1)
                     * sf.rgamma(1 + params.mu + params.omega + j) * sf.rgamma(1 - params.mu + params.omega_bar + j))
    assert relative_error(PartitionHypergeometric.tau_via_hyp(params, 3, ctx=ctx), expected) < mpf(10) ** -50


def test_reflections_at_zero(ctx):
    params = WeightParams(mu="0.3", omega1="0.2", omega2="0.1", t=0)
    for N in range(1, 4):
        r, rbar = PartitionHypergeometric.reflection_via_hyp(params, N, ctx=ctx)
        closed = PartitionHypergeometric.special_point_values(params, N, "zero", ctx=ctx)
        assert relative_error(r, closed["r"]) < mpf(10) ** -50
        assert relative_error(rbar, closed["rbar"]) < mpf(10) ** -50


def test_jump_rejected(ctx, circle_params):
    with pytest.raises(PreconditionError):
        PartitionHypergeometric.tau_via_hyp(circle_params, 2, ctx=ctx)


def test_ising_limit(ctx):
    t = mpf("0.25")
    assert PartitionHypergeometric.ising_limit_eval(2, 0, ctx=ctx) == 0
    half = mpf(-1) / 2
    expected = sum(mp.rf(half, k) ** 2 * t ** k / (mp.factorial(k - 1) * mp.factorial(k)) for k in range(1, 90))
    value = PartitionHypergeometric.ising_limit_eval(1, t, ctx=ctx, tolerance=mpf(10) ** -32)
    assert relative_error(value, expected) < mpf(10) ** -30


def test_special_point_rejects_unknown(ctx, generic_params):
    with pytest.raises(ValueError):
        PartitionHypergeometric.special_point_values(generic_params, 2, "half", ctx=ctx)


@pytest.mark.parametrize("N", [2, 3])
def test_determinant_matches_partition_sum(ctx, N):
    a, b, c, t = mpc("0.3", "0.1"), mpc("-0.45"), mpc("1.9", "-0.2"), mpc("0.1", "0.05")
    series, _ = hyp(a, b, c, t, N, ctx=ctx, tolerance=mpf(10) ** -45)
    value, diagnostics = PartitionHypergeometric.hyp_2f1_determinant(a, b, c, t, N, ctx=ctx)
    assert diagnostics.method == "determinant"
    assert relative_error(value, series) < mpf(10) ** -40


def test_determinant_single_variable(ctx):
    a, b, c, t = mpc("1.1"), mpc("-0.35"), mpc("0.8", "0.4"), mpc("0.6", "-0.3")
    value, _ = PartitionHypergeometric.hyp_2f1_determinant(a, b, c, t, 1, ctx=ctx)
    assert relative_error(value, SpecialFunctions.gauss_2f1(a, b, c, t, ctx=ctx)) < mpf(10) ** -50


def test_automatic_evaluation_choice(ctx):
    _, finite = PartitionHypergeometric.hyp_2f1(-2, "0.4", "1.3", "0.9", 3, ctx=ctx)
    assert finite.terminating and finite.method == "partition"
    _, infinite = PartitionHypergeometric.hyp_2f1("0.3", "0.4", "1.3", "0.69", 6, ctx=ctx)
    assert infinite.method == "determinant"
    with pytest.raises(ValueError):
        PartitionHypergeometric.hyp_2f1("0.3", "0.4", "1.3", "0.5", 2, ctx=ctx, method="shells")


def test_determinant_rejects_poles_and_unit_argument(ctx):
    with pytest.raises(PoleError):
        PartitionHypergeometric.hyp_2f1_determinant("0.3", "0.4", 1, "0.2", 3, ctx=ctx)
    with pytest.raises(PreconditionError):
        PartitionHypergeometric.hyp_2f1_determinant("0.3", "0.4", "1.2", "0.8,0.8", 2, ctx=ctx)


@pytest.mark.parametrize("t", ["0.62", "0.1,0.69", "0.45,-0.5"])
def test_tau_near_unit_argument_matches_determinants(ctx, t):
    params = WeightParams(mu="0.35", omega1="0.15", omega2="-0.1", t=t)
    table = MomentCalculator.build_table("general", range(-7, 8), params, ctx=ctx)
    dets = ToeplitzOracle.determinant_sequence(table, 6, ctx=ctx)
    oracle = RecurrenceEngine.oracle_sequence(params, 6, ctx=ctx, table=table)
    for N in range(1, 7):
        tau = PartitionHypergeometric.tau_via_hyp(params, N, ctx=ctx, with_t_factor=True)
        assert relative_error(tau, dets[N]) < mpf(10) ** -35
        r, rbar = PartitionHypergeometric.reflection_via_hyp(params, N, ctx=ctx)
        assert relative_error(r, oracle.r[N]) < mpf(10) ** -35
        assert relative_error(rbar, oracle.rbar[N]) < mpf(10) ** -35


@pytest.mark.parametrize("N", [2, 3])
def test_ising_limit_determinant_matches_partition_sum(ctx, N):
    t = mpf("0.15")
    series = PartitionHypergeometric.ising_limit_eval(N, t, ctx=ctx, tolerance=mpf(10) ** -45, method="partition")
    value = PartitionHypergeometric.ising_limit_eval(N, t, ctx=ctx, method="determinant")
    assert relative_error(value, series) < mpf(10) ** -40
