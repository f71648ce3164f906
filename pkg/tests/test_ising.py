# -*- coding: utf-8 -*-
import pytest
from mpmath import mp, mpc, mpf

from applications.ising import IsingApplications
from cli.panels import (check_ising_borodin, check_ising_critical, check_ising_hyp, check_ising_oracle,
                        check_long_range_order)
from proj_util_pkg.common.errors import PhaseError
from proj_util_pkg.common.precision import PrecisionContext, relative_error


def test_critical_point_values():
    run = IsingApplications.critical_point(4)
    assert relative_error(run.r_values[2], mpf(-1) / 15) < mpf(10) ** -50
    assert run.rbar_values[2] == 1
    assert relative_error(run.correlations[1], 2 / mp.pi) < mpf(10) ** -50
    assert relative_error(run.correlations[2], 16 / (3 * mp.pi ** 2)) < mpf(10) ** -50
    assert IsingApplications.critical_l_values(3)[3] == mpf(3) / 7


def test_recurrence_reproduces_critical_point(ctx):
    assert check_ising_critical(ctx, 10) < mpf(10) ** -30


def test_critical_point_to_forty_digits():
    fine = PrecisionContext(decimal_digits=80)
    with mp.workdps(fine.decimal_digits):
        assert check_ising_critical(fine, 10) < mpf(10) ** -40


@pytest.mark.parametrize("k,phase", [("1.2", "low"), ("2", "low"), ("5", "low"),
                                     ("0.2", "high"), ("0.5", "high"), ("0.8", "high")])
def test_recurrence_matches_determinants(ctx, k, phase):
    assert check_ising_oracle(ctx, k, phase, 6) < mpf(10) ** -18


@pytest.mark.parametrize("k,phase", [("1.2", "low"), ("2", "low"), ("5", "low"),
                                     ("0.2", "high"), ("0.5", "high"), ("0.8", "high")])
def test_hypergeometric_route(ctx, k, phase):
    assert check_ising_hyp(ctx, k, phase, 6) < mpf(10) ** -20


def test_borodin_representation(ctx):
    assert check_ising_borodin(ctx, "2", 5) < mpf(10) ** -18


def test_first_correlation_is_elliptic(ctx):
    k = mpf(2)
    run = IsingApplications.ising_diagonal(k, "low", 3, ctx=ctx)
    assert relative_error(run.correlations[1], 2 / mp.pi * mp.ellipe(1 / k ** 2)) < mpf(10) ** -40


def test_zero_temperature(ctx):
    run = IsingApplications.ising_diagonal(mp.inf, "low", 5, ctx=ctx)
    assert run.correlations == [1] * 6
    assert run.rbar_values[1:] == [0] * 5
    assert relative_error(run.r_values[1], mpf(1) / 2) < mpf(10) ** -50
    assert IsingApplications.long_range_order(mp.inf, "low") == 1


def test_infinite_temperature(ctx):
    run = IsingApplications.ising_diagonal(0, "high", 5, ctx=ctx)
    assert run.correlations[0] == 1
    assert run.correlations[1:] == [0] * 5
    assert relative_error(run.r_values[1], mpf(1) / 4) < mpf(10) ** -50
    assert relative_error(run.rbar_values[1], -2) < mpf(10) ** -50


def test_approach_to_long_range_order(ctx):
    k = mpf(2)
    run = IsingApplications.ising_diagonal(k, "low", 12, ctx=ctx)
    limit = IsingApplications.long_range_order(k, "low")
    gaps = [abs(mpc(run.correlations[N]) - limit) for N in (2, 6, 12)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert check_long_range_order(ctx, "2", 20) < 1e-3
    assert IsingApplications.long_range_order(mpf("0.5"), "high") == 0


def test_correlations_are_ratios_of_reflections(ctx):
    run = IsingApplications.ising_diagonal(mpf(3), "low", 5, ctx=ctx)
    c, r, rbar = run.correlations, run.r_values, run.rbar_values
    for N in range(1, 5):
        assert relative_error(c[N + 1] * c[N - 1] / c[N] ** 2, 1 - r[N] * rbar[N]) < mpf(10) ** -40


@pytest.mark.parametrize("k,phase", [(mpf("0.5"), "low"), (mpf(2), "high"), (mpf(1), "high")])
def test_phase_mismatch(ctx, k, phase):
    with pytest.raises(PhaseError):
        IsingApplications.ising_diagonal(k, phase, 3, ctx=ctx)


def test_unknown_phase(ctx):
    with pytest.raises(ValueError):
        IsingApplications.ising_params(2, "critical")


def test_frame_columns(ctx):
    frame = IsingApplications.ising_diagonal(mpf(2), "low", 3, ctx=ctx).to_frame()
    assert {"N", "method"} <= set(frame.columns)
    assert len(frame) == 4
