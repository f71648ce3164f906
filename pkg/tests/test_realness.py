# -*- coding: utf-8 -*-
import pytest
from mpmath import mpf

from applications.realness import realness_structure
from cli.panels import REAL_PANEL, check_realness
from proj_util_pkg.common.errors import PreconditionError
from recurrences.engine import RecurrenceEngine
from toeplitz.weight_params import WeightParams

TOLERANCE = mpf(10) ** -35


@pytest.mark.parametrize("spec", REAL_PANEL, ids=lambda s: f"mu={s['mu']}")
def test_symmetric_real_weight(ctx, spec):
    assert check_realness(ctx, spec["mu"], spec["phi"], 8) < TOLERANCE


def test_residual_keys(ctx):
    params = WeightParams.real_modulus(mu="0.3", omega1="0.3", phi="1.1")
    report = realness_structure(params, 6, ctx=ctx)
    assert set(report.residuals) == {"conjugate", "twist_invariant", "t_power_relation", "real_part"}
    assert report.label == "realness"


def test_oracle_sequence_input(ctx):
    params = WeightParams.real_modulus(mu="0.45", omega1="0.45", phi="2.2")
    oracle = RecurrenceEngine.oracle_sequence(params, 7, ctx=ctx)
    assert realness_structure(params, 6, ctx=ctx, sequence=oracle).worst < TOLERANCE


def test_asymmetric_exponents_break_the_power_relation(ctx):
    params = WeightParams.real_modulus(mu="0.2", omega1="0.3", phi="1.1")
    report = realness_structure(params, 6, ctx=ctx)
    assert report.residuals["t_power_relation"] > mpf(10) ** -10


def test_preconditions(ctx):
    with pytest.raises(PreconditionError):
        realness_structure(WeightParams(mu="0.3", omega1="0.3", omega2="0.1", t="0.6,0.8"), 4, ctx=ctx)
    with pytest.raises(PreconditionError):
        realness_structure(WeightParams(mu="0.3", omega1="0.3", omega2=0, t="0.5"), 4, ctx=ctx)


@pytest.mark.parametrize("spec", REAL_PANEL, ids=lambda s: f"mu={s['mu']}")
def test_twist_invariant_when_it_vanishes(ctx, spec):
    params = WeightParams.real_modulus(mu=spec["mu"], omega1=spec["mu"], phi=spec["phi"])
    report = realness_structure(params, 8, ctx=ctx)
    assert report.residuals["twist_invariant"] < TOLERANCE
    assert report.residuals["t_power_relation"] < TOLERANCE


def test_twist_invariant_for_asymmetric_exponents(ctx):
    params = WeightParams.real_modulus(mu="0.2", omega1="0.3", phi="1.1")
    assert realness_structure(params, 8, ctx=ctx).residuals["twist_invariant"] < mpf(10) ** -30
