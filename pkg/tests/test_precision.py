# -*- coding: utf-8 -*-
import pytest
from mpmath import mp, mpc, mpf
from pydantic import ValidationError

from proj_util_pkg.common.errors import (ConvergenceError, DisagreementError, PainleveToolkitError, PoleError,
                                         PreconditionError, SingularStep)
from proj_util_pkg.common.precision import (PARSE_DIGITS, PrecisionContext, as_complex, is_small,
                                            precision_scope, relative_error)
from proj_util_pkg.settings import DEFAULT_DIGITS, MIN_DIGITS, ProjEnvSettings


def test_default_tolerance_follows_digits():
    ctx = PrecisionContext(decimal_digits=40)
    assert ctx.tol == mpf(10) ** -30
    assert isinstance(ctx.tolerance, mpf)
    assert ctx.half_tol == mpf(10) ** -20


def test_digits_below_minimum_rejected():
    with pytest.raises(ValidationError):
        PrecisionContext(decimal_digits=MIN_DIGITS - 1)


def test_escalated_keeps_tolerance():
    ctx = PrecisionContext(decimal_digits=50)
    higher = ctx.escalated()
    assert higher.decimal_digits == 100
    assert higher.tolerance == ctx.tolerance


def test_precision_scope_sets_working_digits():
    @precision_scope
    def current_dps(ctx=None):
        return mp.dps

    assert current_dps(ctx=PrecisionContext(decimal_digits=45)) == 45


def test_precision_scope_defaults_to_settings(monkeypatch):
    monkeypatch.setenv("PT_DIGITS", "70")

    @precision_scope
    def current_dps(ctx=None):
        return ctx.decimal_digits

    assert current_dps() == 70


@pytest.mark.parametrize("raw, expected", [("", DEFAULT_DIGITS), ("abc", DEFAULT_DIGITS), ("12", 12),
                                           ("80", 80)])
def test_settings_digits(monkeypatch, raw, expected):
    monkeypatch.setenv("PT_DIGITS", raw)
    assert ProjEnvSettings().default_digits == expected


def test_as_complex_parses_pairs():
    value = as_complex("0.1,-0.25")
    with mp.workdps(PARSE_DIGITS):
        assert value.real == mpf("0.1")
        assert value.imag == mpf("-0.25")
    assert abs(value.real - mpf("0.1")) < mpf(10) ** -150
    assert as_complex("3") == mpc(3, 0)
    with pytest.raises(ValueError):
        as_complex("1,2,3")


def test_is_small_and_relative_error(ctx):
    assert is_small(mpf("1e-60"), 1, ctx)
    assert not is_small(mpf("1e-20"), 1, ctx)
    assert relative_error(mpf(2), mpf(4)) == mpf("0.5")
    assert relative_error(mpf("1e-3"), 0) == mpf("1e-3")


def test_exit_codes():
    assert PainleveToolkitError.exit_code == 1
    assert ConvergenceError.exit_code == 2
    assert PoleError.exit_code == 3
    assert issubclass(SingularStep, PreconditionError)
    assert SingularStep("x", denominator="g-1").denominator == "g-1"
    assert DisagreementError("x", worst=0.5).worst == 0.5
    assert DisagreementError.exit_code == 4


def test_explicit_tolerance_is_exact():
    ctx = PrecisionContext(decimal_digits=50, tolerance="1e-45")
    with mp.workdps(PARSE_DIGITS):
        assert ctx.tol == mpf("1e-45")
    with pytest.raises(ValidationError):
        PrecisionContext(decimal_digits=50, tolerance="2")


def test_low_environment_digits_are_rejected(monkeypatch, caplog):
    monkeypatch.setenv("PT_DIGITS", "12")
    with caplog.at_level("WARNING"):
        assert ProjEnvSettings().default_digits == 12
    assert "PT_DIGITS=12" in caplog.text
    with pytest.raises(ValidationError):
        PrecisionContext.from_settings()
