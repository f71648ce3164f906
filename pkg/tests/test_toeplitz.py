# -*- coding: utf-8 -*-
import json

import pytest
from mpmath import mp, mpc, mpf
from pydantic import ValidationError

from proj_util_pkg.common.errors import BranchAmbiguity, PhaseError
from proj_util_pkg.special.special_functions import SpecialFunctions
from toeplitz.determinants import ToeplitzOracle
from toeplitz.moments import MomentCalculator, MomentTable
from toeplitz.weight_params import WeightParams


def test_omega_and_dual():
    params = WeightParams(mu="0.3", omega1="0.2", omega2="0.1", t="0.5,0.2")
    assert params.omega == mpc("0.2", "0.1")
    assert params.omega_bar == mpc("0.2", "-0.1")
    dual = params.dual()
    assert dual.omega == params.omega_bar
    assert abs(dual.t * params.t - 1) < mpf(10) ** -50
    assert abs(dual.dual().t - params.t) < mpf(10) ** -50


def test_jump_requires_unit_circle():
    with pytest.raises(ValidationError):
        WeightParams(mu="0.3", omega1="0.2", xi="0.5", t="0.5")


def test_from_phi_angle_and_power():
    params = WeightParams.from_phi(mu="0.3", omega1="0.2", xi="0.5", phi="1.1")
    assert params.on_circle
    assert abs(params.angle - mpf("1.1")) < mpf(10) ** -50
    assert abs(params.t_power(mpf(1) / 2) - mp.expj(mpf("0.55"))) < mpf(10) ** -50


def test_real_modulus_effective_jump():
    params = WeightParams.real_modulus(mu="0.2", omega1="0.3", phi="1.1")
    assert abs(params.xi - (1 - mp.expjpi(mpf("0.4")))) < mpf(10) ** -50
    assert params.omega2 == 0


def test_general_moment_elementary_value(ctx):
    params = WeightParams(mu=0, omega1="0.5", omega2=0, t="0.4,0.3")
    assert abs(MomentCalculator.moment_general(0, params, ctx=ctx) - 4 / mp.pi) < mpf(10) ** -50


@pytest.mark.parametrize("n", [-2, 0, 1, 3])
def test_general_moment_at_t_zero(ctx, n):
    params = WeightParams(mu=0, omega1="0.35,0.1", omega2="0.2", t=0)
    sf = SpecialFunctions
    expected = sf.gamma(2 * params.omega1 + 1) * sf.rgamma(1 + n + params.omega) * sf.rgamma(1 - n + params.omega_bar)
    assert abs(MomentCalculator.moment_general(n, params, ctx=ctx) - expected) < mpf(10) ** -50


def test_general_moment_matches_quadrature(ctx):
    params = WeightParams(mu="0.31,0.12", omega1="0.27,-0.08", omega2="0.15,0.05", t="0.45,0.2")
    for n in (-2, 0, 1, 2):
        exact = MomentCalculator.moment_general(n, params, ctx=ctx)
        numeric = MomentCalculator.moment_quadrature(n, params, ctx=ctx)
        assert abs(exact - numeric) / abs(exact) < mpf(10) ** -25


def test_real_weight_matches_quadrature(ctx):
    params = WeightParams.real_modulus(mu="0.2", omega1="0.3", phi="1.1")
    for n in (-1, 1):
        exact = MomentCalculator.moment_general(n, params, ctx=ctx)
        numeric = MomentCalculator.moment_quadrature(n, params, ctx=ctx)
        assert abs(exact - numeric) / abs(exact) < mpf(10) ** -25


def test_alternative_form_agrees(ctx, circle_params):
    for n in (-2, -1, 0, 1, 2):
        first = MomentCalculator.moment_general(n, circle_params, ctx=ctx)
        second = MomentCalculator.moment_general_alt(n, circle_params, ctx=ctx)
        assert abs(first - second) / abs(first) < mpf(10) ** -40


def test_real_t_with_jump_is_ambiguous(ctx):
    params = WeightParams.from_phi(mu="0.3", omega1="0.2", xi="0.5", phi=mp.pi)
    with pytest.raises(BranchAmbiguity):
        MomentCalculator.moment_general(0, params, ctx=ctx)


def test_cue_gap_moments(ctx):
    xi, phi = mpf("0.7"), mpf("1.3")
    assert abs(MomentCalculator.moment_cue_gap(0, xi, phi, ctx=ctx) - (1 - xi * phi / (2 * mp.pi))) < mpf(10) ** -55
    expected = xi / (2j * mp.pi) * (mp.expj(phi) - 1)
    assert abs(MomentCalculator.moment_cue_gap(1, xi, phi, ctx=ctx) - expected) < mpf(10) ** -55
    assert MomentCalculator.moment_cue_gap(3, 0, phi, ctx=ctx) == 0


def test_cue_charpoly_moments(ctx):
    mu, u = mpf("0.37"), mpf("0.6")
    assert abs(MomentCalculator.moment_cue_charpoly(0, mu, 0, ctx=ctx) - 1) < mpf(10) ** -55
    expected = mu * SpecialFunctions.gauss_2f1(-mu, -mu + 1, 2, u ** 2)
    assert abs(MomentCalculator.moment_cue_charpoly(-1, mu, u, ctx=ctx) - expected) < mpf(10) ** -50
    w0 = MomentCalculator.moment_cue_charpoly(0, mu, 1, ctx=ctx)
    assert abs(w0 - mp.gamma(2 * mu + 1) / mp.gamma(mu + 1) ** 2) < mpf(10) ** -45


def test_ising_low_w0_is_elliptic(ctx):
    k = mpf(2)
    expected = 2 / mp.pi * mp.ellipe(1 / k ** 2)
    assert abs(MomentCalculator.moment_ising(0, k, "low", ctx=ctx) - expected) < mpf(10) ** -50
    assert abs(MomentCalculator.moment_ising(0, mpf(10) ** 30, "low", ctx=ctx) - 1) < mpf(10) ** -40
    with pytest.raises(PhaseError):
        MomentCalculator.moment_ising(0, mpf("0.5"), "low", ctx=ctx)


def test_borodin_zero_coefficient(ctx):
    x = mpf("0.25")
    half = mpf(1) / 2
    value = MomentCalculator.moment_borodin(0, -half, half, x, ctx=ctx)
    assert abs(value - 2 / mp.pi * mp.ellipe(x)) < mpf(10) ** -50


def test_build_table_and_json(ctx):
    table = MomentCalculator.build_table("cue-gap", range(-2, 3), ctx=ctx, xi="0.5", phi="1.0")
    assert table.covers(-2, 2)
    assert table.index_range == (-2, 2)
    payload = json.loads(table.to_json())
    assert [entry["n"] for entry in payload["entries"]] == [-2, -1, 0, 1, 2]
    with pytest.raises(KeyError):
        table.w(5)
    with pytest.raises(ValueError):
        MomentCalculator.build_table("unknown", [0], ctx=ctx)


def _table(values):
    return MomentTable(values={n: mpc(v) for n, v in values.items()}, source="test")


def test_small_determinants(ctx):
    table = _table({-1: "0.2", 0: "1.5", 1: "-0.3"})
    assert ToeplitzOracle.toeplitz_det(0, 0, table, ctx=ctx) == 1
    assert ToeplitzOracle.toeplitz_det(0, 1, table, ctx=ctx) == mpc("1.5")
    expected = mpc("1.5") ** 2 - mpc("-0.3") * mpc("0.2")
    assert abs(ToeplitzOracle.toeplitz_det(0, 2, table, ctx=ctx) - expected) < mpf(10) ** -55


def test_reflection_initial_values(ctx):
    table = _table({-1: "0.2", 0: "1.5", 1: "-0.3"})
    assert ToeplitzOracle.reflection_from_dets(0, table, ctx=ctx) == (1, 1)
    r1, rbar1 = ToeplitzOracle.reflection_from_dets(1, table, ctx=ctx)
    assert abs(r1 - (-mpc("0.2") / mpc("1.5"))) < mpf(10) ** -55
    assert abs(rbar1 - (mpc("0.3") / mpc("1.5"))) < mpf(10) ** -55


def test_uniform_weight_has_zero_reflections(ctx):
    table = _table({n: (1 if n == 0 else 0) for n in range(-4, 5)})
    pairs = ToeplitzOracle.reflection_sequence(table, 4, ctx=ctx)
    assert all(r == 0 and rbar == 0 for r, rbar in pairs[1:])


def test_dodgson_condensation(ctx, generic_params):
    table = MomentCalculator.build_table("general", range(-11, 12), generic_params, ctx=ctx)
    dets = ToeplitzOracle.determinant_sequence(table, 11, ctx=ctx)
    pairs = ToeplitzOracle.reflection_sequence(table, 10, ctx=ctx)
    for N in range(1, 11):
        r, rbar = pairs[N]
        ratio = dets[N + 1] * dets[N - 1] / dets[N] ** 2
        assert abs(ratio - (1 - r * rbar)) < mpf(10) ** -35 * abs(ratio)
