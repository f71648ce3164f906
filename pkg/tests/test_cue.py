# -*- coding: utf-8 -*-
import pytest
from mpmath import mp, mpc, mpf

from applications.cue import METHOD_GAMMA_PRODUCT, CueApplications
from cli.panels import check_cue_gap, check_cue_moment
from proj_util_pkg.common.errors import PreconditionError
from proj_util_pkg.common.precision import relative_error

TOLERANCE = mpf(10) ** -25


@pytest.mark.parametrize("xi", ["0.3", "0.7", "1"])
@pytest.mark.parametrize("phi_factor", [mpf(1) / 4, mpf(1) / 2, mpf(1)])
def test_gap_matches_determinants(ctx, xi, phi_factor):
    assert check_cue_gap(ctx, xi, mp.nstr(phi_factor * mp.pi, 60), 8) < TOLERANCE


def test_gap_initial_values(ctx):
    xi, phi = mpf("0.7"), mp.pi / 3
    run = CueApplications.cue_gap_sequence(xi, phi, 4, ctx=ctx)
    assert run.E_values[0] == 1
    assert relative_error(run.E_values[1], 1 - xi * phi / (2 * mp.pi)) < mpf(10) ** -50
    assert run.x_values[0] == 1
    assert relative_error(run.x_values[1], -xi / mp.pi * mp.sin(phi / 2) / (1 - xi * phi / (2 * mp.pi))) \
        < mpf(10) ** -50
    assert run.quadratic_residual < TOLERANCE


def test_gap_probabilities_shrink_with_arc(ctx):
    grid = [mp.pi * j / 8 for j in range(1, 8)]
    runs = [CueApplications.cue_gap_sequence(1, phi, 6, ctx=ctx) for phi in grid]
    for N in range(1, 7):
        values = [mpc(run.E_values[N]) for run in runs]
        assert all(abs(v.imag) < TOLERANCE for v in values)
        assert all(0 <= v.real <= 1 for v in values)
        assert all(a.real > b.real for a, b in zip(values, values[1:]))


def test_gap_trivial_xi(ctx):
    run = CueApplications.cue_gap_sequence(0, mp.pi / 2, 5, ctx=ctx)
    assert run.E_values == [1] * 6
    assert run.x_values[1:] == [0] * 5


@pytest.mark.parametrize("xi,turns", [(1, 0), (1, 2), (2, 1)])
def test_gap_preconditions(ctx, xi, turns):
    with pytest.raises(PreconditionError):
        CueApplications.cue_gap_sequence(xi, turns * mp.pi, 4, ctx=ctx)


def test_gap_requires_positive_rank(ctx):
    with pytest.raises(ValueError):
        CueApplications.cue_gap_sequence(1, mp.pi / 2, 0, ctx=ctx)


def test_gap_frame(ctx):
    frame = CueApplications.cue_gap_sequence(mpf("0.5"), mp.pi / 2, 3, ctx=ctx).to_frame()
    assert list(frame.columns) == ["N", "re_E", "im_E", "re_x", "im_x", "method"]
    assert len(frame) == 4


@pytest.mark.parametrize("mu", ["0.5", "1", "1.5", "0.37"])
def test_unit_modulus_gamma_product(ctx, mu):
    run = CueApplications.cue_moment_sequence(mpf(mu), 1, 6, ctx=ctx)
    assert run.method == METHOD_GAMMA_PRODUCT
    assert check_cue_moment(ctx, mu, "1", 6) < mpf(10) ** -30


def test_gamma_product_small_ranks(ctx):
    assert CueApplications.gamma_product(mpf("0.5"), 0, ctx=ctx) == 1
    # N = 1, μ = 1：Γ(3)/Γ(2)² = 2
    assert relative_error(CueApplications.gamma_product(1, 1, ctx=ctx), 2) < mpf(10) ** -50


@pytest.mark.parametrize("u", ["0.6", "0.36,0.48", "1.6666666666666666666666666666666666666666666666666667"])
def test_moments_match_determinants(ctx, u):
    assert check_cue_moment(ctx, "0.37", u, 8) < TOLERANCE


@pytest.mark.parametrize("u", [mpf("0.5"), mpf(2)])
def test_integer_exponent_is_geometric_sum(ctx, u):
    # μ = 1：⟨|det(u+U)|²⟩ = 1 + |u|² + … + |u|^{2N}
    run = CueApplications.cue_moment_sequence(1, u, 6, ctx=ctx)
    t = u ** 2
    for N, value in enumerate(run.F_values):
        assert relative_error(value, (1 - t ** (N + 1)) / (1 - t)) < TOLERANCE
    assert run.reduced == (u > 1)


def test_first_moment_is_gauss_series(ctx):
    mu, u = mpf("0.37"), mpc("0.36", "0.48")
    run = CueApplications.cue_moment_sequence(mu, u, 3, ctx=ctx)
    assert relative_error(run.F_values[1], mp.hyp2f1(-mu, -mu, 1, abs(u) ** 2)) < mpf(10) ** -50


def test_zero_argument(ctx):
    run = CueApplications.cue_moment_sequence(mpf("0.37"), 0, 5, ctx=ctx)
    assert run.F_values == [1] * 6
    assert len(run.r_values) == 6


def test_moment_preconditions(ctx):
    with pytest.raises(PreconditionError):
        CueApplications.cue_moment_sequence(mpf("-0.6"), mpf("0.5"), 4, ctx=ctx)
    with pytest.raises(ValueError):
        CueApplications.cue_moment_sequence(mpf("0.5"), mpf("0.5"), 0, ctx=ctx)


def test_reflections_scale_with_modulus(ctx):
    report = CueApplications.charpoly_reflection_residual(mpf("0.37"), mpc("0.36", "0.48"), 6, ctx=ctx)
    assert report.worst < mpf(10) ** -30
