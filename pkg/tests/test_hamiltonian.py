# -*- coding: utf-8 -*-
import pytest
from mpmath import mpc, mpf
from pydantic import ValidationError

from dpv.hamiltonian import (HamiltonianMaps, HamiltonianState, alphas_l01, alphas_l14, hamiltonian_K,
                             reflection_time)
from dpv.schemes import SCHEME_L01, TauSchemes
from proj_util_pkg.common.errors import DivisionByZero
from proj_util_pkg.common.precision import relative_error
from recurrences.engine import RecurrenceEngine
from recurrences.reflection_state import ReflectionSequence, normalized_residual
from toeplitz.weight_params import WeightParams

ALPHAS = (mpc("0.4"), mpc("0.3", "0.1"), mpc("-0.2"), mpc("0.25", "-0.1"), mpc("0.45"))


def test_hamiltonian_simple_values():
    q, t = mpc("0.3", "0.2"), mpc("0.6", "-0.1")
    expected = ALPHAS[2] * (ALPHAS[1] + ALPHAS[2]) * (q - t)
    assert abs(hamiltonian_K(q, 0, t, ALPHAS) - expected) < mpf(10) ** -55
    assert hamiltonian_K(t, 0, t, ALPHAS) == 0
    alphas = (ALPHAS[0], ALPHAS[1], mpc(0), ALPHAS[3], ALPHAS[4])
    assert hamiltonian_K(q, 0, t, alphas) == 0


def test_alpha_constraint(dpv_params):
    for N in range(0, 5):
        for alphas in (alphas_l01(dpv_params, N), alphas_l14(dpv_params, N)):
            a0, a1, a2, a3, a4 = alphas
            assert abs(a0 + a1 + 2 * a2 + a3 + a4 - 1) < mpf(10) ** -50
    with pytest.raises(ValidationError):
        HamiltonianState(N=1, q="0.3", p="0.1", t="0.5", alphas=(1, 1, 1, 1, 1))


@pytest.fixture
def random_state(dpv_params):
    return HamiltonianState.for_scheme(dpv_params, 3, mpc("0.37", "0.21"), mpc("-0.6", "0.45"), "L01")


def test_x3_is_involution(random_state):
    image = HamiltonianMaps.s4_x3_transform(random_state)
    assert image.scheme == "L14"
    assert image.alphas[0] == random_state.alphas[4]
    back = HamiltonianMaps.s4_x3_transform(image)
    assert back.scheme == "L01"
    for name in ("q", "p", "t"):
        assert relative_error(getattr(back, name), getattr(random_state, name)) < mpf(10) ** -50
    assert all(abs(a - b) < mpf(10) ** -50 for a, b in zip(back.alphas, random_state.alphas))


def test_x3_sends_q_equal_t_to_zero(dpv_params):
    ham = HamiltonianState.for_scheme(dpv_params, 2, dpv_params.t, "0.3", "L01")
    assert abs(HamiltonianMaps.s4_x3_transform(ham).q) < mpf(10) ** -55


def test_x3_rejects_t_one(dpv_params):
    ham = HamiltonianState.for_scheme(dpv_params, 2, "0.3", "0.1", "L01", t=1)
    with pytest.raises(DivisionByZero):
        HamiltonianMaps.s4_x3_transform(ham)


def test_x3_maps_l01_auxiliaries_to_l14(random_state):
    g01, f01 = HamiltonianMaps.l01_aux(random_state)
    g14, f14 = HamiltonianMaps.l14_aux(HamiltonianMaps.s4_x3_transform(random_state))
    assert relative_error(g14, g01) < mpf(10) ** -50
    assert normalized_residual(f14, -f01) < mpf(10) ** -50


def test_oracle_qp_satisfies_implicit_relations(ctx, dpv_params):
    oracle = RecurrenceEngine.oracle_sequence(dpv_params, 7, ctx=ctx)
    for N in range(1, 6):
        window = oracle.window(N + 1)
        ham = HamiltonianMaps.oracle_qp(window, ctx=ctx, index=N)
        assert ham.scheme == "L01"
        report = HamiltonianMaps.map_qp_reflections(ham, window, ctx=ctx, index=N)
        assert {"qp_a", "qp_b", "qp_c", "qp_d", "factorization"} <= set(report.residuals)
        assert report.worst < mpf(10) ** -35


def test_factorization_sensitivity(ctx, dpv_params):
    oracle = RecurrenceEngine.oracle_sequence(dpv_params, 5, ctx=ctx)
    window = oracle.window(4)
    ham = HamiltonianMaps.oracle_qp(window, ctx=ctx, index=3)
    delta = mpf(10) ** -8
    residuals = []
    for scale in (1, 2):
        shifted = ham.model_copy(update={"p": ham.p + scale * delta})
        report = HamiltonianMaps.map_qp_reflections(shifted, window, ctx=ctx, index=3)
        residuals.append(report.residuals["factorization"])
    assert residuals[0] > mpf(10) ** -15
    assert 1.5 < residuals[1] / residuals[0] < 2.5


def test_trivial_sequence_factorization(ctx):
    params = WeightParams(mu=0, omega1=0, omega2=0, t="0.5")
    sequence = ReflectionSequence(params=params, r=[mpc(1)] + [mpc(0)] * 4, rbar=[mpc(1)] + [mpc(0)] * 4)
    ham = HamiltonianState.for_scheme(params, 2, "0.4", 0, "L01")
    report = HamiltonianMaps.map_qp_reflections(ham, sequence.window(3), ctx=ctx, index=2)
    assert set(report.residuals) == {"factorization"}
    assert report.worst == 0
    with pytest.raises(DivisionByZero):
        HamiltonianMaps.oracle_qp(sequence.window(3), ctx=ctx, index=2)


def test_scheme_qp_satisfy_implicit_relations(ctx, dpv_params):
    oracle = RecurrenceEngine.oracle_sequence(dpv_params, 7, ctx=ctx)
    trace = TauSchemes.run_scheme(SCHEME_L01, dpv_params, 6, ctx=ctx, convention="pvi")
    for row in trace.rows[1:]:
        ham = HamiltonianState.for_scheme(dpv_params, row.N, row.q, row.p, "L01", t=trace.time)
        report = HamiltonianMaps.map_qp_reflections(ham, oracle.window(row.N + 1), ctx=ctx, index=row.N)
        assert report.worst < mpf(10) ** -25
        oracle_ham = HamiltonianMaps.oracle_qp(oracle.window(row.N + 1), ctx=ctx, index=row.N)
        assert relative_error(oracle_ham.q, row.q) < mpf(10) ** -25
        assert relative_error(oracle_ham.p, row.p) < mpf(10) ** -25


def test_oracle_qp_closed_form_at_half_exponent(ctx):
    # μ = 1/2, ω = 0：q_1 = (3+s)/(3+2s+3s²)
    s = mpf("0.3")
    params = WeightParams(mu="0.5", omega1=0, omega2=0, t="0.3")
    oracle = RecurrenceEngine.oracle_sequence(params, 3, ctx=ctx)
    ham = HamiltonianMaps.oracle_qp(oracle.window(2), ctx=ctx, index=1)
    P = 3 + 2 * s + 3 * s ** 2
    assert relative_error(ham.q, (3 + s) / P) < mpf(10) ** -40
    assert relative_error(ham.p, -2 * P * (1 - s) / ((3 + s) * (1 + 3 * s) * (1 + s))) < mpf(10) ** -40
    assert relative_error(ham.t, 1 / (1 - s)) < mpf(10) ** -50


def test_reflection_time():
    assert relative_error(reflection_time(mpc("0.3")), mpf("0.3") / mpf("-0.7")) < mpf(10) ** -50
    with pytest.raises(DivisionByZero):
        reflection_time(1)
