# -*- coding: utf-8 -*-
"""
遞迴恆等式殘差檢查

在視窗狀態的索引 M（預設 state.N - 1，使 r_{M+1} 可用）上計算各恆等式的正規化殘差。
二次型恆等式只用於檢查，不用來求解。夥伴方程式一律以對偶參數加上 r ↔ r̄、l ↔ l̄ 互換產生。
"""
import logging
from typing import Callable, List, Optional, Tuple

from mpmath import mpc, mpf

from proj_util_pkg.common.precision import PrecisionContext, precision_scope
from proj_util_pkg.special.special_functions import SpecialFunctions
from recurrences.engine import p_coef, pb_coef
from recurrences.reflection_state import ReflectionSequence, ReflectionState, ResidualReport, normalized_residual
from toeplitz.weight_params import WeightParams

logger = logging.getLogger(__name__)

Accessor = Callable[[int], mpc]


class RecurrenceIdentities:
    """遞迴恆等式檢查器"""

    @staticmethod
    @precision_scope
    def residuals(state: ReflectionState, ctx: Optional[PrecisionContext] = None,
                  index: Optional[int] = None) -> ResidualReport:
        """
        遞迴階梯各恆等式的殘差：二階齊次式、l 的線性關係、兩個 Magnus 式、2/2 型、
        2/0 型、兩組 1/1 型、2/1 型（含對偶夥伴），以及 l 的四個表示式與和式的比對。
        """
        params = state.params
        dual = params.dual()
        M = RecurrenceIdentities._index(state, index)
        r, rb = state.r, state.rbar
        L, Lb = state.l(M), state.lbar(M)
        ident = RecurrenceIdentities

        residuals = {
            "second_order": normalized_residual(*ident._second_order_terms(params, M, r, rb)),
            "l_recurrence": normalized_residual(*ident._l_recurrence_terms(params, M, L, Lb)),
            "two_zero": normalized_residual(*ident._two_zero_terms(params, M, r, rb)),
            "zero_two": normalized_residual(*ident._two_zero_terms(dual, M, rb, r)),
            "one_one_a": normalized_residual(*ident._one_one_a_terms(params, M, r, rb)),
            "one_one_a_partner": normalized_residual(*ident._one_one_a_terms(dual, M, rb, r)),
            "one_one_b": normalized_residual(*ident._one_one_b_terms(params, M, r, rb)),
            "one_one_b_partner": normalized_residual(*ident._one_one_b_terms(dual, M, rb, r)),
            "two_one": normalized_residual(*ident._two_one_terms(params, M, r, rb)),
            "one_two": normalized_residual(*ident._two_one_terms(dual, M, rb, r)),
            "l_solution_c": normalized_residual(*ident._l_solution_c_terms(params, M, r, rb, L)),
        }
        if r(M) != 0:
            residuals["magnus_a"] = normalized_residual(*ident._magnus_terms(params, M, r, rb, L, Lb))
            residuals["l_solution_a"] = normalized_residual(*ident._l_solution_a_terms(params, M, r, rb, L))
        if rb(M) != 0:
            # 對偶下 t·l_M + l̄_M 變成 (l̄_M + t·l_M)/t，形式不變
            residuals["magnus_b"] = normalized_residual(*ident._magnus_terms(dual, M, rb, r, Lb, L))
            residuals["l_solution_b"] = normalized_residual(*ident._l_solution_b_terms(params, M, r, rb, L))
            residuals["lbar_solution_swapped"] = normalized_residual(
                *ident._l_solution_a_terms(dual, M, rb, r, Lb))
        # K_{M-1} = 0（例如 M = 1）時不需要除以 r̄_{M-1}
        trivial_prev = 1 - r(M - 1) * rb(M - 1) == 0
        if r(M) != 0 and (rb(M - 1) != 0 or trivial_prev):
            residuals["two_two_a"] = normalized_residual(*ident._two_two_terms(params, M, r, rb))
        if rb(M) != 0 and (r(M - 1) != 0 or trivial_prev):
            residuals["two_two_b"] = normalized_residual(*ident._two_two_terms(dual, M, rb, r))
        if params.omega_bar != params.omega:
            residuals["l_solution_d"] = normalized_residual(*ident._l_solution_d_terms(params, M, r, rb, L))
        return ResidualReport(label="ladder", index=M, residuals=residuals)

    @staticmethod
    @precision_scope
    def verify_bilinear(state: ReflectionState, ctx: Optional[PrecisionContext] = None,
                        index: Optional[int] = None) -> ResidualReport:
        """六個雙線性恆等式（在 z = -1 與 z = -1/t 兩個奇點上的特化）"""
        params = state.params
        M = RecurrenceIdentities._index(state, index)
        r, rb = state.r, state.rbar
        mu, omega1, omega2, omega_bar = params.mu, params.omega1, params.omega2, params.omega_bar
        t = mpc(params.t)
        L, Lb_next = state.l(M), state.lbar(M + 1)
        K = 1 - r(M) * rb(M)
        P, Pb = (lambda n: p_coef(params, n)), (lambda n: pb_coef(params, n))
        tail = ((t - 1) / t) ** 2

        residuals = {}
        bilinear = RecurrenceIdentities._bilinear_residual
        if r(M) != 0:
            ratio_up, ratio_down = r(M + 1) / r(M), r(M - 1) / r(M)
            residuals["bilinear_a"] = bilinear(
                [L, -M / t, -Pb(M + 1) * K * ratio_up, omega1 * (1 - 1 / t)],
                K, [Pb(M), P(M - 1) * ratio_down / t], [P(M) / t, Pb(M + 1) * ratio_up],
                -omega1 ** 2 * tail,
            )
            residuals["bilinear_b"] = bilinear(
                [L, -M, -Pb(M + 1) * K * ratio_up, mu * (1 / t - 1)],
                K / t, [Pb(M), P(M - 1) * ratio_down], [P(M), Pb(M + 1) * ratio_up],
                -mu ** 2 * tail,
            )
        residuals["bilinear_c"] = bilinear(
            [L, -M / t, P(M) * K / t, omega1 * (1 - 1 / t)],
            K, [Pb(M + 1) * r(M + 1), P(M) * r(M) / t], [Pb(M - 1) * rb(M - 1), P(M) * rb(M) / t],
            -omega1 ** 2 * tail,
        )
        residuals["bilinear_d"] = bilinear(
            [L, -M, P(M) * K, mu * (1 / t - 1)],
            K, [Pb(M + 1) * r(M + 1), P(M) * r(M)], [Pb(M - 1) * rb(M - 1), P(M) * rb(M)],
            -mu ** 2 * tail,
        )
        residuals["bilinear_e"] = bilinear(
            [Lb_next, P(M) * rb(M + 1) * r(M), omega1, (mu - mpc(0, 1) * omega2) * t],
            -1, [Pb(M + 1) * t * r(M + 1), P(M) * r(M)], [P(M + 1) * rb(M + 1), Pb(M) * t * rb(M)],
            -omega1 ** 2 * (t - 1) ** 2,
        )
        residuals["bilinear_f"] = bilinear(
            [Lb_next, P(M) * rb(M + 1) * r(M), omega_bar, mu * t],
            -t, [Pb(M + 1) * r(M + 1), P(M) * r(M)], [P(M + 1) * rb(M + 1), Pb(M) * rb(M)],
            -mu ** 2 * (t - 1) ** 2,
        )
        return ResidualReport(label="bilinear", index=M, residuals=residuals)

    @staticmethod
    def _bilinear_residual(x_parts: List[mpc], weight, left: List[mpc], right: List[mpc], constant) -> mpf:
        """
        (Σ x)² + weight·(Σ left)(Σ right) + constant 的殘差

        三個因子本身可能都是完全抵消的和（例如 Ising 臨界點），
        因此以各加項的大小而非因子的值來正規化。
        """
        def size(parts):
            return sum((abs(mpc(part)) for part in parts), mpf(0))

        x, a, b = (sum(parts, mpc(0)) for parts in (x_parts, left, right))
        scale = max(size(x_parts) ** 2, abs(weight) * size(left) * size(right), abs(constant))
        if scale == 0:
            return mpf(0)
        return abs(x ** 2 + weight * a * b + constant) / scale

    @staticmethod
    @precision_scope
    def check_avm(state: ReflectionState, ctx: Optional[PrecisionContext] = None, index: Optional[int] = None,
                  seed: Optional[Tuple[mpc, mpc, mpc]] = None) -> ResidualReport:
        """
        非齊次形式的檢查：右側分子 1 - (1-r_1 r̄_1)[(2+μ+ω̄)t r_2 + 1+μ+ω] + r_1(t r_1 - t - 1)
        應為零，且左側（2/2 型）殘差同樣為零。

        Args:
            seed: (r_1, r̄_1, r_2)；未提供時取自視窗
        """
        params = state.params
        M = RecurrenceIdentities._index(state, index)
        t = mpc(params.t)
        if seed is None:
            seed = (state.r(1), state.rbar(1), state.r(2))
        r1, rb1, r2 = seed
        K1 = 1 - r1 * rb1
        seed_terms = [
            mpc(1),
            -K1 * pb_coef(params, 2) * t * r2,
            -K1 * p_coef(params, 1),
            t * r1 ** 2,
            -t * r1,
            -r1,
        ]
        residuals = {"avm_seed": normalized_residual(*seed_terms)}
        if state.r(M) != 0 and state.rbar(M - 1) != 0:
            numerator = sum(seed_terms, mpc(0))
            terms = RecurrenceIdentities._two_two_terms(params, M, state.r, state.rbar)
            terms.append(-numerator / (state.r(M) * state.rbar(M - 1)))
            residuals["avm_form"] = normalized_residual(*terms)
        return ResidualReport(label="avm", index=M, residuals=residuals)

    @staticmethod
    @precision_scope
    def avm_seed_identity(a, b, c, x, ctx: Optional[PrecisionContext] = None):
        """
        c·₂F₁(a,b;c;x) = [c+(1+b-a)x]₂F₁(a,b+1;c+1;x) - ((b+1)/(c+1))(1+c-a)x·₂F₁(a,b+2;c+2;x)

        Returns:
            正規化殘差
        """
        sf = SpecialFunctions
        return normalized_residual(
            c * sf.gauss_2f1(a, b, c, x, ctx=ctx),
            -(c + (1 + b - a) * x) * sf.gauss_2f1(a, b + 1, c + 1, x, ctx=ctx),
            (b + 1) / (c + 1) * (1 + c - a) * x * sf.gauss_2f1(a, b + 2, c + 2, x, ctx=ctx),
        )

    @staticmethod
    @precision_scope
    def scan(sequence: ReflectionSequence, ctx: Optional[PrecisionContext] = None) -> List[ResidualReport]:
        """對序列每個可檢查的索引（1 … M-1）執行全部檢查"""
        reports = []
        seed = (sequence.r[1], sequence.rbar[1], sequence.r[2]) if sequence.N_max >= 2 else None
        for M in range(1, sequence.N_max):
            state = sequence.window(M + 1)
            report = RecurrenceIdentities.residuals(state, ctx=ctx)
            report = report.merged(RecurrenceIdentities.verify_bilinear(state, ctx=ctx))
            if seed is not None:
                report = report.merged(RecurrenceIdentities.check_avm(state, ctx=ctx, seed=seed))
            reports.append(report.model_copy(update={"label": "scan"}))
        return reports

    @staticmethod
    def _index(state: ReflectionState, index: Optional[int]) -> int:
        M = state.N - 1 if index is None else index
        if M < 1 or not state.has(M - 2, M + 1):
            raise ValueError(f"視窗無法檢查索引 {M}（需要 {M - 2} … {M + 1}）")
        return M

    @staticmethod
    def _second_order_terms(params: WeightParams, N: int, r: Accessor, rb: Accessor) -> list:
        t = mpc(params.t)
        return [
            pb_coef(params, N + 1) * t * r(N + 1) * rb(N),
            -pb_coef(params, N - 1) * t * r(N) * rb(N - 1),
            -p_coef(params, N + 1) * rb(N + 1) * r(N),
            p_coef(params, N - 1) * rb(N) * r(N - 1),
        ]

    @staticmethod
    def _l_recurrence_terms(params: WeightParams, N: int, L, Lb) -> list:
        t = mpc(params.t)
        return [
            pb_coef(params, N) * t * L,
            -p_coef(params, N) * Lb,
            -N * (params.mu * (t - 1) + params.omega_bar - params.omega * t),
        ]

    @staticmethod
    def _magnus_terms(params: WeightParams, N: int, r: Accessor, rb: Accessor, L, Lb) -> list:
        t = mpc(params.t)
        K = 1 - r(N) * rb(N)
        return [
            Lb,
            t * L,
            -N * (t + 1),
            -K / r(N) * pb_coef(params, N + 1) * t * r(N + 1),
            -K / r(N) * p_coef(params, N - 1) * r(N - 1),
        ]

    @staticmethod
    def _two_two_terms(params: WeightParams, N: int, r: Accessor, rb: Accessor) -> list:
        t = mpc(params.t)
        K = 1 - r(N) * rb(N)
        K_prev = 1 - r(N - 1) * rb(N - 1)
        terms = [
            t * r(N) * rb(N - 1),
            r(N - 1) * rb(N),
            -t,
            mpc(-1),
            -K / r(N) * pb_coef(params, N + 1) * t * r(N + 1),
            -K / r(N) * p_coef(params, N - 1) * r(N - 1),
        ]
        if K_prev != 0:
            terms.append(K_prev / rb(N - 1) * p_coef(params, N) * rb(N))
            terms.append(K_prev / rb(N - 1) * pb_coef(params, N - 2) * t * rb(N - 2))
        return terms

    @staticmethod
    def _two_zero_terms(params: WeightParams, N: int, r: Accessor, rb: Accessor) -> list:
        mu, omega1 = params.mu, params.omega1
        t = mpc(params.t)
        P, Pb = (lambda n: p_coef(params, n)), (lambda n: pb_coef(params, n))
        K = 1 - r(N) * rb(N)
        core = K * (Pb(N + 1) * Pb(N) * t * r(N + 1) - P(N) * P(N - 1) * r(N - 1))
        first = core + N * (N + 2 * omega1) * (t - 1) * r(N)
        second = core + (N + 2 * mu) * (N + 2 * mu + 2 * omega1) * (t - 1) * r(N)
        right = (
            (2 * N + 2 * mu + 2 * omega1) ** 2 * t * K
            * (Pb(N + 1) * r(N + 1) + P(N) * r(N))
            * (Pb(N) * r(N) + P(N - 1) * r(N - 1))
        )
        return [first * second, right]

    @staticmethod
    def _one_one_a_terms(params: WeightParams, N: int, r: Accessor, rb: Accessor) -> list:
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        t = mpc(params.t)
        P, Pb = (lambda n: p_coef(params, n)), (lambda n: pb_coef(params, n))
        S = r(N) * rb(N)
        K = 1 - S
        common = (
            -P(N) * K * t * (Pb(N + 1) * r(N + 1) * rb(N) + Pb(N - 1) * r(N) * rb(N - 1))
            + 2 * P(N) ** 2 * S ** 2
            - P(N) ** 2 * (t + 1) * S
        )
        first = common - 2 * P(N) * omega_bar * (t - 1) * S + (mu - omega_bar) * (mu + omega_bar) * (t - 1)
        second = common + 2 * P(N) * omega * (t - 1) * S + (mu - omega) * (mu + omega) * (t - 1)
        right = (
            (2 * P(N) * S + omega_bar - omega) ** 2 * K
            * (Pb(N + 1) * t * r(N + 1) + P(N) * r(N))
            * (P(N) * rb(N) + Pb(N - 1) * t * rb(N - 1))
        )
        return [first * second, right]

    @staticmethod
    def _one_one_b_terms(params: WeightParams, N: int, r: Accessor, rb: Accessor) -> list:
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        t = mpc(params.t)
        P, Pb = (lambda n: p_coef(params, n)), (lambda n: pb_coef(params, n))
        core = Pb(N + 1) * Pb(N) * t * r(N + 1) * rb(N) - P(N + 1) * P(N) * rb(N + 1) * r(N)
        first = core + (omega_bar - mu) * (omega_bar + mu) * (t - 1)
        second = core + (omega - mu) * (omega + mu) * (t - 1)
        right = (
            (omega_bar - omega) ** 2
            * (Pb(N + 1) * t * r(N + 1) + P(N) * r(N))
            * (P(N + 1) * rb(N + 1) + Pb(N) * t * rb(N))
        )
        return [first * second, -right]

    @staticmethod
    def _two_one_terms(params: WeightParams, N: int, r: Accessor, rb: Accessor) -> list:
        mu, omega1, omega, omega_bar = params.mu, params.omega1, params.omega, params.omega_bar
        t = mpc(params.t)
        S = r(N) * rb(N)
        gap = omega_bar - omega
        return [
            pb_coef(params, N + 1) * gap * t * (1 - S) * r(N + 1),
            p_coef(params, N - 1) * (2 * p_coef(params, N) * S + gap) * r(N - 1),
            -pb_coef(params, N - 1) * (2 * N + 2 * mu + 2 * omega1) * t * r(N) ** 2 * rb(N - 1),
            (gap * N * (t + 1) - (2 * mu + 2 * omega1) * (mu * (1 - t) + omega * t - omega_bar)) * r(N),
        ]

    @staticmethod
    def _l_solution_a_terms(params: WeightParams, N: int, r: Accessor, rb: Accessor, L) -> list:
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        t = mpc(params.t)
        return [
            2 * t * L,
            -pb_coef(params, N + 1) * t * r(N + 1) / r(N),
            pb_coef(params, N + 1) * t * r(N + 1) * rb(N),
            -p_coef(params, N - 1) * r(N - 1) / r(N),
            pb_coef(params, N - 1) * t * r(N) * rb(N - 1),
            -(N + mu - omega) * t,
            -(N - mu + omega_bar),
        ]

    @staticmethod
    def _l_solution_b_terms(params: WeightParams, N: int, r: Accessor, rb: Accessor, L) -> list:
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        t = mpc(params.t)
        return [
            2 * t * L,
            -p_coef(params, N + 1) * rb(N + 1) / rb(N),
            -pb_coef(params, N - 1) * t * rb(N - 1) / rb(N),
            pb_coef(params, N - 1) * t * r(N) * rb(N - 1),
            pb_coef(params, N + 1) * t * r(N + 1) * rb(N),
            -(N + mu - omega) * t,
            -(N - mu + omega_bar),
        ]

    @staticmethod
    def _l_solution_c_terms(params: WeightParams, N: int, r: Accessor, rb: Accessor, L) -> list:
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        t = mpc(params.t)
        P, Pb = (lambda n: p_coef(params, n)), (lambda n: pb_coef(params, n))
        S = r(N) * rb(N)
        return [
            (2 * P(N) * S + omega_bar - omega) * t * L,
            -P(N) * t * (1 - S) * Pb(N + 1) * r(N + 1) * rb(N),
            -P(N) * t * (1 - S) * Pb(N - 1) * r(N) * rb(N - 1),
            -P(N) * (N * (t + 1) - mu * (1 - t) - omega * t + omega_bar) * S,
            -(omega + mu) * (mu * (1 - t) + omega * t - omega_bar),
        ]

    @staticmethod
    def _l_solution_d_terms(params: WeightParams, N: int, r: Accessor, rb: Accessor, L) -> list:
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        t = mpc(params.t)
        P, Pb = (lambda n: p_coef(params, n)), (lambda n: pb_coef(params, n))
        return [
            (omega_bar - omega) * t * L,
            -P(N) * Pb(N - 1) * t * r(N) * rb(N - 1),
            P(N) * P(N - 1) * rb(N) * r(N - 1),
            -(omega + mu) * (mu * (1 - t) + omega * t - omega_bar),
        ]
