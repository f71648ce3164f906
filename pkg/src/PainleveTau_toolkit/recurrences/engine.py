# -*- coding: utf-8 -*-
"""
反射係數遞迴引擎

以 2/2 或 2/1 型（對最高階差分為線性）遞迴推進 (r_N, r̄_N)，r̄ 的方程式一律由
z ↦ 1/z 對偶（ω ↔ ω̄、t ↦ 1/t、r ↔ r̄）產生。
"""
import logging
from typing import Callable, Optional, Tuple

from mpmath import mp, mpc, mpf

from proj_util_pkg.common.errors import (
    DegenerateForm,
    DisagreementError,
    DivisionByZero,
    ZeroPivot,
)
from proj_util_pkg.common.precision import PrecisionContext, is_small, precision_scope, relative_error
from recurrences.reflection_state import ReflectionSequence, ReflectionState, TauSequence
from toeplitz.determinants import ToeplitzOracle
from toeplitz.moments import MomentCalculator, MomentTable
from toeplitz.weight_params import WeightParams

logger = logging.getLogger(__name__)

METHOD_STEP_22 = "recurrence-22"
METHOD_STEP_21 = "recurrence-21"
METHOD_ORACLE = "det-oracle"

Accessor = Callable[[int], mpc]
TableBuilder = Callable[[PrecisionContext], MomentTable]


def p_coef(params: WeightParams, n) -> mpc:
    """n + μ + ω"""
    return n + params.mu + params.omega


def pb_coef(params: WeightParams, n) -> mpc:
    """n + μ + ω̄"""
    return n + params.mu + params.omega_bar


class RecurrenceEngine:
    """反射係數遞迴計算器"""

    @staticmethod
    @precision_scope
    def init_state(params: WeightParams, ctx: Optional[PrecisionContext] = None,
                   table: Optional[MomentTable] = None) -> ReflectionState:
        """
        N = 1 的初始狀態：r_1 = -w_{-1}/w_0，r̄_1 = -w_1/w_0

        Args:
            params: 權重參數
            ctx: 精度設定
            table: 已建立的 MomentTable（未提供時以一般公式計算 w_{-1}, w_0, w_1）

        Raises:
            DivisionByZero: w_0 = 0
        """
        if table is None:
            table = MomentCalculator.build_table("general", (-1, 0, 1), params, ctx=ctx)
        w0 = table.w(0)
        if w0 == 0:
            logger.error("w_0 = 0，無法建立初始反射係數")
            raise DivisionByZero("w_0 = 0")
        return ReflectionState.seed(params, -table.w(-1) / w0, -table.w(1) / w0)

    @staticmethod
    @precision_scope
    def step_2_2(state: ReflectionState, ctx: Optional[PrecisionContext] = None) -> ReflectionState:
        """
        以 2/2 型遞迴求 r_{N+1}、r̄_{N+1}

        Raises:
            ZeroPivot: (N+1+μ+ω̄)t(1-r_N r̄_N)/r_N 為零，或需除以的 r_N、r̄_{N-1} 為零
        """
        params, N = state.params, state.N
        r_next = RecurrenceEngine._solve_2_2(params, N, state.r, state.rbar, ctx)
        rbar_next = RecurrenceEngine._solve_2_2(params.dual(), N, state.rbar, state.r, ctx)
        logger.debug(f"2/2 步進 N={N + 1}: r={mp.nstr(r_next, 12)}, r̄={mp.nstr(rbar_next, 12)}")
        return state.advanced(r_next, rbar_next)

    @staticmethod
    @precision_scope
    def step_2_1(state: ReflectionState, ctx: Optional[PrecisionContext] = None) -> ReflectionState:
        """
        以 2/1 型遞迴求 r_{N+1}（r̄_{N+1} 由其對偶的 1/2 型求得）

        Raises:
            DegenerateForm: ω̄ = ω，r_{N+1} 的係數恆為零
            ZeroPivot: 1 - r_N r̄_N = 0
        """
        params, N = state.params, state.N
        if is_small(params.omega_bar - params.omega, 1, ctx):
            logger.error("ω̄ = ω 時 2/1 型退化，請改用 2/2 型")
            raise DegenerateForm("ω̄ = ω 時 2/1 型遞迴退化")
        r_next = RecurrenceEngine._solve_2_1(params, N, state.r, state.rbar, ctx)
        rbar_next = RecurrenceEngine._solve_2_1(params.dual(), N, state.rbar, state.r, ctx)
        logger.debug(f"2/1 步進 N={N + 1}: r={mp.nstr(r_next, 12)}, r̄={mp.nstr(rbar_next, 12)}")
        return state.advanced(r_next, rbar_next)

    @staticmethod
    @precision_scope
    def compute_subleading(state: ReflectionState, ctx: Optional[PrecisionContext] = None,
                           index: Optional[int] = None) -> Tuple[mpc, mpc]:
        """
        由反射係數計算 (l_M/κ_M, l̄_M/κ_M)

        l_M 由含 r_{M+1} 的表示式求得，因此預設 M = state.N - 1；l̄_M 由線性關係
        (M+μ+ω̄)t l_M - (M+μ+ω) l̄_M = M[μ(t-1)+ω̄-ωt]κ_M 解出。t = 0 時改用和式。

        Raises:
            DivisionByZero: r_M = 0 或 M+μ+ω = 0
        """
        params = state.params
        M = state.N - 1 if index is None else index
        if M <= 0:
            return mpc(0), mpc(0)
        t = mpc(params.t)
        if t == 0:
            l_ratio = state.l(M)
        else:
            if state.r(M) == 0:
                logger.error(f"r_{M} = 0，無法由反射係數求 l_{M}")
                raise DivisionByZero(f"r_{M} = 0")
            l_ratio = RecurrenceEngine._l_solution(params, M, state.r, state.rbar) / (2 * t)
        p_m = p_coef(params, M)
        if p_m == 0:
            raise DivisionByZero(f"{M}+μ+ω = 0")
        inhomogeneous = M * (params.mu * (t - 1) + params.omega_bar - params.omega * t)
        lbar_ratio = (pb_coef(params, M) * t * l_ratio - inhomogeneous) / p_m
        return l_ratio, lbar_ratio

    @staticmethod
    @precision_scope
    def compute_subleading_swapped(state: ReflectionState, ctx: Optional[PrecisionContext] = None,
                                   index: Optional[int] = None) -> mpc:
        """l̄_M/κ_M 的對偶表示式（將 l_M 的表示式套用 ω ↔ ω̄、t ↦ 1/t、r ↔ r̄）"""
        dual = state.params.dual()
        M = state.N - 1 if index is None else index
        if M <= 0:
            return mpc(0)
        if state.rbar(M) == 0:
            raise DivisionByZero(f"r̄_{M} = 0")
        return RecurrenceEngine._l_solution(dual, M, state.rbar, state.r) / (2 * mpc(dual.t))

    @staticmethod
    @precision_scope
    def tau_sequence(sequence: ReflectionSequence, I1, I0=1, ctx: Optional[PrecisionContext] = None) -> TauSequence:
        """
        I_{N+1} = (I_N²/I_{N-1})(1 - r_N r̄_N)

        Args:
            sequence: 反射係數序列（N = 0 … M）
            I1: I_1 = w_0
            I0: I_0，預設 1

        Returns:
            I_0 … I_M

        Raises:
            DivisionByZero: I_{N-1} = 0
        """
        ratios = [1 - mpc(r) * mpc(rbar) for r, rbar in zip(sequence.r, sequence.rbar)]
        values = [mpc(I0), mpc(I1)]
        for N in range(1, sequence.N_max):
            if values[N - 1] == 0:
                logger.error(f"I_{N - 1} = 0，τ 序列無法繼續")
                raise DivisionByZero(f"I_{N - 1} = 0")
            values.append(values[N] ** 2 / values[N - 1] * ratios[N])
        return TauSequence(params=sequence.params, values=values[:sequence.N_max + 1], ratios=ratios)

    @staticmethod
    @precision_scope
    def run(params: WeightParams, N_max: int, method: str = METHOD_STEP_22, ctx: Optional[PrecisionContext] = None,
            table: Optional[MomentTable] = None, seed_state: Optional[ReflectionState] = None,
            fallback_to_oracle: bool = True) -> ReflectionSequence:
        """
        由初始值推進到 N_max

        Args:
            params: 權重參數
            N_max: 最大索引
            method: "recurrence-22" 或 "recurrence-21"
            ctx: 精度設定
            table: MomentTable（初始值與行列式備援使用）
            seed_state: 自訂初始狀態（應用情境的解析初始值）
            fallback_to_oracle: 遇到 ZeroPivot 時改以行列式補完序列

        Returns:
            ReflectionSequence
        """
        if N_max < 1:
            raise ValueError("N_max 必須 ≥ 1")
        state = seed_state or RecurrenceEngine.init_state(params, ctx=ctx, table=table)

        if RecurrenceEngine._is_trivial_seed(state, params, table, ctx):
            logger.warning("r_1 = r̄_1 = 0 且 w_{±2} = 0，視為均勻權重，反射係數全為零")
            return ReflectionSequence(params=params, r=[mpc(1)] + [mpc(0)] * N_max,
                                      rbar=[mpc(1)] + [mpc(0)] * N_max, method=method)

        step = RecurrenceEngine.step_2_1 if method == METHOD_STEP_21 else RecurrenceEngine.step_2_2
        states = [state]
        while state.N < N_max:
            try:
                state = step(state, ctx=ctx)
            except ZeroPivot as exc:
                if not fallback_to_oracle:
                    raise
                logger.warning(f"N={state.N} 遞迴遇到零主元（{exc}），其餘索引改用行列式計算")
                partial = ReflectionSequence.from_states(states, method)
                return RecurrenceEngine._complete_with_oracle(partial, N_max, table, ctx)
            states.append(state)
        return ReflectionSequence.from_states(states, method)

    @staticmethod
    @precision_scope
    def oracle_sequence(params: Optional[WeightParams], N_max: int, ctx: Optional[PrecisionContext] = None,
                        table: Optional[MomentTable] = None) -> ReflectionSequence:
        """以行列式比值計算 (r_N, r̄_N)，N = 0 … N_max"""
        if table is None:
            table = MomentCalculator.build_table("general", range(-N_max, N_max + 1), params, ctx=ctx)
        pairs = ToeplitzOracle.reflection_sequence(table, N_max, ctx=ctx)
        return ReflectionSequence(
            params=params if params is not None else table.params,
            r=[p[0] for p in pairs],
            rbar=[p[1] for p in pairs],
            method=METHOD_ORACLE,
        )

    @staticmethod
    def compare_sequences(first: ReflectionSequence, second: ReflectionSequence) -> mpf:
        """兩序列 r、r̄ 的最大相對誤差"""
        worst = mpf(0)
        for a, b in zip(first.r, second.r):
            worst = max(worst, relative_error(a, b))
        for a, b in zip(first.rbar, second.rbar):
            worst = max(worst, relative_error(a, b))
        return worst

    @staticmethod
    def run_verified(params: WeightParams, N_max: int, method: str = METHOD_STEP_22,
                     ctx: Optional[PrecisionContext] = None,
                     table_builder: Optional[TableBuilder] = None) -> ReflectionSequence:
        """
        推進並與行列式比對；誤差超過 10^{-digits/2} 時以兩倍精度重算整段序列

        Raises:
            DisagreementError: 提高精度後仍不一致
        """
        ctx = ctx or PrecisionContext.from_settings()
        builder = table_builder or (
            lambda c: MomentCalculator.build_table("general", range(-N_max, N_max + 1), params, ctx=c)
        )
        worst = mpf(0)
        for attempt in (ctx, ctx.escalated()):
            with mp.workdps(attempt.decimal_digits):
                table = builder(attempt)
                sequence = RecurrenceEngine.run(params, N_max, method, ctx=attempt, table=table)
                oracle = RecurrenceEngine.oracle_sequence(params, N_max, ctx=attempt, table=table)
                worst = RecurrenceEngine.compare_sequences(sequence, oracle)
            if worst <= ctx.half_tol:
                return sequence
            logger.info(f"遞迴與行列式差異 {mp.nstr(worst, 5)}，提高精度至 {attempt.decimal_digits * 2} 位重算")
        logger.error(f"提高精度後遞迴與行列式仍不一致 (差異 {mp.nstr(worst, 5)})")
        raise DisagreementError("遞迴與行列式結果不一致", worst=float(worst))

    @staticmethod
    def _solve_2_2(params: WeightParams, N: int, r: Accessor, rb: Accessor, ctx: PrecisionContext) -> mpc:
        t = mpc(params.t)
        K = 1 - r(N) * rb(N)
        K_prev = 1 - r(N - 1) * rb(N - 1)
        pivot = pb_coef(params, N + 1) * t * K
        if r(N) == 0 or is_small(pivot, 1, ctx) or (K_prev != 0 and rb(N - 1) == 0):
            logger.error(f"2/2 型在 N={N} 的主元為零")
            raise ZeroPivot(f"2/2 型在 N={N} 的主元為零")
        lhs = t * r(N) * rb(N - 1) + r(N - 1) * rb(N) - t - 1
        back = mpc(0)
        if K_prev != 0:
            back = K_prev / rb(N - 1) * (p_coef(params, N) * rb(N) + pb_coef(params, N - 2) * t * rb(N - 2))
        return ((lhs + back) * r(N) / K - p_coef(params, N - 1) * r(N - 1)) / (pb_coef(params, N + 1) * t)

    @staticmethod
    def _solve_2_1(params: WeightParams, N: int, r: Accessor, rb: Accessor, ctx: PrecisionContext) -> mpc:
        mu, omega1, omega, omega_bar = params.mu, params.omega1, params.omega, params.omega_bar
        t = mpc(params.t)
        S = r(N) * rb(N)
        gap = omega_bar - omega
        pivot = pb_coef(params, N + 1) * gap * t * (1 - S)
        if is_small(pivot, 1, ctx):
            logger.error(f"2/1 型在 N={N} 的主元為零")
            raise ZeroPivot(f"2/1 型在 N={N} 的主元為零")
        rest = (
            p_coef(params, N - 1) * (2 * p_coef(params, N) * S + gap) * r(N - 1)
            - pb_coef(params, N - 1) * (2 * N + 2 * mu + 2 * omega1) * t * r(N) ** 2 * rb(N - 1)
            + (gap * N * (t + 1) - (2 * mu + 2 * omega1) * (mu * (1 - t) + omega * t - omega_bar)) * r(N)
        )
        return -rest / pivot

    @staticmethod
    def _l_solution(params: WeightParams, N: int, r: Accessor, rb: Accessor) -> mpc:
        """2t·l_N/κ_N（含 r_{N+1} 的表示式）"""
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        t = mpc(params.t)
        return (
            pb_coef(params, N + 1) * t * (r(N + 1) / r(N) - r(N + 1) * rb(N))
            + p_coef(params, N - 1) * r(N - 1) / r(N)
            - pb_coef(params, N - 1) * t * r(N) * rb(N - 1)
            + (N + mu - omega) * t + N - mu + omega_bar
        )

    @staticmethod
    def _is_trivial_seed(state: ReflectionState, params: WeightParams, table: Optional[MomentTable],
                         ctx: PrecisionContext) -> bool:
        if not (is_small(state.r(1), 1, ctx) and is_small(state.rbar(1), 1, ctx)):
            return False
        if table is not None and table.covers(-2, 2):
            second = (table.w(-2), table.w(2))
        elif params is not None:
            second = tuple(MomentCalculator.moment_general(n, params, ctx=ctx) for n in (-2, 2))
        else:
            return False
        return all(is_small(w, 1, ctx) for w in second)

    @staticmethod
    def _complete_with_oracle(partial: ReflectionSequence, N_max: int, table: Optional[MomentTable],
                              ctx: PrecisionContext) -> ReflectionSequence:
        if table is None or not table.covers(-N_max, N_max):
            if partial.params is None:
                raise ZeroPivot("沒有足夠的 Toeplitz 矩陣元素可改用行列式")
            table = MomentCalculator.build_table("general", range(-N_max, N_max + 1), partial.params, ctx=ctx)
        r, rbar = list(partial.r), list(partial.rbar)
        for N in range(len(r), N_max + 1):
            r_N, rbar_N = ToeplitzOracle.reflection_from_dets(N, table, ctx=ctx)
            r.append(r_N)
            rbar.append(rbar_N)
        return ReflectionSequence(params=partial.params, r=r, rbar=rbar, method=f"{partial.method}+{METHOD_ORACLE}")
