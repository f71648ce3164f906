# -*- coding: utf-8 -*-
"""
離散 Painlevé V 的 (f, g) 系統

第一組：
    g_{N+1} g_N = t (f_N+N)(f_N+N+2μ) / (f_N (f_N-2ω₁))
    f_N + f_{N-1} = 2ω₁ + (N-1+μ+ω)/(g_N-1) + (N+μ+ω̄)t/(g_N-t)
共軛組：
    ḡ_{N+1} ḡ_N = t⁻¹ (f̄_N+N)(f̄_N+N+2ω₁) / (f̄_N (f̄_N-2μ))
    f̄_N + f̄_{N-1} = 2μ + (N+μ+ω)/(ḡ_N-1) + (N-1+μ+ω̄)t⁻¹/(ḡ_N-t⁻¹)
初始條件 f_0 = f̄_0 = 0，g_1、ḡ_1 由 r_1、r̄_1 的封閉式給出。
"""
import logging
from typing import Any, Dict, List, Optional

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict

from proj_util_pkg.common.errors import DivisionByZero, SingularStep
from proj_util_pkg.common.precision import PrecisionContext, is_small, precision_scope, relative_error
from recurrences.engine import p_coef, pb_coef
from recurrences.reflection_state import ReflectionSequence, ReflectionState, ResidualReport, normalized_residual
from toeplitz.weight_params import WeightParams

logger = logging.getLogger(__name__)


class DpvState(BaseModel):
    """索引 N 的 (f_N, g_N) 與共軛 (f̄_N, ḡ_N)；N = 0 時 g、ḡ 未定義"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    N: int
    params: WeightParams
    f: Any
    g: Optional[Any] = None
    fbar: Optional[Any] = None
    gbar: Optional[Any] = None
    r1: Optional[Any] = None
    rbar1: Optional[Any] = None

    def to_row(self) -> Dict[str, Optional[str]]:
        def text(value) -> Optional[str]:
            return None if value is None else mp.nstr(mpc(value), 25)

        return {"N": self.N, "f": text(self.f), "g": text(self.g), "fbar": text(self.fbar), "gbar": text(self.gbar)}


class DpvSystem:
    """(f, g) 系統計算器"""

    @staticmethod
    @precision_scope
    def seed(params: WeightParams, r1, rbar1=None, ctx: Optional[PrecisionContext] = None) -> DpvState:
        """N = 0 的狀態：f_0 = f̄_0 = 0，保留 r_1、r̄_1 供第一步使用"""
        return DpvState(N=0, params=params, f=mpc(0), fbar=None if rbar1 is None else mpc(0),
                        r1=mpc(r1), rbar1=None if rbar1 is None else mpc(rbar1))

    @staticmethod
    @precision_scope
    def to_fg(refl: ReflectionState, ctx: Optional[PrecisionContext] = None, index: Optional[int] = None,
              conjugate: bool = True) -> DpvState:
        """
        由反射係數計算 (f_M, g_M, f̄_M, ḡ_M)

        f_M 需要 r_{M+1}，因此預設 M = refl.N - 1。

        Args:
            refl: 含 r_{M-1} … r_{M+1} 的視窗
            ctx: 精度設定
            index: 索引 M
            conjugate: 是否一併計算共軛變數

        Returns:
            DpvState

        Raises:
            DivisionByZero: t = 1、r_M 或 r_{M-1} 為零，或分母為零
        """
        params = refl.params
        M = refl.N - 1 if index is None else index
        t = mpc(params.t)
        if t == 1:
            raise DivisionByZero("t = 1 時 f_N 無定義")
        r, rb = refl.r, refl.rbar

        if M == 0:
            return DpvState(N=0, params=params, f=mpc(0), fbar=mpc(0) if conjugate else None,
                            r1=r(1), rbar1=rb(1))

        L = refl.l(M)
        K = 1 - r(M) * rb(M)
        if r(M - 1) == 0 or r(M) == 0:
            logger.error(f"r_{M - 1} 或 r_{M} 為零，無法轉換為 (f, g)")
            raise DivisionByZero(f"r_{M - 1} 或 r_{M} 為零")
        ratio = r(M) / r(M - 1)
        g_den = p_coef(params, M - 1) + pb_coef(params, M) * t * ratio
        if g_den == 0:
            raise DivisionByZero(f"g_{M} 的分母為零")
        g = t * (p_coef(params, M - 1) + pb_coef(params, M) * ratio) / g_den
        f = (t * L - M - pb_coef(params, M + 1) * K * t * r(M + 1) / r(M)) / (1 - t)

        fbar = gbar = None
        if conjugate:
            if rb(M - 1) == 0 or rb(M) == 0:
                raise DivisionByZero(f"r̄_{M - 1} 或 r̄_{M} 為零")
            ratio_bar = rb(M) / rb(M - 1)
            gbar_den = pb_coef(params, M - 1) + p_coef(params, M) * ratio_bar
            if gbar_den == 0:
                raise DivisionByZero(f"ḡ_{M} 的分母為零")
            gbar = (pb_coef(params, M - 1) + p_coef(params, M) / t * ratio_bar) / gbar_den
            fbar = (-t * L + M * t + pb_coef(params, M - 1) * K * t * rb(M - 1) / rb(M)) / (1 - t)
        return DpvState(N=M, params=params, f=f, g=g, fbar=fbar, gbar=gbar)

    @staticmethod
    @precision_scope
    def dpv_step(state: DpvState, ctx: Optional[PrecisionContext] = None) -> DpvState:
        """
        (f_N, g_N) → (f_{N+1}, g_{N+1})，共軛變數存在時一併推進

        N = 0 時 f_0 = 0 使 g 的遞迴成為 0/0，改用 g_1 的封閉式。

        Raises:
            SingularStep: f_N ∈ {0, 2ω₁}、g_N = 0 或 g_{N+1} ∈ {1, t}（訊息標明分母）
        """
        params, N = state.params, state.N
        t = mpc(params.t)
        two_omega1 = 2 * params.omega1

        if N == 0:
            g_next = DpvSystem._initial_g(params, state.r1, ctx)
        else:
            DpvSystem._require_nonzero(state.f, "f_N", N, ctx)
            DpvSystem._require_nonzero(state.f - two_omega1, "f_N-2ω₁", N, ctx)
            DpvSystem._require_nonzero(state.g, "g_N", N, ctx)
            f = state.f
            g_next = t * (f + N) * (f + N + 2 * params.mu) / (f * (f - two_omega1) * state.g)
        DpvSystem._require_nonzero(g_next - 1, "g_{N+1}-1", N, ctx)
        DpvSystem._require_nonzero(g_next - t, "g_{N+1}-t", N, ctx)
        f_next = (two_omega1 + p_coef(params, N) / (g_next - 1)
                  + pb_coef(params, N + 1) * t / (g_next - t) - state.f)

        fbar_next = gbar_next = None
        if state.fbar is not None:
            t_inv = 1 / t
            two_mu = 2 * params.mu
            if N == 0:
                gbar_next = DpvSystem._initial_gbar(params, state.rbar1, ctx)
            else:
                DpvSystem._require_nonzero(state.fbar, "f̄_N", N, ctx)
                DpvSystem._require_nonzero(state.fbar - two_mu, "f̄_N-2μ", N, ctx)
                DpvSystem._require_nonzero(state.gbar, "ḡ_N", N, ctx)
                fb = state.fbar
                gbar_next = t_inv * (fb + N) * (fb + N + two_omega1) / (fb * (fb - two_mu) * state.gbar)
            DpvSystem._require_nonzero(gbar_next - 1, "ḡ_{N+1}-1", N, ctx)
            DpvSystem._require_nonzero(gbar_next - t_inv, "ḡ_{N+1}-1/t", N, ctx)
            fbar_next = (two_mu + p_coef(params, N + 1) / (gbar_next - 1)
                         + pb_coef(params, N) * t_inv / (gbar_next - t_inv) - state.fbar)

        logger.debug(f"dPV 步進 N={N + 1}: f={mp.nstr(f_next, 12)}, g={mp.nstr(g_next, 12)}")
        return DpvState(N=N + 1, params=params, f=f_next, g=g_next, fbar=fbar_next, gbar=gbar_next)

    @staticmethod
    @precision_scope
    def dpv_sequence(params: WeightParams, r1, rbar1, N_max: int,
                     ctx: Optional[PrecisionContext] = None) -> List[DpvState]:
        """由 r_1、r̄_1 反覆 dpv_step 到 N_max（rbar1 為 None 時只推進第一組）"""
        state = DpvSystem.seed(params, r1, rbar1, ctx=ctx)
        states = [state]
        for _ in range(N_max):
            state = DpvSystem.dpv_step(state, ctx=ctx)
            states.append(state)
        return states

    @staticmethod
    @precision_scope
    def oracle_images(sequence: ReflectionSequence, ctx: Optional[PrecisionContext] = None,
                      conjugate: bool = True) -> List[DpvState]:
        """對反射係數序列逐一套用 to_fg，得到 M = 0 … N_max-1 的 (f, g)"""
        return [DpvSystem.to_fg(sequence.window(M + 1), ctx=ctx, index=M, conjugate=conjugate)
                for M in range(sequence.N_max)]

    @staticmethod
    @precision_scope
    def closure_residuals(states: List[DpvState], ctx: Optional[PrecisionContext] = None) -> ResidualReport:
        """
        (f, g) 序列代入兩組遞迴的正規化殘差（取各索引最大值）

        Returns:
            鍵為 g_recurrence、f_recurrence（及共軛版本 *_conjugate）的 ResidualReport
        """
        worst: Dict[str, mpf] = {}

        def record(name: str, value: mpf) -> None:
            worst[name] = max(worst.get(name, mpf(0)), value)

        for prev, cur, nxt in zip(states, states[1:], states[2:]):
            params, N = cur.params, cur.N
            t = mpc(params.t)
            f, g = cur.f, cur.g
            record("g_recurrence", normalized_residual(
                nxt.g * g * f * (f - 2 * params.omega1), -t * (f + N) * (f + N + 2 * params.mu)))
            record("f_recurrence", normalized_residual(
                f, prev.f, -2 * params.omega1, -p_coef(params, N - 1) / (g - 1), -pb_coef(params, N) * t / (g - t)))
            if cur.fbar is None or nxt.gbar is None or prev.fbar is None:
                continue
            fb, gb = cur.fbar, cur.gbar
            record("g_recurrence_conjugate", normalized_residual(
                nxt.gbar * gb * fb * (fb - 2 * params.mu), -(fb + N) * (fb + N + 2 * params.omega1) / t))
            record("f_recurrence_conjugate", normalized_residual(
                fb, prev.fbar, -2 * params.mu, -p_coef(params, N) / (gb - 1),
                -pb_coef(params, N - 1) / t / (gb - 1 / t)))
        return ResidualReport(label="dpv-closure", residuals=worst)

    @staticmethod
    def compare_states(first: List[DpvState], second: List[DpvState]) -> mpf:
        """兩組 (f, g, f̄, ḡ) 序列的最大相對誤差（略過未定義的值）"""
        worst = mpf(0)
        for a, b in zip(first, second):
            for name in ("f", "g", "fbar", "gbar"):
                x, y = getattr(a, name), getattr(b, name)
                if x is None or y is None:
                    continue
                worst = max(worst, relative_error(x, y))
        return worst

    @staticmethod
    def _initial_g(params: WeightParams, r1, ctx: PrecisionContext) -> mpc:
        t = mpc(params.t)
        numerator = p_coef(params, 0) + pb_coef(params, 1) * r1
        denominator = p_coef(params, 0) + pb_coef(params, 1) * t * r1
        DpvSystem._require_nonzero(denominator, "g_1 的分母", 0, ctx)
        return t * numerator / denominator

    @staticmethod
    def _initial_gbar(params: WeightParams, rbar1, ctx: PrecisionContext) -> mpc:
        t = mpc(params.t)
        numerator = pb_coef(params, 0) + p_coef(params, 1) / t * rbar1
        denominator = pb_coef(params, 0) + p_coef(params, 1) * rbar1
        DpvSystem._require_nonzero(denominator, "ḡ_1 的分母", 0, ctx)
        return numerator / denominator

    @staticmethod
    def _require_nonzero(value, name: str, N: int, ctx: PrecisionContext) -> None:
        if value is None or is_small(value, 1, ctx):
            logger.error(f"dPV 在 N={N} 遇到零分母 {name}")
            raise SingularStep(f"dPV 在 N={N} 遇到零分母 {name}", denominator=name)
