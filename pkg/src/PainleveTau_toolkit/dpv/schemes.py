# -*- coding: utf-8 -*-
"""
τ 序列的 dPV 遞迴方案

L01 與 L14 兩種移位算子各給出一組 (g_N, f_N) 遞迴，再由重建的 (q_N, p_N) 推進
T_{N+1} = -T_N²/T_{N-1} · Q_N / ((N+μ+ω)(N+μ+ω̄))。
兩個方案所用的 PVI 時間各自獨立指定，不在內部互相換算。
"""
import json
import logging
from typing import Any, Dict, List, Optional, Tuple

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict

from proj_util_pkg.common.errors import DisagreementError, DivisionByZero, SingularStep
from proj_util_pkg.common.precision import PrecisionContext, is_small, precision_scope, relative_error
from proj_util_pkg.special.special_functions import SpecialFunctions
from dpv.hamiltonian import HamiltonianMaps
from recurrences.engine import p_coef, pb_coef
from recurrences.reflection_state import ReflectionSequence, ResidualReport
from toeplitz.determinants import ToeplitzOracle
from toeplitz.moments import MomentCalculator, MomentTable
from toeplitz.weight_params import WeightParams

logger = logging.getLogger(__name__)

SCHEME_L01 = "dpv-l01"
SCHEME_L14 = "dpv-l14"

# 各方案可選的 PVI 時間（s = e^{iφ} 為權重的 t）
TIME_CONVENTIONS = {
    SCHEME_L01: ("pvi", "weight"),
    SCHEME_L14: ("weight", "inverse"),
}


def pvi_time(convention: str, s) -> mpc:
    """
    權重的 t = s 換算為方案使用的 PVI 時間

    pvi: 1/(1-s)；weight: s；inverse: 1/s
    """
    s = mpc(s)
    if convention == "pvi":
        if s == 1:
            raise DivisionByZero("s = 1 時 1/(1-s) 無定義")
        return 1 / (1 - s)
    if convention == "weight":
        return s
    if convention == "inverse":
        return 1 / s
    raise ValueError(f"未知的時間慣例: {convention!r}")


class SchemeRow(BaseModel):
    """方案在索引 N 的變數"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    N: int
    f: Any
    g: Any
    q: Any
    p: Any
    T: Any
    residual: Optional[Any] = None


class SchemeTrace(BaseModel):
    """方案的完整軌跡"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    scheme: str
    convention: str
    time: Any
    rows: List[SchemeRow]

    @property
    def T(self) -> List[mpc]:
        return [row.T for row in self.rows]

    def to_jsonl(self) -> str:
        """每行一個 {N, f, g, q, p, T} 的 JSON 物件"""
        lines = []
        for row in self.rows:
            lines.append(json.dumps({
                "N": row.N,
                **{name: None if getattr(row, name) is None else mp.nstr(mpc(getattr(row, name)), 25)
                   for name in ("f", "g", "q", "p", "T")},
                "residual": None if row.residual is None else float(row.residual),
            }, ensure_ascii=False))
        return "\n".join(lines)


class TauSchemes:
    """L01 / L14 τ 遞迴方案"""

    @staticmethod
    @precision_scope
    def initial_data(params: WeightParams, ctx: Optional[PrecisionContext] = None) -> Tuple[mpc, mpc, mpc]:
        """
        (T_0, T_1, dT_1/dφ)

        ξ = 0 時 e^{iμφ}T_1 = R(t) 為 ₂F₁ 的正規化形式，dT_1/dφ 由 R'(t) 解析求得；
        ξ ≠ 0 時對 φ 做中央差分（以兩倍位數的設定呼叫，誤差約 10^(-digits)）。
        """
        T1 = MomentCalculator.moment_general(0, params, ctx=ctx)
        if params.xi == 0:
            D = TauSchemes._log_derivative_regular(params, ctx)
        else:
            D = TauSchemes.log_derivative_numeric(params, ctx=ctx.escalated())
        return mpc(1), T1, T1 * (D - mpc(0, 1) * params.mu)

    @staticmethod
    @precision_scope
    def log_derivative_numeric(params: WeightParams, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        d/dφ log(e^{iμφ} T_1(e^{iφ})) 的中央差分，供解析值交叉檢查

        步長 h = 10^(-digits/2)，函數值以兩倍精度計算，截斷誤差約 10^(-digits)。
        """
        angle = params.angle
        if angle is None:
            angle = -mpc(0, 1) * mp.log(mpc(params.t))
        fine = ctx.escalated()

        def log_regular(phi):
            shifted = WeightParams(mu=params.mu, omega1=params.omega1, omega2=params.omega2,
                                   xi=params.xi, t=mp.exp(mpc(0, 1) * phi), phi=phi if params.xi != 0 else None)
            value = MomentCalculator.moment_general(0, shifted, ctx=fine)
            return mp.log(value) + mpc(0, 1) * params.mu * phi

        with mp.workdps(fine.decimal_digits):
            h = mpf(10) ** (-(ctx.decimal_digits // 2))
            return mpc((log_regular(angle + h) - log_regular(angle - h)) / (2 * h))

    @staticmethod
    @precision_scope
    def l01_scheme(T0, T1, dT1_dphi, params: WeightParams, N_max: int, ctx: Optional[PrecisionContext] = None,
                   convention: str = "pvi") -> SchemeTrace:
        """
        L01 方案

        q₀ = (1 + (i/μ) d/dφ log T_1)/2 = 1 + iD/(2μ)，D = d/dφ log(e^{iμφ}T_1)；
        此 q₀ 解 p₀ = 0 時 PVI 時間 τ = 1/(1-s) 的 Riccati 方程。g₀ = q₀/(q₀-1)，f₀ 為 p₀ = 0 時的
        輔助變數。遞迴：
            g_{N+1}g_N = τ/(τ-1)·(f_N+N+1)(f_N+N+1+μ+ω̄)/(f_N(f_N-μ-ω))
            f_N + f_{N-1} = μ+ω + (N+2μ)/(g_N-1) + (N+1+2ω₁)τ/(τ(g_N-1)-g_N)
        其中 τ 為 convention 指定的 PVI 時間。

        Args:
            T0, T1: T_0 = 1、T_1 = w_0
            dT1_dphi: dT_1/dφ
            params: 權重參數（s = params.t = e^{iφ}）
            N_max: 最大索引
            ctx: 精度設定
            convention: PVI 時間慣例，"pvi"（1/(1-s)）或 "weight"（s）

        Returns:
            SchemeTrace（T_0 … T_{N_max}）

        Raises:
            DivisionByZero: μ = 0 或 T_1 = 0
            SingularStep: 遞迴遇到零分母
        """
        mu, omega, omega_bar, omega1 = params.mu, params.omega, params.omega_bar, params.omega1
        tau = pvi_time(convention, params.t)
        D = TauSchemes._log_derivative(T1, dT1_dphi, mu)
        if mu == 0:
            logger.error("μ = 0 時 q₀ 的公式無定義")
            raise DivisionByZero("μ = 0 時 L01 方案的 q₀ 無定義")
        q0 = 1 + mpc(0, 1) * D / (2 * mu)
        if is_small(q0 - 1, 1, ctx):
            raise DivisionByZero("q₀ = 1 時 g₀ 無定義")

        g = q0 / (q0 - 1)
        f = ((1 + mu + omega_bar) * (q0 - 1) + (mu + omega) * q0
             - (2 * omega1 + 1) * q0 * (q0 - 1) / (q0 - tau))
        rows = [SchemeRow(N=0, f=f, g=g, q=q0, p=mpc(0), T=mpc(T0))]
        T_prev, T_cur = mpc(T0), mpc(T1)
        for N in range(0, N_max):
            TauSchemes._require(f, "f_N", N, ctx)
            TauSchemes._require(f - mu - omega, "f_N-μ-ω", N, ctx)
            TauSchemes._require(g, "g_N", N, ctx)
            g_next = tau / (tau - 1) * (f + N + 1) * (f + N + 1 + mu + omega_bar) / (f * (f - mu - omega) * g)
            TauSchemes._require(g_next - 1, "g_{N+1}-1", N, ctx)
            TauSchemes._require(tau * (g_next - 1) - g_next, "τ(g_{N+1}-1)-g_{N+1}", N, ctx)
            f_next = (mu + omega + (N + 1 + 2 * mu) / (g_next - 1)
                      + (N + 2 + 2 * omega1) * tau / (tau * (g_next - 1) - g_next) - f)
            g, f = g_next, f_next
            M = N + 1
            q = g / (g - 1)
            p = ((g - 1) ** 2 * f / g - (M + 1 + mu + omega_bar) * (g - 1) / g - (mu + omega) * (g - 1)
                 + (M + 1 + 2 * omega1) * (g - 1) / (tau + (1 - tau) * g))
            rows.append(SchemeRow(N=M, f=f, g=g, q=q, p=p, T=T_cur))
            if M >= N_max:
                break
            rhs = q * (q - 1) * p ** 2 + (2 * mu + 2 * omega1) * q * p - (mu + omega_bar) * p - M * (M + 2 * mu + 2 * omega1)
            T_prev, T_cur = T_cur, TauSchemes._advance_tau(params, M, T_prev, T_cur, rhs)
        return SchemeTrace(scheme=SCHEME_L01, convention=convention, time=tau, rows=rows)

    @staticmethod
    @precision_scope
    def l14_scheme(T0, T1, dT1_dphi, params: WeightParams, N_max: int, ctx: Optional[PrecisionContext] = None,
                   convention: str = "weight") -> SchemeTrace:
        """
        L14 方案

        q₀ = (ω₁/μ)(-iD)/(μ+ω+iD)；g₀ = (q₀-t)/(q₀-1)，f₀ 為 p₀ = 0 時的 L14 輔助變數。
        遞迴：
            g_{N+1}g_N = t(f_N+N+1)(f_N+N+μ+ω)/(f_N(f_N-μ-ω̄))
            f_N + f_{N-1} = μ+ω̄ + (N+2μ)/(g_N-1) + (N+2ω₁)t/(g_N-t)

        Raises:
            DivisionByZero: μ = 0、μ+ω+iD = 0 或 t = 1
            SingularStep: 遞迴遇到零分母
        """
        mu, omega, omega_bar, omega1 = params.mu, params.omega, params.omega_bar, params.omega1
        tau = pvi_time(convention, params.t)
        if tau == 1:
            raise DivisionByZero("t = 1 時 L14 方案無定義")
        D = TauSchemes._log_derivative(T1, dT1_dphi, mu)
        i = mpc(0, 1)
        if mu == 0 or mu + omega + i * D == 0:
            logger.error("L14 方案的 q₀ 分母為零")
            raise DivisionByZero("L14 方案的 q₀ 無定義（μ = 0 或 μ+ω+iD = 0）")
        q0 = omega1 / mu * (-i * D) / (mu + omega + i * D)
        if q0 == 0 or q0 == 1:
            raise DivisionByZero("q₀ 落在 0 或 1")

        g = (q0 - tau) / (q0 - 1)
        f = ((mu + omega) * (q0 - 1) + (mu + omega_bar) * (q0 - tau)
             - 2 * omega1 * (q0 - tau) * (q0 - 1) / q0) / (1 - tau)
        rows = [SchemeRow(N=0, f=f, g=g, q=q0, p=mpc(0), T=mpc(T0))]
        T_prev, T_cur = mpc(T0), mpc(T1)
        for N in range(0, N_max):
            TauSchemes._require(f, "f_N", N, ctx)
            TauSchemes._require(f - mu - omega_bar, "f_N-μ-ω̄", N, ctx)
            TauSchemes._require(g, "g_N", N, ctx)
            g_next = tau * (f + N + 1) * (f + N + mu + omega) / (f * (f - mu - omega_bar) * g)
            TauSchemes._require(g_next - 1, "g_{N+1}-1", N, ctx)
            TauSchemes._require(g_next - tau, "g_{N+1}-t", N, ctx)
            f_next = (mu + omega_bar + (N + 1 + 2 * mu) / (g_next - 1)
                      + (N + 1 + 2 * omega1) * tau / (g_next - tau) - f)
            g, f = g_next, f_next
            M = N + 1
            q = (g - tau) / (g - 1)
            p = (g - 1) / ((1 - tau) * g) * (
                (g - 1) * f - (mu + omega_bar) * g + (M + 2 * omega1) * (1 - tau) * g / (g - tau) - M - mu - omega)
            rows.append(SchemeRow(N=M, f=f, g=g, q=q, p=p, T=T_cur))
            if M >= N_max:
                break
            rhs = (q * (q - 1) ** 2 * p ** 2 + ((2 * mu - M) * q + M + 2 * omega1) * (q - 1) * p
                   - 2 * mu * M * q - M * (M + 2 * omega1))
            T_prev, T_cur = T_cur, TauSchemes._advance_tau(params, M, T_prev, T_cur, rhs)
        return SchemeTrace(scheme=SCHEME_L14, convention=convention, time=tau, rows=rows)

    @staticmethod
    @precision_scope
    def run_scheme(scheme: str, params: WeightParams, N_max: int, ctx: Optional[PrecisionContext] = None,
                   convention: Optional[str] = None, table: Optional[MomentTable] = None) -> SchemeTrace:
        """
        以解析初始資料執行方案；convention 未指定時以行列式 I_2 決定

        Returns:
            SchemeTrace
        """
        if convention is None:
            convention = TauSchemes.resolve_convention(scheme, params, ctx=ctx, table=table)
        T0, T1, dT1 = TauSchemes.initial_data(params, ctx=ctx)
        runner = TauSchemes.l01_scheme if scheme == SCHEME_L01 else TauSchemes.l14_scheme
        return runner(T0, T1, dT1, params, N_max, ctx=ctx, convention=convention)

    @staticmethod
    @precision_scope
    def resolve_convention(scheme: str, params: WeightParams, ctx: Optional[PrecisionContext] = None,
                           table: Optional[MomentTable] = None) -> str:
        """
        依序嘗試各 PVI 時間慣例，選出 T_2 與行列式 I_2 = w_0² - w_1 w_{-1} 一致者

        Raises:
            DisagreementError: 沒有任何慣例與行列式一致
        """
        if table is None or not table.covers(-1, 1):
            table = MomentCalculator.build_table("general", (-1, 0, 1), params, ctx=ctx)
        target = ToeplitzOracle.toeplitz_det(0, 2, table, ctx=ctx)
        T0, T1, dT1 = TauSchemes.initial_data(params, ctx=ctx)
        runner = TauSchemes.l01_scheme if scheme == SCHEME_L01 else TauSchemes.l14_scheme
        errors: Dict[str, mpf] = {}
        for convention in TIME_CONVENTIONS[scheme]:
            try:
                trace = runner(T0, T1, dT1, params, 2, ctx=ctx, convention=convention)
            except (SingularStep, DivisionByZero) as exc:
                logger.info(f"{scheme} 慣例 {convention} 無法執行: {exc}")
                continue
            errors[convention] = relative_error(trace.T[2], target)
            if errors[convention] <= ctx.half_tol:
                logger.info(f"{scheme} 使用 PVI 時間慣例 {convention}（T_2 相對誤差 {mp.nstr(errors[convention], 5)}）")
                return convention
        worst = float(min(errors.values())) if errors else float("nan")
        logger.error(f"{scheme} 的所有時間慣例都與行列式不一致: { {k: mp.nstr(v, 5) for k, v in errors.items()} }")
        raise DisagreementError(f"{scheme} 的所有時間慣例都與行列式 I_2 不一致", worst=worst)

    @staticmethod
    @precision_scope
    def oracle_l01_closure(sequence: ReflectionSequence, convention: str = "pvi",
                           ctx: Optional[PrecisionContext] = None) -> ResidualReport:
        """
        以反射係數解出的 (q_N, p_N) 檢查 L01 型遞迴（與初始條件無關）

        需要 sequence.N_max ≥ 3；在 N = 1 … N_max-1 上取 (g, f) 並代入 L01 型 dPV。
        """
        params = sequence.params
        tau = pvi_time(convention, params.t)
        aux = []
        for N in range(1, sequence.N_max):
            ham = HamiltonianMaps.oracle_qp(sequence.window(N + 1), ctx=ctx, index=N)
            ham = ham.model_copy(update={"t": tau})
            aux.append((N, HamiltonianMaps.l01_aux(ham), ham.alphas))
        worst_g = worst_f = mpf(0)
        for (_, (g_prev, f_prev), _), (N, (g, f), alphas), (_, (g_next, _), _) in zip(aux, aux[1:], aux[2:]):
            first, second = HamiltonianMaps.l01_generic_residuals(g, g_next, f_prev, f, tau, alphas)
            worst_g, worst_f = max(worst_g, first), max(worst_f, second)
        return ResidualReport(label=f"l01-closure-{convention}", residuals={"g_recurrence": worst_g,
                                                                            "f_recurrence": worst_f})

    @staticmethod
    def compare_with(trace: SchemeTrace, reference: List[Any]) -> mpf:
        """方案 T_N 與參考序列的最大相對誤差"""
        return max((relative_error(a, b) for a, b in zip(trace.T, reference)), default=mpf(0))

    @staticmethod
    def annotate(trace: SchemeTrace, reference: List[Any]) -> SchemeTrace:
        """在每一列記錄 T_N 相對於參考序列的誤差"""
        rows = [row.model_copy(update={"residual": relative_error(row.T, ref)}) for row, ref in zip(trace.rows, reference)]
        return trace.model_copy(update={"rows": rows + trace.rows[len(rows):]})

    @staticmethod
    def _log_derivative(T1, dT1_dphi, mu) -> mpc:
        if T1 == 0:
            raise DivisionByZero("T_1 = 0")
        return mpc(0, 1) * mu + mpc(dT1_dphi) / mpc(T1)

    @staticmethod
    def _log_derivative_regular(params: WeightParams, ctx: PrecisionContext) -> mpc:
        """ξ = 0：D = i t R'(t)/R(t)，R(t) = Γ(2ω₁+1)/Γ(1+μ+ω)·₂F₁reg(a, b; c; t)"""
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        t = mpc(params.t)
        a, b, c = -2 * mu, -mu - omega, 1 - mu + omega_bar
        sf = SpecialFunctions
        value = sf.gauss_2f1_regularized(a, b, c, t, ctx=ctx)
        if value == 0:
            raise DivisionByZero("T_1 = 0")
        slope = a * b * sf.gauss_2f1_regularized(a + 1, b + 1, c + 1, t, ctx=ctx)
        return mpc(0, 1) * t * slope / value

    @staticmethod
    def _advance_tau(params: WeightParams, N: int, T_prev, T_cur, rhs) -> mpc:
        denominator = p_coef(params, N) * pb_coef(params, N) * T_prev
        if denominator == 0:
            raise DivisionByZero(f"T_{N - 1} 或 (N+μ+ω)(N+μ+ω̄) 為零")
        return -T_cur ** 2 * rhs / denominator

    @staticmethod
    def _require(value, name: str, N: int, ctx: PrecisionContext) -> None:
        if is_small(value, 1, ctx):
            logger.error(f"方案在 N={N} 遇到零分母 {name}")
            raise SingularStep(f"方案在 N={N} 遇到零分母 {name}", denominator=name)
