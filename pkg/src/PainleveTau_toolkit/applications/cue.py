# -*- coding: utf-8 -*-
"""
CUE 應用：特徵多項式絕對值動差與弧上特徵值個數的生成函數

動差 F_N = ⟨|det(u + U)|^{2μ}⟩ 對應權重參數 (μ/2, ω₁ = μ/2, ω₂ = 0, t = |u|²)，
其反射係數滿足 r̄_N = |u|^{2N} r_N，因此只需推進 r_N。
間隙生成函數 E_N(ξ; φ) 對應 μ = ω = 0、t = e^{iφ}，以實數變數 x_N = e^{iNφ/2} r_N 推進。
"""
import logging
from typing import Any, List, Optional

import pandas as pd
from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict

from proj_util_pkg.common.errors import DivisionByZero, PreconditionError, ZeroPivot
from proj_util_pkg.common.precision import PrecisionContext, as_complex, is_small, precision_scope
from proj_util_pkg.special.special_functions import SpecialFunctions
from recurrences.reflection_state import ResidualReport, normalized_residual
from toeplitz.determinants import ToeplitzOracle
from toeplitz.moments import MomentCalculator, MomentTable
from toeplitz.weight_params import WeightParams

logger = logging.getLogger(__name__)

METHOD_CUE_RECURRENCE = "cue-recurrence"
METHOD_GAMMA_PRODUCT = "gamma-product"


class CueMomentRun(BaseModel):
    """特徵多項式動差序列 F_0 … F_N"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mu: Any
    u: Any
    F_values: List[Any]
    r_values: List[Any] = []
    method: str = METHOD_CUE_RECURRENCE
    reduced: bool = False

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for n, value in enumerate(self.F_values):
            row = {"N": n, "re_F": mp.nstr(mpc(value).real, 30), "im_F": mp.nstr(mpc(value).imag, 30)}
            if n < len(self.r_values):
                row["re_r"] = mp.nstr(mpc(self.r_values[n]).real, 30)
                row["im_r"] = mp.nstr(mpc(self.r_values[n]).imag, 30)
            row["method"] = self.method
            rows.append(row)
        return pd.DataFrame(rows)


class CueGapRun(BaseModel):
    """間隙生成函數序列 E_0 … E_N 與 x_0 … x_N"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    xi: Any
    phi: Any
    E_values: List[Any]
    x_values: List[Any]
    quadratic_residual: Any = mpf(0)
    method: str = METHOD_CUE_RECURRENCE

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([
            {
                "N": n,
                "re_E": mp.nstr(mpc(E).real, 30),
                "im_E": mp.nstr(mpc(E).imag, 30),
                "re_x": mp.nstr(mpc(x).real, 30),
                "im_x": mp.nstr(mpc(x).imag, 30),
                "method": self.method,
            }
            for n, (E, x) in enumerate(zip(self.E_values, self.x_values))
        ])


class CueApplications:
    """CUE 動差與間隙機率的遞迴計算器"""

    @staticmethod
    def charpoly_params(mu, u) -> WeightParams:
        """|det(u+U)|^{2μ} 對應的一般權重參數"""
        mu = as_complex(mu)
        return WeightParams(mu=mu / 2, omega1=mu / 2, omega2=0, t=abs(as_complex(u)) ** 2)

    @staticmethod
    @precision_scope
    def gamma_product(mu, N: int, ctx: Optional[PrecisionContext] = None) -> mpc:
        """|u| = 1：∏_{j=0}^{N-1} j!Γ(j+1+2μ)/Γ²(j+1+μ)"""
        mu = as_complex(mu)
        sf = SpecialFunctions
        result = mpc(1)
        for j in range(N):
            result *= mp.factorial(j) * sf.gamma(j + 1 + 2 * mu, ctx=ctx) * sf.rgamma(j + 1 + mu, ctx=ctx) ** 2
        return result

    @staticmethod
    @precision_scope
    def cue_moment_sequence(mu, u, N_max: int, ctx: Optional[PrecisionContext] = None,
                            fallback_to_oracle: bool = True) -> CueMomentRun:
        """
        F_N = ⟨|det(u+U)|^{2μ}⟩_{U(N)}，N = 0 … N_max

        F_{N+1}F_{N-1}/F_N² = 1 - |u|^{2N} r_N²，r_N 以三階擬線性遞迴推進。
        |u| = 1 直接回傳 Gamma 乘積；|u| > 1 以 F_N(u) = |u|^{2μN} F_N(1/u) 化回 |u| < 1；
        u = 0 時 F_N = 1，r_N 以行列式計算。

        Args:
            mu: 指數參數，Re(μ) > -1/2
            u: 複數
            N_max: 最大秩
            ctx: 精度設定
            fallback_to_oracle: r_N 中途為零時改用行列式

        Returns:
            CueMomentRun

        Raises:
            PreconditionError: Re(μ) ≤ -1/2
            ZeroPivot: 遞迴主元為零且未開啟行列式備援
        """
        mu, u = as_complex(mu), as_complex(u)
        if mu.real <= -mpf(1) / 2:
            logger.error(f"CUE 動差需要 Re(μ) > -1/2，收到 μ={mp.nstr(mu, 10)}")
            raise PreconditionError("CUE 動差需要 Re(μ) > -1/2")
        if N_max < 1:
            raise ValueError("N_max 必須 ≥ 1")

        modulus = abs(u)
        if abs(modulus - 1) <= ctx.tol:
            logger.info("|u| = 1，直接使用 Gamma 乘積")
            return CueMomentRun(mu=mu, u=u, method=METHOD_GAMMA_PRODUCT,
                                F_values=[CueApplications.gamma_product(mu, N, ctx=ctx) for N in range(N_max + 1)])
        if modulus > 1:
            inner = CueApplications.cue_moment_sequence(mu, 1 / u, N_max, ctx=ctx,
                                                        fallback_to_oracle=fallback_to_oracle)
            scale = modulus ** (2 * mu)
            return inner.model_copy(update={
                "u": u,
                "F_values": [scale ** N * F for N, F in enumerate(inner.F_values)],
                "reduced": True,
            })

        t = modulus ** 2
        table = MomentCalculator.build_table("cue-charpoly", range(-N_max, N_max + 1),
                                             CueApplications.charpoly_params(mu, u), ctx=ctx, mu=mu, u=u)
        if t == 0:
            pairs = ToeplitzOracle.reflection_sequence(table, N_max, ctx=ctx)
            return CueMomentRun(mu=mu, u=u, F_values=[mpc(1)] * (N_max + 1), r_values=[p[0] for p in pairs])

        sf = SpecialFunctions
        F1 = sf.gauss_2f1(-mu, -mu, 1, t, ctx=ctx)
        r = [mpc(0), mpc(1), -mu * sf.gauss_2f1(-mu, 1 - mu, 2, t, ctx=ctx) / F1]  # r_{-1}, r_0, r_1
        method = METHOD_CUE_RECURRENCE
        for N in range(1, N_max):
            try:
                r.append(CueApplications._charpoly_step(mu, t, N, r[N - 1], r[N], r[N + 1], ctx))
            except ZeroPivot:
                if not fallback_to_oracle:
                    raise
                logger.warning(f"CUE 動差遞迴在 N={N} 遇到零主元，其餘索引改用行列式")
                for M in range(N + 1, N_max + 1):
                    r.append(ToeplitzOracle.reflection_from_dets(M, table, ctx=ctx)[0])
                method = f"{METHOD_CUE_RECURRENCE}+det-oracle"
                break
        r_values = r[1:]

        F = [mpc(1), mpc(F1)]
        for N in range(1, N_max):
            F.append(F[N] ** 2 / F[N - 1] * (1 - t ** N * r_values[N] ** 2))
        return CueMomentRun(mu=mu, u=u, F_values=F, r_values=r_values, method=method)

    @staticmethod
    @precision_scope
    def charpoly_reflection_residual(mu, u, N_max: int, ctx: Optional[PrecisionContext] = None) -> ResidualReport:
        """以行列式驗證 r̄_N = |u|^{2N} r_N（N ≤ N_max）"""
        params = CueApplications.charpoly_params(mu, u)
        table = MomentCalculator.build_table("cue-charpoly", range(-N_max, N_max + 1), params, ctx=ctx, mu=mu, u=u)
        t = mpc(params.t)
        worst = mpf(0)
        for N, (r, rbar) in enumerate(ToeplitzOracle.reflection_sequence(table, N_max, ctx=ctx)):
            worst = max(worst, normalized_residual(rbar, -t ** N * r))
        return ResidualReport(label="cue-charpoly-structure", residuals={"t_power_relation": worst})

    @staticmethod
    @precision_scope
    def cue_gap_sequence(xi, phi, N_max: int, ctx: Optional[PrecisionContext] = None,
                         fallback_to_oracle: bool = True) -> CueGapRun:
        """
        E_N((π-φ, π); ξ)，N = 0 … N_max

        x_N 以三階擬線性遞迴推進；二階二次關係只作為殘差檢查。

        Args:
            xi: 生成函數參數 ξ
            phi: 弧長 φ ∈ (0, 2π)
            N_max: 最大秩
            ctx: 精度設定
            fallback_to_oracle: 主元為零時改用行列式

        Returns:
            CueGapRun（quadratic_residual 為二次關係的最大殘差）

        Raises:
            PreconditionError: φ 不在 (0, 2π) 或 1 - ξφ/2π = 0
            ZeroPivot: 主元為零且未開啟行列式備援
        """
        xi = as_complex(xi)
        phi = mpf(phi)
        if not 0 < phi < 2 * mp.pi or is_small(phi, 1, ctx) or is_small(2 * mp.pi - phi, 1, ctx):
            logger.error(f"φ={mp.nstr(phi, 10)} 不在 (0, 2π)")
            raise PreconditionError("間隙機率需要 φ ∈ (0, 2π)")
        E1 = 1 - xi * phi / (2 * mp.pi)
        if is_small(E1, 1, ctx):
            logger.error("1 - ξφ/2π = 0，x_1 無定義")
            raise PreconditionError("1 - ξφ/2π 不可為零")
        if N_max < 1:
            raise ValueError("N_max 必須 ≥ 1")

        if xi == 0:
            return CueGapRun(xi=xi, phi=phi, E_values=[mpc(1)] * (N_max + 1),
                             x_values=[mpc(1)] + [mpc(0)] * N_max)

        half_cos = mp.cos(phi / 2)
        x = [mpc(0), mpc(1), -xi / mp.pi * mp.sin(phi / 2) / E1]  # x_{-1}, x_0, x_1
        method = METHOD_CUE_RECURRENCE
        for N in range(1, N_max):
            try:
                x.append(CueApplications._gap_step(N, x[N - 1], x[N], x[N + 1], half_cos, ctx))
            except ZeroPivot:
                if not fallback_to_oracle:
                    raise
                logger.warning(f"CUE 間隙遞迴在 N={N} 遇到零主元，其餘索引改用行列式")
                table = MomentCalculator.build_table("cue-gap", range(-N_max, N_max + 1), ctx=ctx, xi=xi, phi=phi)
                for M in range(N + 1, N_max + 1):
                    r_M, _ = ToeplitzOracle.reflection_from_dets(M, table, ctx=ctx)
                    x.append(mp.expj(M * phi / 2) * r_M)
                method = f"{METHOD_CUE_RECURRENCE}+det-oracle"
                break
        x_values = x[1:]

        E = [mpc(1), E1]
        for N in range(1, N_max):
            E.append(E[N] ** 2 / E[N - 1] * (1 - x_values[N] ** 2))

        worst = mpf(0)
        for N in range(1, N_max):
            worst = max(worst, CueApplications.gap_quadratic_residual(
                N, x_values[N - 1], x_values[N], x_values[N + 1], half_cos))
        return CueGapRun(xi=xi, phi=phi, E_values=E, x_values=x_values, quadratic_residual=worst, method=method)

    @staticmethod
    def gap_quadratic_residual(N: int, x_prev, x, x_next, half_cos) -> mpf:
        """
        二階二次關係的正規化殘差

        (1-x²)²[(N+1)²x₊² + (N-1)²x₋²] + 2(N²-1)(1-x⁴)x₊x₋
          + 4N cos(φ/2) x(1-x²)[(N+1)x₊ + (N-1)x₋] + 4N²x²[cos²(φ/2) - x²] = 0
        """
        K = 1 - x ** 2
        return normalized_residual(
            K ** 2 * (N + 1) ** 2 * x_next ** 2,
            K ** 2 * (N - 1) ** 2 * x_prev ** 2,
            2 * (N ** 2 - 1) * (1 - x ** 4) * x_next * x_prev,
            4 * N * half_cos * x * K * ((N + 1) * x_next + (N - 1) * x_prev),
            4 * N ** 2 * x ** 2 * (half_cos ** 2 - x ** 2),
        )

    @staticmethod
    @precision_scope
    def gap_oracle(xi, phi, N_max: int, ctx: Optional[PrecisionContext] = None) -> List[mpc]:
        """行列式計算的 E_0 … E_{N_max}"""
        table = MomentCalculator.build_table("cue-gap", range(-N_max, N_max + 1), ctx=ctx, xi=xi, phi=phi)
        return ToeplitzOracle.determinant_sequence(table, N_max, ctx=ctx)

    @staticmethod
    @precision_scope
    def moment_oracle(mu, u, N_max: int, ctx: Optional[PrecisionContext] = None) -> List[mpc]:
        """行列式計算的 F_0 … F_{N_max}（|u| ≤ 1）"""
        table: MomentTable = MomentCalculator.build_table(
            "cue-charpoly", range(-N_max, N_max + 1), CueApplications.charpoly_params(mu, u), ctx=ctx, mu=mu, u=u)
        return ToeplitzOracle.determinant_sequence(table, N_max, ctx=ctx)

    @staticmethod
    def _charpoly_step(mu, t, N: int, r_prev2, r_prev, r_cur, ctx: PrecisionContext) -> mpc:
        K = 1 - t ** N * r_cur ** 2
        K_prev = 1 - t ** (N - 1) * r_prev ** 2
        pivot = (N + 1 + mu) * t
        if r_cur == 0 or is_small(K, 1, ctx) or is_small(pivot, 1, ctx) or (K_prev != 0 and r_prev == 0):
            logger.error(f"CUE 動差遞迴在 N={N} 的主元為零")
            raise ZeroPivot(f"CUE 動差遞迴在 N={N} 的主元為零")
        back = mpc(0)
        if K_prev != 0:
            back = K_prev / r_prev * ((N + mu) * t * r_cur + (N - 2 + mu) * r_prev2)
        lhs = 2 * t ** N * r_cur * r_prev - t - 1
        return ((lhs + back) * r_cur / K - (N - 1 + mu) * r_prev) / pivot

    @staticmethod
    def _gap_step(N: int, x_prev2, x_prev, x_cur, half_cos, ctx: PrecisionContext) -> mpc:
        K = 1 - x_cur ** 2
        K_prev = 1 - x_prev ** 2
        if x_cur == 0 or is_small(K, 1, ctx) or (K_prev != 0 and x_prev == 0):
            logger.error(f"CUE 間隙遞迴在 N={N} 的主元為零")
            raise ZeroPivot(f"CUE 間隙遞迴在 N={N} 的主元為零")
        back = mpc(0)
        if K_prev != 0:
            back = K_prev / x_prev * (N * x_cur + (N - 2) * x_prev2)
        return ((2 * x_cur * x_prev - 2 * half_cos + back) * x_cur / K - (N - 1) * x_prev) / (N + 1)
