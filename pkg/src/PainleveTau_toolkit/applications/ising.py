# -*- coding: utf-8 -*-
"""
二維 Ising 模型的對角自旋相關 ⟨σ₀₀σ_NN⟩

低溫相 (k > 1) 權重參數 μ = 1/4、ω₁ = -1/4、ω₂ = i/2、t = 1/k²；高溫相 (0 < k < 1)
取 ω₂ = -i/2、t = k²。兩相共用同一組 2/1 與 1/2 遞迴，差別只在 x = 1/k² 或 x = k²。
高溫相的反射係數以 r_N k^{-2N}、r̄_N k^{2N} 的規範表示（與封閉式初始值一致），
相關函數的比值 1 - r_N r̄_N 與規範無關。
"""
import logging
from typing import Any, List, Literal, Optional, Tuple

import pandas as pd
from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict

from proj_util_pkg.common.errors import PhaseError, ZeroPivot
from proj_util_pkg.common.precision import PrecisionContext, is_small, precision_scope
from proj_util_pkg.special.special_functions import SpecialFunctions
from hypergeometric.series import PartitionHypergeometric
from toeplitz.determinants import ToeplitzOracle
from toeplitz.moments import MomentCalculator
from toeplitz.weight_params import WeightParams

logger = logging.getLogger(__name__)

Phase = Literal["low", "high"]

METHOD_ISING_RECURRENCE = "ising-recurrence"
METHOD_CLOSED_FORM = "closed-form"
METHOD_HYP = "hyp"
METHOD_BORODIN = "borodin"


class IsingRun(BaseModel):
    """對角相關 ⟨σ₀₀σ_NN⟩（N = 0 … N_max）與反射係數"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: Any
    phase: Phase
    correlations: List[Any]
    r_values: List[Any]
    rbar_values: List[Any]
    method: str = METHOD_ISING_RECURRENCE

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for n, corr in enumerate(self.correlations):
            row = {"N": n, "correlation": mp.nstr(mpc(corr).real, 30)}
            if n < len(self.r_values):
                row["r"] = mp.nstr(mpc(self.r_values[n]).real, 30)
                row["rbar"] = mp.nstr(mpc(self.rbar_values[n]).real, 30)
            row["method"] = self.method
            rows.append(row)
        return pd.DataFrame(rows)


class IsingApplications:
    """Ising 對角相關計算器"""

    @staticmethod
    def ising_params(k, phase: Phase) -> WeightParams:
        k = mpf(k)
        IsingApplications._check_phase(k, phase)
        half = mpf(1) / 2
        if phase == "low":
            return WeightParams(mu=half / 2, omega1=-half / 2, omega2=mpc(0, half), t=1 / k ** 2)
        return WeightParams(mu=half / 2, omega1=-half / 2, omega2=mpc(0, -half), t=k ** 2)

    @staticmethod
    @precision_scope
    def initial_values(k, phase: Phase, ctx: Optional[PrecisionContext] = None) -> Tuple[mpc, mpc, mpc]:
        """
        (⟨σ₀₀σ₁₁⟩, r_1, r̄_1) 的橢圓積分封閉式

        低溫：r_1 = (2-k²)/3 + (k²-1)/3·K(1/k)/E(1/k)，r̄_1 = -1 + (k²-1)/k²·K(1/k)/E(1/k)，
        ⟨σ₀₀σ₁₁⟩ = (2/π)E(1/k)；k = 1 時 r_1 = 1/3、r̄_1 = -1。
        高溫：D = (k²-1)K(k) + E(k)，r_1 = (2/k² - E(k)/D)/3，r̄_1 = -k²E(k)/D。
        """
        k = mpf(k)
        IsingApplications._check_phase(k, phase)
        sf = SpecialFunctions
        if phase == "low":
            modulus = 1 / k
            corr1 = 2 / mp.pi * sf.elliptic_E(modulus, ctx=ctx)
            if k == 1:
                return corr1, mpc(mpf(1) / 3), mpc(-1)
            ratio = sf.elliptic_K(modulus, ctx=ctx) / sf.elliptic_E(modulus, ctx=ctx)
            k2 = k ** 2
            return corr1, (2 - k2) / 3 + (k2 - 1) / 3 * ratio, -1 + (k2 - 1) / k2 * ratio

        K, E = sf.elliptic_K(k, ctx=ctx), sf.elliptic_E(k, ctx=ctx)
        D = (k ** 2 - 1) * K + E
        corr1 = MomentCalculator.moment_ising(0, k, "high", ctx=ctx)
        return corr1, (2 / k ** 2 - E / D) / 3, -k ** 2 * E / D

    @staticmethod
    @precision_scope
    def ising_diagonal(k, phase: Phase, N_max: int, ctx: Optional[PrecisionContext] = None,
                       fallback_to_oracle: bool = True) -> IsingRun:
        """
        以 2/1、1/2 遞迴計算 ⟨σ₀₀σ_NN⟩，N = 0 … N_max

        k = ∞（低溫）與 k = 0（高溫）回傳零溫與無限高溫的封閉式。

        Args:
            k: 溫度參數 k = sinh2K₁ sinh2K₂
            phase: "low"（k ≥ 1）或 "high"（0 < k < 1）
            N_max: 最大索引
            ctx: 精度設定
            fallback_to_oracle: 主元為零時改用行列式

        Returns:
            IsingRun

        Raises:
            PhaseError: k 與相位不符
            ZeroPivot: 主元為零且未開啟行列式備援
        """
        if N_max < 1:
            raise ValueError("N_max 必須 ≥ 1")
        if phase == "low" and mp.isinf(k):
            return IsingApplications.zero_temperature(N_max)
        if phase == "high" and k == 0:
            return IsingApplications.infinite_temperature(N_max)

        k = mpf(k)
        IsingApplications._check_phase(k, phase)
        x = 1 / k ** 2 if phase == "low" else k ** 2
        corr1, r1, rbar1 = IsingApplications.initial_values(k, phase, ctx=ctx)
        r = [mpc(1), mpc(r1)]
        rbar = [mpc(1), mpc(rbar1)]
        method = METHOD_ISING_RECURRENCE
        for N in range(1, N_max):
            r_prev = r[N - 1]
            rbar_prev = rbar[N - 1]
            try:
                r_next, rbar_next = IsingApplications.ising_step(x, N, r_prev, r[N], rbar_prev, rbar[N], ctx)
            except ZeroPivot:
                if not fallback_to_oracle:
                    raise
                logger.warning(f"Ising 遞迴在 N={N} 遇到零主元，其餘索引改用行列式")
                oracle = IsingApplications.ising_oracle(k, phase, N_max, ctx=ctx)
                r.extend(oracle.r_values[N + 1:])
                rbar.extend(oracle.rbar_values[N + 1:])
                method = f"{METHOD_ISING_RECURRENCE}+det-oracle"
                break
            r.append(r_next)
            rbar.append(rbar_next)

        correlations = [mpc(1), mpc(corr1)]
        for N in range(1, N_max):
            correlations.append(correlations[N] ** 2 / correlations[N - 1] * (1 - r[N] * rbar[N]))
        return IsingRun(k=k, phase=phase, correlations=correlations, r_values=r, rbar_values=rbar, method=method)

    @staticmethod
    def ising_step(x, N: int, r_prev, r_cur, rbar_prev, rbar_cur,
                   ctx: Optional[PrecisionContext] = None) -> Tuple[mpc, mpc]:
        """
        (r_{N+1}, r̄_{N+1})

        (2N+3)x(1-S)r_{N+1} + 2N[x+1-(2N-1)x r_N r̄_{N-1}]r_N + (2N-3)[(2N-1)S+1]r_{N-1} = 0
        (2N+1)(1-S)r̄_{N+1} + 2N[(2N-3)r̄_N r_{N-1}+x+1]r̄_N + (2N-1)x[1-(2N+1)S]r̄_{N-1} = 0
        其中 S = r_N r̄_N。

        Raises:
            ZeroPivot: x(1-S) = 0
        """
        ctx = ctx or PrecisionContext.from_settings()
        S = r_cur * rbar_cur
        if is_small(x * (1 - S), 1, ctx):
            logger.error(f"Ising 遞迴在 N={N} 的主元 x(1-r_N r̄_N) 為零")
            raise ZeroPivot(f"Ising 遞迴在 N={N} 的主元為零")
        r_next = -(
            2 * N * (x + 1 - (2 * N - 1) * x * r_cur * rbar_prev) * r_cur
            + (2 * N - 3) * ((2 * N - 1) * S + 1) * r_prev
        ) / ((2 * N + 3) * x * (1 - S))
        rbar_next = -(
            2 * N * ((2 * N - 3) * rbar_cur * r_prev + x + 1) * rbar_cur
            + (2 * N - 1) * x * (1 - (2 * N + 1) * S) * rbar_prev
        ) / ((2 * N + 1) * (1 - S))
        return r_next, rbar_next

    @staticmethod
    @precision_scope
    def ising_oracle(k, phase: Phase, N_max: int, ctx: Optional[PrecisionContext] = None) -> IsingRun:
        """以 Toeplitz 行列式計算相關函數與反射係數（高溫相換成遞迴所用的規範）"""
        k = mpf(k)
        IsingApplications._check_phase(k, phase)
        table = MomentCalculator.build_table(f"ising-{phase}", range(-N_max, N_max + 1),
                                             IsingApplications.ising_params(k, phase), ctx=ctx, k=k)
        correlations = ToeplitzOracle.determinant_sequence(table, N_max, ctx=ctx)
        pairs = ToeplitzOracle.reflection_sequence(table, N_max, ctx=ctx)
        if phase == "high":
            pairs = [(r * k ** (-2 * N), rbar * k ** (2 * N)) for N, (r, rbar) in enumerate(pairs)]
        return IsingRun(k=k, phase=phase, correlations=correlations, r_values=[p[0] for p in pairs],
                        rbar_values=[p[1] for p in pairs], method="det-oracle")

    @staticmethod
    @precision_scope
    def ising_via_hyp(k, phase: Phase, N: int, ctx: Optional[PrecisionContext] = None,
                      tolerance=None) -> Tuple[mpc, mpc, mpc]:
        """
        以 2F1^(1) 計算 (⟨σ₀₀σ_NN⟩, r_N, r̄_N)

        低溫 (t = 1/k²)：
            ⟨σσ⟩ = F(-1/2,1/2;N)，r_N = (-1)^N (-1/2)_N/N!·F(-1/2,3/2;N+1)/F(-1/2,1/2;N)，
            r̄_N = (-1)^N (N-1)!/(1/2)_N · lim ε·F(-1/2,-1/2;N-1+ε) / F(-1/2,1/2;N)
        高溫 (t = k²)：
            ⟨σσ⟩ = (2N-1)!!/(2^N N!)·k^N·F(1/2,1/2;N+1)，
            r_N = (-1)^N (-1/2)_N/(N+1)!·F(1/2,3/2;N+2)/F(1/2,1/2;N+1)，
            r̄_N = (-1)^N N!/(1/2)_N·F(1/2,-1/2;N)/F(1/2,1/2;N+1)

        Raises:
            PhaseError: k 與相位不符
            ConvergenceError: 級數在權重上限內未收斂
        """
        k = mpf(k)
        IsingApplications._check_phase(k, phase)
        if N < 1:
            raise ValueError("ising_via_hyp 需要 N ≥ 1")
        half = mpf(1) / 2
        sign = (-1) ** N
        poch = SpecialFunctions.pochhammer

        def hyp(a, b, c, t) -> mpc:
            value, _ = PartitionHypergeometric.hyp_2f1(a, b, c, t, N, ctx=ctx, tolerance=tolerance)
            return value

        if phase == "low":
            t = 1 / k ** 2
            base = hyp(-half, half, N, t)
            r = sign * poch(-half, N, ctx=ctx) / mp.factorial(N) * hyp(-half, 3 * half, N + 1, t) / base
            limit = PartitionHypergeometric.ising_limit_eval(N, t, ctx=ctx, tolerance=tolerance)
            rbar = sign * mp.factorial(N - 1) / poch(half, N, ctx=ctx) * limit / base
            return base, r, rbar

        t = k ** 2
        base = hyp(half, half, N + 1, t)
        correlation = mp.fac2(2 * N - 1) / (2 ** N * mp.factorial(N)) * k ** N * base
        r = sign * poch(-half, N, ctx=ctx) / mp.factorial(N + 1) * hyp(half, 3 * half, N + 2, t) / base
        rbar = sign * mp.factorial(N) / poch(half, N, ctx=ctx) * hyp(half, -half, N, t) / base
        return correlation, r, rbar

    @staticmethod
    @precision_scope
    def borodin_correlation(k, N: int, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        低溫相的另一個 Toeplitz 表示：⟨σ₀₀σ_NN⟩ = (1-k⁻²)^{1/4} q_N^{(-1/2, 1/2, 1/k²)}

        q_N 的前置因子 (1-ξ)^{zz'} 與 (1-k⁻²)^{1/4} 相消，故等於 det[g_{i-j}]。
        """
        k = mpf(k)
        IsingApplications._check_phase(k, "low")
        half = mpf(1) / 2
        table = MomentCalculator.build_table("borodin", range(-N, N + 1), ctx=ctx, z=-half, z_prime=half,
                                             x=1 / k ** 2)
        return ToeplitzOracle.toeplitz_det(0, N, table, ctx=ctx)

    @staticmethod
    def long_range_order(k, phase: Phase) -> mpf:
        """lim_{N→∞}⟨σ₀₀σ_NN⟩：低溫 (1-k⁻²)^{1/4}，高溫 0"""
        if phase == "high":
            return mpf(0)
        k = mpf(k)
        if mp.isinf(k):
            return mpf(1)
        return (1 - 1 / k ** 2) ** (mpf(1) / 4)

    @staticmethod
    def critical_point(N_max: int) -> IsingRun:
        """k = 1：r_N = (-1)^{N-1}/((2N+1)(2N-1))，r̄_N = (-1)^N，⟨σσ⟩ = ∏ Γ²(j)/(Γ(j+1/2)Γ(j-1/2))"""
        half = mpf(1) / 2
        r = [mpc(1)] + [mpc((-1) ** (N - 1) / mpf((2 * N + 1) * (2 * N - 1))) for N in range(1, N_max + 1)]
        rbar = [mpc((-1) ** N) for N in range(N_max + 1)]
        correlations = [mpc(1)]
        for j in range(1, N_max + 1):
            correlations.append(correlations[-1] * mp.gamma(j) ** 2 / (mp.gamma(j + half) * mp.gamma(j - half)))
        return IsingRun(k=mpf(1), phase="low", correlations=correlations, r_values=r, rbar_values=rbar,
                        method=METHOD_CLOSED_FORM)

    @staticmethod
    def critical_l_values(N_max: int) -> List[mpc]:
        """k = 1 的 l_N/κ_N = N/(2N+1)"""
        return [mpc(mpf(N) / (2 * N + 1)) for N in range(N_max + 1)]

    @staticmethod
    def zero_temperature(N_max: int) -> IsingRun:
        """k = ∞：r_N = (-1)^N(-1/2)_N/N!，r̄_N = 0 (N ≥ 1)，⟨σσ⟩ = 1"""
        half = mpf(1) / 2
        r = [mpc((-1) ** N * mp.rf(-half, N) / mp.factorial(N)) for N in range(N_max + 1)]
        rbar = [mpc(1)] + [mpc(0)] * N_max
        return IsingRun(k=mp.inf, phase="low", correlations=[mpc(1)] * (N_max + 1), r_values=r, rbar_values=rbar,
                        method=METHOD_CLOSED_FORM)

    @staticmethod
    def infinite_temperature(N_max: int) -> IsingRun:
        """k = 0：r_N = (-1)^N(-1/2)_N/(N+1)!，r̄_N = (-1)^N N!/(1/2)_N，⟨σσ⟩ = 0 (N ≥ 1)"""
        half = mpf(1) / 2
        r = [mpc((-1) ** N * mp.rf(-half, N) / mp.factorial(N + 1)) for N in range(N_max + 1)]
        rbar = [mpc((-1) ** N * mp.factorial(N) / mp.rf(half, N)) for N in range(N_max + 1)]
        return IsingRun(k=mpf(0), phase="high", correlations=[mpc(1)] + [mpc(0)] * N_max, r_values=r,
                        rbar_values=rbar, method=METHOD_CLOSED_FORM)

    @staticmethod
    def _check_phase(k: mpf, phase: str) -> None:
        if phase not in ("low", "high"):
            raise ValueError(f"未知的相位: {phase}")
        if phase == "low" and k < 1:
            logger.error(f"低溫相需要 k ≥ 1，收到 k={mp.nstr(k, 10)}")
            raise PhaseError(f"低溫相需要 k ≥ 1 (k={mp.nstr(k, 10)})")
        if phase == "high" and not 0 < k < 1:
            logger.error(f"高溫相需要 0 < k < 1，收到 k={mp.nstr(k, 10)}")
            raise PhaseError(f"高溫相需要 0 < k < 1 (k={mp.nstr(k, 10)})")
