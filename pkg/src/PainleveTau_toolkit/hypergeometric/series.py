# -*- coding: utf-8 -*-
"""
多變數超幾何函數 2F1^(1)(a,b;c;t,…,t)

分拆加總依權重 |κ| 分殼：
    Σ_κ [a]_κ [b]_κ / [c]_κ · s_κ(t,…,t) / h_κ
連續三個殼的絕對值都小於 tolerance·|部分和| 時視為收斂。a 或 b 為非正整數 -m 時，
[·]_κ 在 κ₁ > m 時為 0，級數在權重 m·N 截斷。

不截斷的級數在 |t| 接近 1 時需要的殼數太多，改用 N×N 的 Gauss 函數行列式（見 hyp_2f1_determinant）。
"""
import logging
from typing import Callable, Dict, List, Optional, Tuple

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict

from proj_util_pkg.common.errors import ConvergenceError, DegenerateParameter, PoleError, PreconditionError
from proj_util_pkg.common.precision import PrecisionContext, precision_scope
from proj_util_pkg.special.special_functions import SpecialFunctions, nonpositive_integer
from hypergeometric.partitions import Partition, PartitionTools
from toeplitz.weight_params import WeightParams

logger = logging.getLogger(__name__)

# 判定收斂所需的連續小殼數
SMALL_SHELLS = 3

METHOD_AUTO = "auto"
METHOD_PARTITION = "partition"
METHOD_DETERMINANT = "determinant"


class SeriesDiagnostics(BaseModel):
    """級數加總診斷資訊"""

    model_config = ConfigDict(frozen=True)

    max_weight_used: int
    tail_estimate: float
    converged: bool
    terms: int = 0
    terminating: bool = False
    method: str = METHOD_PARTITION


class _PochhammerRows:
    """(a - j + 1)_k 的查表，j = 1 … N、k = 0 … max_part"""

    def __init__(self, a: mpc, N: int, max_part: int):
        self.rows: List[List[mpc]] = []
        for j in range(1, N + 1):
            base = a - j + 1
            row = [mpc(1)]
            for k in range(max_part):
                row.append(row[-1] * (base + k))
            self.rows.append(row)

    def value(self, kappa: Partition) -> mpc:
        result = mpc(1)
        for j, part in enumerate(kappa.parts):
            result *= self.rows[j][part]
        return result


class PartitionHypergeometric:
    """分拆超幾何級數計算器"""

    @staticmethod
    @precision_scope
    def hyp_2f1(a, b, c, t, N: int, ctx: Optional[PrecisionContext] = None, tolerance=None,
                method: str = METHOD_AUTO) -> Tuple[mpc, SeriesDiagnostics]:
        """
        2F1^(1)(a,b;c;t,…,t) 的計算入口

        Args:
            method: "auto"（截斷級數用分拆加總，其餘用行列式）、"partition" 或 "determinant"
        """
        if method == METHOD_PARTITION:
            return PartitionHypergeometric.hyp_2f1_partition(a, b, c, t, N, ctx=ctx, tolerance=tolerance)
        if method == METHOD_DETERMINANT:
            return PartitionHypergeometric.hyp_2f1_determinant(a, b, c, t, N, ctx=ctx)
        if method != METHOD_AUTO:
            raise ValueError(f"未知的 2F1^(1) 計算方式: {method!r}")
        if PartitionHypergeometric._termination_part(mpc(a), mpc(b), ctx) is not None:
            return PartitionHypergeometric.hyp_2f1_partition(a, b, c, t, N, ctx=ctx, tolerance=tolerance)
        return PartitionHypergeometric.hyp_2f1_determinant(a, b, c, t, N, ctx=ctx)

    @staticmethod
    @precision_scope
    def hyp_2f1_determinant(a, b, c, t, N: int,
                            ctx: Optional[PrecisionContext] = None) -> Tuple[mpc, SeriesDiagnostics]:
        """
        以 N×N 行列式計算 2F1^(1)(a,b;c;t,…,t)

            det[(a'+i)_j · 2F1(a'+i+j, b'+i; c'+i; t)]_{i,j=0}^{N-1} / ∏_{k<N} k!

        其中 a' = a-N+1、b' = b-N+1、c' = c-N+1。以 l_j = κ_j + N - j 改寫後，
        [a]_κ[b]_κ/[c]_κ · s_κ/h_κ 分解成單變數權重與 Vandermonde 平方的乘積，
        對 l 的加總即為 Gauss 函數的 Gram 行列式。行列式在 escalated 精度下計算。

        Raises:
            PreconditionError: |t| ≥ 1
            PoleError: c-N+1 … c 之中有非正整數
        """
        a, b, c, t = mpc(a), mpc(b), mpc(c), mpc(t)
        if N < 0:
            raise ValueError("N 必須為非負整數")
        if N == 0 or t == 0:
            return mpc(1), SeriesDiagnostics(max_weight_used=0, tail_estimate=0.0, converged=True, terms=1,
                                             method=METHOD_DETERMINANT)
        if abs(t) >= 1:
            logger.error(f"2F1^(1) 的行列式表示需要 |t| < 1（|t|={mp.nstr(abs(t), 8)}）")
            raise PreconditionError("2F1^(1) 的行列式表示需要 |t| < 1")
        shift = 1 - N
        for i in range(N):
            if nonpositive_integer(c + shift + i, ctx) is not None:
                logger.error(f"2F1^(1) 的 c={mp.nstr(c, 10)} 使 [c]_κ 出現零")
                raise PoleError(f"c-N+1 … c 含非正整數 (c={mp.nstr(c, 10)})")

        fine = ctx.escalated()
        with mp.workdps(fine.decimal_digits):
            def entry(i: int, j: int) -> mpc:
                return mp.rf(a + shift + i, j) * SpecialFunctions.gauss_2f1(
                    a + shift + i + j, b + shift + i, c + shift + i, t, ctx=fine)

            value = PartitionHypergeometric._gram_determinant(entry, N)
        return value, SeriesDiagnostics(max_weight_used=0, tail_estimate=0.0, converged=True, terms=N * N,
                                        method=METHOD_DETERMINANT)

    @staticmethod
    @precision_scope
    def hyp_2f1_partition(a, b, c, t, N: int, ctx: Optional[PrecisionContext] = None,
                          tolerance=None) -> Tuple[mpc, SeriesDiagnostics]:
        """
        計算 2F1^(1)(a,b;c;t,…,t)（N 個相同參數）

        Args:
            a, b, c: 參數
            t: 共同參數值
            N: 變數個數
            ctx: 精度設定（max_partition_weight 為權重上限）
            tolerance: 相對收斂門檻，預設為 ctx.tol

        Returns:
            (級數值, 診斷資訊)

        Raises:
            PoleError: 對某個有貢獻的 κ，[c]_κ = 0
            ConvergenceError: 超過權重上限仍未收斂
        """
        a, b, c, t = mpc(a), mpc(b), mpc(c), mpc(t)
        if N < 0:
            raise ValueError("N 必須為非負整數")
        if N == 0 or t == 0:
            return mpc(1), SeriesDiagnostics(max_weight_used=0, tail_estimate=0.0, converged=True, terms=1)

        cutoff = PartitionHypergeometric._termination_part(a, b, ctx)
        if cutoff is None and abs(t) >= 1:
            logger.error(f"2F1^(1) 在 |t|={mp.nstr(abs(t), 8)} 不收斂且級數不截斷")
            raise PreconditionError("2F1^(1) 需要 |t| < 1 或截斷級數")

        max_weight = cutoff * N if cutoff is not None else ctx.max_partition_weight
        max_part = cutoff if cutoff is not None else max_weight
        tables = [_PochhammerRows(x, N, max_part) for x in (a, b, c)]

        def term(kappa: Partition) -> mpc:
            numerator = tables[0].value(kappa) * tables[1].value(kappa)
            if numerator == 0:
                return mpc(0)
            denominator = tables[2].value(kappa)
            if denominator == 0:
                logger.error(f"2F1^(1) 的 [c]_κ 在 κ={kappa} 為零 (c={mp.nstr(c, 10)})")
                raise PoleError(f"[c]_κ 在 κ={kappa} 為零")
            return numerator / denominator * PartitionHypergeometric._schur_over_hook(kappa, t, N)

        def shell(weight: int) -> List[Partition]:
            return PartitionTools.partitions_of(weight, N, max_part)

        return PartitionHypergeometric._sum_shells(
            term, shell, max_weight, ctx, tolerance, terminating=cutoff is not None)

    @staticmethod
    @precision_scope
    def ising_limit_eval(N: int, t, ctx: Optional[PrecisionContext] = None, tolerance=None,
                         method: str = METHOD_AUTO) -> mpc:
        """
        lim_{ε→0} ε·2F1^(1)(-1/2,-1/2;N-1+ε;t,…,t)

        只有長度恰為 N 的分拆有貢獻：
            Σ_{l(κ)=N} ([-1/2]_κ)² / [N]_κ · ∏_j (N-j+κ_j)/(N-1)! · s_κ/h_κ
        行列式形式中只有第 0 列含 c' = ε 的極點，以 lim ε·2F1(A,B;ε;t) = AB·t·2F1(A+1,B+1;2;t) 取代。

        Args:
            N: 變數個數（≥ 1）
            t: 共同參數值，|t| ≤ 1
            ctx: 精度設定
            tolerance: 相對收斂門檻（僅用於分拆加總）
            method: "auto"（|t| < 1 用行列式）、"partition" 或 "determinant"

        Returns:
            極限值；t = 0 時為 0
        """
        if N < 1:
            raise ValueError("ising_limit_eval 需要 N ≥ 1")
        if method not in (METHOD_AUTO, METHOD_PARTITION, METHOD_DETERMINANT):
            raise ValueError(f"未知的 2F1^(1) 計算方式: {method!r}")
        t = mpc(t)
        if t == 0:
            return mpc(0)
        if method == METHOD_DETERMINANT or (method == METHOD_AUTO and abs(t) < 1):
            return PartitionHypergeometric._ising_limit_determinant(N, t, ctx)

        half = mpc(mpf(-1) / 2)
        max_weight = ctx.max_partition_weight + N
        half_rows = _PochhammerRows(half, N, max_weight)
        n_rows = _PochhammerRows(mpc(N), N, max_weight)
        norm = mp.factorial(N - 1)

        def term(kappa: Partition) -> mpc:
            content = mpf(1)
            for j, part in enumerate(kappa.parts, start=1):
                content *= N - j + part
            value = half_rows.value(kappa) ** 2 / n_rows.value(kappa) * content / norm
            return value * PartitionHypergeometric._schur_over_hook(kappa, t, N)

        def shell(weight: int) -> List[Partition]:
            if weight < N:
                return []
            return [Partition(parts=tuple(p + 1 for p in base.parts) + (1,) * (N - base.length))
                    for base in PartitionTools.partitions_of(weight - N, N)]

        value, _ = PartitionHypergeometric._sum_shells(term, shell, max_weight, ctx, tolerance)
        return value

    @staticmethod
    def _ising_limit_determinant(N: int, t: mpc, ctx: PrecisionContext) -> mpc:
        if abs(t) >= 1:
            raise PreconditionError("2F1^(1) 的行列式表示需要 |t| < 1")
        shifted = mpf(1) / 2 - N
        fine = ctx.escalated()
        sf = SpecialFunctions
        with mp.workdps(fine.decimal_digits):
            def entry(i: int, j: int) -> mpc:
                head = mp.rf(shifted + i, j)
                if i == 0:
                    return head * sf.gauss_2f1_regularized(shifted + j, shifted, 0, t, ctx=fine)
                return head * sf.gauss_2f1(shifted + i + j, shifted + i, i, t, ctx=fine)

            return PartitionHypergeometric._gram_determinant(entry, N)

    @staticmethod
    def _gram_determinant(entry: Callable[[int, int], mpc], N: int) -> mpc:
        """det[entry(i, j)]_{i,j<N} / ∏_{k<N} k!"""
        matrix = mp.matrix(N, N)
        for i in range(N):
            for j in range(N):
                matrix[i, j] = entry(i, j)
        return mpc(mp.det(matrix)) / mp.superfac(N - 1)

    @staticmethod
    @precision_scope
    def tau_via_hyp(params: WeightParams, N: int, ctx: Optional[PrecisionContext] = None,
                    tolerance=None, with_t_factor: bool = False, method: str = METHOD_AUTO) -> mpc:
        """
        以 2F1^(1) 計算 ξ = 0 的 Toeplitz 行列式

        ∏_{j=0}^{N-1} j!Γ(2ω₁+j+1)/(Γ(1+μ+ω+j)Γ(1-μ+ω̄+j)) · 2F1^(1)(-2μ,-μ-ω;N-μ+ω̄;t)
        對應權重 z^{-μ-ω}(1+z)^{2ω₁}(1+tz)^{2μ}（不含 t^{-μ}）。with_t_factor=True 時
        乘上 (t^{-μ})^N，與 MomentCalculator.moment_general 的行列式一致。

        Raises:
            PreconditionError: ξ ≠ 0 或 Re(ω₁) ≤ -1/2
        """
        PartitionHypergeometric._check_params(params)
        if N == 0:
            return mpc(1)
        prefactor = PartitionHypergeometric._gamma_prefactor(params, N, ctx)
        value, _ = PartitionHypergeometric.hyp_2f1(
            -2 * params.mu, -params.mu - params.omega, N - params.mu + params.omega_bar,
            params.t, N, ctx=ctx, tolerance=tolerance, method=method)
        result = prefactor * value
        if with_t_factor:
            result *= params.t_power(-params.mu) ** N
        return result

    @staticmethod
    @precision_scope
    def reflection_via_hyp(params: WeightParams, N: int, ctx: Optional[PrecisionContext] = None,
                           tolerance=None, method: str = METHOD_AUTO) -> Tuple[mpc, mpc]:
        """
        以 2F1^(1) 比值計算反射係數

        r_N = (-1)^N (μ+ω)_N/(1-μ+ω̄)_N · F(-2μ,1-μ-ω;N+1-μ+ω̄)/F(-2μ,-μ-ω;N-μ+ω̄)
        r̄_N = (-1)^N (-μ+ω̄)_N/(1+μ+ω)_N · F(-2μ,-1-μ-ω;N-1-μ+ω̄)/F(-2μ,-μ-ω;N-μ+ω̄)

        Raises:
            DegenerateParameter: 前置 Pochhammer 為零而對應級數有極點（0·∞），
                例如 -μ+ω̄ = 0 時的 r̄_N，需改用極限公式
        """
        PartitionHypergeometric._check_params(params)
        if N == 0:
            return mpc(1), mpc(1)
        mu, omega, omega_bar, t = params.mu, params.omega, params.omega_bar, params.t
        sign = (-1) ** N
        a = -2 * mu

        def hyp(b, c) -> mpc:
            value, _ = PartitionHypergeometric.hyp_2f1(a, b, c, t, N, ctx=ctx, tolerance=tolerance, method=method)
            return value

        base = hyp(-mu - omega, N - mu + omega_bar)
        if base == 0:
            raise DegenerateParameter("I_N 為零，反射係數無定義")

        r_den = SpecialFunctions.pochhammer(1 - mu + omega_bar, N, ctx=ctx)
        if r_den == 0:
            raise DegenerateParameter("(1-μ+ω̄)_N 為零")
        r_num = SpecialFunctions.pochhammer(mu + omega, N, ctx=ctx)
        r = sign * r_num / r_den * hyp(1 - mu - omega, N + 1 - mu + omega_bar) / base

        rbar_den = SpecialFunctions.pochhammer(1 + mu + omega, N, ctx=ctx)
        if rbar_den == 0:
            raise DegenerateParameter("(1+μ+ω)_N 為零")
        rbar_num = SpecialFunctions.pochhammer(-mu + omega_bar, N, ctx=ctx)
        try:
            shifted = hyp(-1 - mu - omega, N - 1 - mu + omega_bar)
        except PoleError as exc:
            if rbar_num == 0:
                raise DegenerateParameter(f"r̄_N 為 0·∞ 型（-μ+ω̄={mp.nstr(-mu + omega_bar, 10)}），需改用極限公式") from exc
            raise
        rbar = sign * rbar_num / rbar_den * shifted / base
        return r, rbar

    @staticmethod
    @precision_scope
    def gauss_product(params: WeightParams, N: int, ctx: Optional[PrecisionContext] = None) -> mpc:
        """t = 1 的 Gauss 求和 ∏_{j=1}^N Γ(j+2μ+2ω₁)Γ(j-μ+ω̄)/(Γ(j+2ω₁)Γ(j+μ+ω̄))"""
        mu, omega1, omega_bar = params.mu, params.omega1, params.omega_bar
        result = mpc(1)
        for j in range(1, N + 1):
            result *= (SpecialFunctions.gamma(j + 2 * mu + 2 * omega1, ctx=ctx)
                       * SpecialFunctions.gamma(j - mu + omega_bar, ctx=ctx)
                       * SpecialFunctions.rgamma(j + 2 * omega1, ctx=ctx)
                       * SpecialFunctions.rgamma(j + mu + omega_bar, ctx=ctx))
        return result

    @staticmethod
    @precision_scope
    def special_point_values(params: WeightParams, N: int, point: str,
                             ctx: Optional[PrecisionContext] = None) -> Dict[str, mpc]:
        """
        t = 0 或 t = 1 時 r_N、r̄_N、l_N/κ_N 的封閉形式

        Args:
            params: 只使用 μ、ω₁、ω₂
            N: 索引
            point: "zero" 或 "one"

        Returns:
            {"r": r_N, "rbar": r̄_N, "l": l_N/κ_N}
        """
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        sign = (-1) ** N
        pochhammer = SpecialFunctions.pochhammer
        if point == "zero":
            return {
                "r": sign * pochhammer(mu + omega, N, ctx=ctx) / pochhammer(1 - mu + omega_bar, N, ctx=ctx),
                "rbar": sign * pochhammer(-mu + omega_bar, N, ctx=ctx) / pochhammer(1 + mu + omega, N, ctx=ctx),
                "l": -(mu + omega) * N / (N - mu + omega_bar),
            }
        if point == "one":
            return {
                "r": sign * pochhammer(mu + omega, N, ctx=ctx) / pochhammer(1 + mu + omega_bar, N, ctx=ctx),
                "rbar": sign * pochhammer(mu + omega_bar, N, ctx=ctx) / pochhammer(1 + mu + omega, N, ctx=ctx),
                "l": -(mu + omega) * N / (N + mu + omega_bar),
            }
        raise ValueError(f"未知的特殊點: {point!r}")

    @staticmethod
    def _check_params(params: WeightParams) -> None:
        if params.xi != 0:
            raise PreconditionError("超幾何表示只適用於 ξ = 0")
        if params.omega1.real <= -mpf(1) / 2:
            raise PreconditionError("超幾何表示需要 Re(ω₁) > -1/2")

    @staticmethod
    def _gamma_prefactor(params: WeightParams, N: int, ctx: PrecisionContext) -> mpc:
        mu, omega, omega_bar, omega1 = params.mu, params.omega, params.omega_bar, params.omega1
        result = mpc(1)
        for j in range(N):
            result *= (mp.factorial(j) * SpecialFunctions.gamma(2 * omega1 + j + 1, ctx=ctx)
                       * SpecialFunctions.rgamma(1 + mu + omega + j, ctx=ctx)
                       * SpecialFunctions.rgamma(1 - mu + omega_bar + j, ctx=ctx))
        return result

    @staticmethod
    def _termination_part(a: mpc, b: mpc, ctx: PrecisionContext) -> Optional[int]:
        """a 或 b 為 -m 時回傳 κ₁ 的上限 m"""
        orders = [-m for m in (nonpositive_integer(a, ctx), nonpositive_integer(b, ctx)) if m is not None]
        return min(orders) if orders else None

    @staticmethod
    def _schur_over_hook(kappa: Partition, t: mpc, N: int) -> mpc:
        """s_κ(t,…,t)/h_κ = t^{|κ|} ∏(N+j-i) / h_κ²"""
        content = PartitionTools.content_product(kappa, N)
        hook = PartitionTools.hook_product(kappa)
        return t ** kappa.weight * mpf(content) / (mpf(hook) * hook)

    @staticmethod
    def _sum_shells(term: Callable[[Partition], mpc], shell: Callable[[int], List[Partition]],
                    max_weight: int, ctx: PrecisionContext, tolerance=None,
                    terminating: bool = False) -> Tuple[mpc, SeriesDiagnostics]:
        threshold = ctx.tol if tolerance is None else mpf(tolerance)
        total = mpc(0)
        terms = 0
        small_run = 0
        recent: List[mpf] = []
        for weight in range(0, max_weight + 1):
            shell_sum = mpc(0)
            for kappa in shell(weight):
                shell_sum += term(kappa)
                terms += 1
            total += shell_sum
            if terminating or total == 0:
                continue
            recent = (recent + [abs(shell_sum) / abs(total)])[-SMALL_SHELLS:]
            if recent[-1] <= threshold:
                small_run += 1
                if small_run >= SMALL_SHELLS:
                    logger.debug(f"2F1^(1) 在權重 {weight} 收斂（{terms} 項）")
                    return total, SeriesDiagnostics(max_weight_used=weight, tail_estimate=float(max(recent)),
                                                    converged=True, terms=terms)
            else:
                small_run = 0
        if terminating:
            return total, SeriesDiagnostics(max_weight_used=max_weight, tail_estimate=0.0, converged=True,
                                            terms=terms, terminating=True)
        tail = float(max(recent)) if recent else float("inf")
        logger.error(f"2F1^(1) 在權重上限 {max_weight} 內未收斂（尾端估計 {tail:.3e}）")
        raise ConvergenceError(f"2F1^(1) 在權重上限 {max_weight} 內未收斂")
