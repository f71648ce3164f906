# -*- coding: utf-8 -*-
"""
Toeplitz 矩陣元素 w_n 計算模組

w_n = (1/2π)∫ w(e^{iθ}) e^{-inθ} dθ，提供一般參數的解析延拓公式、三個應用情境的
特殊公式（CUE 間隙、CUE 特徵多項式、Ising 對角相關），以及數值積分驗證路徑。
"""
import json
import logging
from typing import Any, Callable, Dict, Iterable, Optional

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict

from proj_util_pkg.common.errors import BranchAmbiguity, ConvergenceError, PhaseError, PoleError
from proj_util_pkg.common.precision import PrecisionContext, as_complex, precision_scope
from proj_util_pkg.special.special_functions import SpecialFunctions
from toeplitz.weight_params import WeightParams

logger = logging.getLogger(__name__)

MOMENT_SOURCES = ("general", "cue-gap", "cue-charpoly", "ising-low", "ising-high", "quadrature", "borodin")

# 經 θ ↦ -θ 反射求下半圓斜率時使用的輔助跳躍值
_REFLECTION_SHIFT = mpf("0.5")


class MomentTable(BaseModel):
    """
    Toeplitz 矩陣元素表

    建立後不可變更；values 以整數索引 n 對應 w_n。
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: Optional[WeightParams] = None
    values: Dict[int, Any]
    source: str
    meta: Dict[str, Any] = {}

    def w(self, n: int) -> mpc:
        """
        取得 w_n

        Raises:
            KeyError: 表中沒有索引 n
        """
        if n not in self.values:
            raise KeyError(f"MomentTable ({self.source}) 缺少 w_{n}")
        return self.values[n]

    @property
    def index_range(self) -> tuple:
        return min(self.values), max(self.values)

    def covers(self, low: int, high: int) -> bool:
        return all(n in self.values for n in range(low, high + 1))

    def to_dict(self) -> dict:
        return {
            "params": None if self.params is None else self.params.describe(),
            "entries": [
                {"n": n, "re": mp.nstr(mpc(v).real, 30), "im": mp.nstr(mpc(v).imag, 30)}
                for n, v in sorted(self.values.items())
            ],
            "source": self.source,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


class MomentCalculator:
    """Toeplitz 矩陣元素計算器"""

    @staticmethod
    @precision_scope
    def moment_general(n: int, params: WeightParams, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        一般參數的 w_n（解析延拓）

        ξ = 0 時只有第一項；ξ ≠ 0 且 Im t > 0 時加上跳躍項；Im t < 0 時以 θ ↦ -θ 反射
        到上半圓的參數 (μ, ω₁, -ω₂, φ' = 2π-φ) 計算，再利用 w_n 對 ξ 為仿射函數組合。

        Args:
            n: 索引
            params: 權重參數
            ctx: 精度設定

        Returns:
            w_n

        Raises:
            BranchAmbiguity: ξ ≠ 0 且 t 為實數
            PoleError: Gamma 函數極點無法消去
        """
        base = params.t_power(-params.mu) * MomentCalculator._regular_part(n, params, ctx)
        if params.xi == 0:
            return base

        imag_t = mpc(params.t).imag
        if abs(imag_t) <= ctx.tol:
            logger.error(f"ξ={mp.nstr(params.xi, 8)} 但 t={mp.nstr(params.t, 8)} 為實數，分支無法決定")
            raise BranchAmbiguity("ξ ≠ 0 時 t 不可為實數（Im t = 0 的分支未定義）")

        if imag_t > 0:
            return base + params.t_power(-params.mu) * params.xi * MomentCalculator._jump_slope(n, params, ctx)
        return base + params.xi * MomentCalculator._lower_half_slope(n, params, base, ctx)

    @staticmethod
    @precision_scope
    def moment_general_alt(n: int, params: WeightParams, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        w_n 的第二種寫法（跳躍項以 ₂F₁(…;t) 表示），Im t > 0

        Raises:
            PoleError: sin π(n+μ-ω̄) = 0 或 Gamma 極點
        """
        mu, omega, omega_bar, t = params.mu, params.omega, params.omega_bar, mpc(params.t)
        s = n + mu - omega_bar
        sin_s = mp.sin(mp.pi * s)
        if abs(sin_s) <= ctx.tol:
            raise PoleError(f"sin π(n+μ-ω̄) = 0 (n={n})")
        if params.xi != 0 and t.imag <= 0:
            raise BranchAmbiguity("第二種寫法只在 Im t > 0 使用")

        sf = SpecialFunctions
        ratio = params.xi * mp.expjpi(-s) / (2j * sin_s)
        first = (1 + ratio) * MomentCalculator._regular_part(n, params, ctx)
        second = (
            ratio
            * sf.gamma(2 * mu + 1, ctx=ctx)
            * sf.rgamma(1 - n + mu + omega_bar, ctx=ctx)
            * params.t_power(s)
            * (1 - t) ** (2 * mu + 2 * params.omega1 + 1)
            * sf.gauss_2f1_regularized(2 * mu + 1, 1 + n + mu + omega, 1 + s, t, ctx=ctx)
        )
        return params.t_power(-mu) * (first - second)

    @staticmethod
    @precision_scope
    def moment_cue_gap(n: int, xi, phi, ctx: Optional[PrecisionContext] = None) -> mpc:
        """CUE 間隙機率權重（弧上 1-ξ，其餘為 1）的 w_n"""
        xi = as_complex(xi)
        phi = mpf(phi)
        if n == 0:
            return 1 - xi * phi / (2 * mp.pi)
        t_n = mp.expj(n * phi)
        return xi / (2j * mp.pi) * (-1) ** (n + 1) * (t_n - 1) / n

    @staticmethod
    @precision_scope
    def moment_cue_charpoly(n: int, mu, u, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        |det(1 - u U)|^{2μ} 平均的權重 w_n

        w_{-m} = Γ(μ+1)/(m! Γ(μ+1-m)) ₂F₁(-μ, -μ+m; m+1; |u|²)，w_m = |u|^{2m} w_{-m}
        """
        mu = as_complex(mu)
        u2 = abs(as_complex(u)) ** 2
        m = abs(n)
        sf = SpecialFunctions
        w_minus = (
            sf.gamma(mu + 1, ctx=ctx)
            * sf.rgamma(mu + 1 - m, ctx=ctx)
            / mp.factorial(m)
            * sf.gauss_2f1(-mu, -mu + m, m + 1, u2, ctx=ctx)
        )
        if n <= 0:
            return w_minus
        return u2 ** n * w_minus

    @staticmethod
    @precision_scope
    def moment_ising(n: int, k, phase: str, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        Ising 對角相關的 Toeplitz 矩陣元素

        Args:
            n: 索引
            k: 溫度參數 k（低溫 k ≥ 1，高溫 0 < k < 1）
            phase: "low" 或 "high"
            ctx: 精度設定

        Returns:
            w_n

        Raises:
            PhaseError: k 與相位不符
        """
        k = mpf(k)
        MomentCalculator._check_phase(k, phase)
        sf = SpecialFunctions
        half = mpf(1) / 2
        if phase == "low":
            x = 1 / (k * k)
            if n <= 0:
                m = -n
                return (
                    (-1) ** m / mp.pi
                    * sf.gamma(m + half, ctx=ctx) * sf.gamma(half, ctx=ctx) / mp.factorial(m)
                    * sf.gauss_2f1(-half, m + half, m + 1, x, ctx=ctx)
                )
            return (
                (-1) ** (n + 1) * x ** n / mp.pi
                * sf.gamma(n - half, ctx=ctx) * sf.gamma(3 * half, ctx=ctx) / mp.factorial(n)
                * sf.gauss_2f1(half, n - half, n + 1, x, ctx=ctx)
            )

        x = k * k
        if n <= 0:
            m = -n
            return (
                (-1) ** m * k ** (2 * m + 1) / mp.pi
                * sf.gamma(m + half, ctx=ctx) * sf.gamma(3 * half, ctx=ctx) / mp.factorial(m + 1)
                * sf.gauss_2f1(half, m + half, m + 2, x, ctx=ctx)
            )
        return (
            (-1) ** (n - 1) / (mp.pi * k)
            * sf.gamma(n - half, ctx=ctx) * sf.gamma(half, ctx=ctx) / mp.factorial(n - 1)
            * sf.gauss_2f1(-half, n - half, n, x, ctx=ctx)
        )

    @staticmethod
    @precision_scope
    def moment_borodin(p: int, z, z_prime, x, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        符號 (1-√x e^{iθ})^z (1-√x e^{-iθ})^{z'} 的 Fourier 係數 g_p

        g_p = x^{p/2} (-z)_p/p! ₂F₁(p-z, -z'; p+1; x)，g_{-p} 為 z 與 z' 互換。
        """
        z, z_prime, x = as_complex(z), as_complex(z_prime), as_complex(x)
        if p < 0:
            z, z_prime, p = z_prime, z, -p
        sf = SpecialFunctions
        return (
            mp.sqrt(x) ** p
            * sf.pochhammer(-z, p, ctx=ctx) / mp.factorial(p)
            * sf.gauss_2f1(p - z, -z_prime, p + 1, x, ctx=ctx)
        )

    @staticmethod
    @precision_scope
    def moment_quadrature(n: int, params: WeightParams, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        以數值積分計算 w_n（解析公式的獨立驗證路徑）

        單位圓上使用模數形式 e^{ω₂θ}|2cos θ/2|^{2ω₁}|2cos (θ+φ)/2|^{2μ}，弧 (π-φ, π) 上乘以
        (1-ξ)e^{-2πiμ}，於 θ = π-φ 與 θ = π 分段；t 不在圓上（ξ = 0）時直接積分解析式。

        Raises:
            ConvergenceError: 積分誤差估計超過 10^{-digits/2}
        """
        mu, omega1, omega2 = params.mu, params.omega1, params.omega2
        angle = params.angle

        if angle is None:
            t = mpc(params.t)
            t_mu = params.t_power(-mu)

            def integrand(theta):
                z = mp.expj(theta)
                return (
                    t_mu * mp.expj(-(mu + params.omega) * theta)
                    * (1 + z) ** (2 * omega1) * (1 + t * z) ** (2 * mu) * mp.expj(-n * theta)
                )

            panels = [([-mp.pi, mp.pi], integrand)]
        else:
            arc_factor = (1 - params.xi) * mp.expjpi(-2 * mu)

            def modulus(theta):
                return (
                    mp.exp(omega2 * theta)
                    * mp.power(abs(2 * mp.cos(theta / 2)), 2 * omega1)
                    * mp.power(abs(2 * mp.cos((theta + angle) / 2)), 2 * mu)
                    * mp.expj(-n * theta)
                )

            split = mp.pi - angle
            panels = [([-mp.pi, split], modulus)]
            if angle > 0:
                panels.append(([split, mp.pi], lambda theta: arc_factor * modulus(theta)))

        total = mpc(0)
        worst = mpf(0)
        for interval, func in panels:
            value, error = mp.quad(func, interval, error=True, maxdegree=10)
            total += value
            worst = max(worst, mpf(error))
        total /= 2 * mp.pi
        if worst / (2 * mp.pi) > ctx.half_tol * max(mpf(1), abs(total)):
            logger.error(f"w_{n} 數值積分誤差估計 {mp.nstr(worst, 5)} 超過容許值")
            raise ConvergenceError(f"w_{n} 數值積分未收斂")
        return total

    @staticmethod
    @precision_scope
    def build_table(source: str, indices: Iterable[int], params: Optional[WeightParams] = None,
                    ctx: Optional[PrecisionContext] = None, **kwargs) -> MomentTable:
        """
        建立 MomentTable

        Args:
            source: 來源標籤，見 MOMENT_SOURCES
            indices: 需要的索引
            params: 一般權重參數（general / quadrature 必填，其餘用於記錄）
            ctx: 精度設定
            **kwargs: 特殊情境參數（xi, phi / mu, u / k / z, z_prime, x）

        Returns:
            MomentTable
        """
        func = MomentCalculator._source_function(source, params, kwargs, ctx)
        values = {n: func(n) for n in sorted(set(indices))}
        logger.debug(f"MomentTable {source}: 索引 {min(values)}..{max(values)}")
        return MomentTable(params=params, values=values, source=source, meta={k: str(v) for k, v in kwargs.items()})

    @staticmethod
    def _source_function(source: str, params: Optional[WeightParams], kwargs: dict,
                         ctx: PrecisionContext) -> Callable[[int], mpc]:
        calc = MomentCalculator
        if source == "general":
            return lambda n: calc.moment_general(n, params, ctx=ctx)
        if source == "quadrature":
            return lambda n: calc.moment_quadrature(n, params, ctx=ctx)
        if source == "cue-gap":
            return lambda n: calc.moment_cue_gap(n, kwargs["xi"], kwargs["phi"], ctx=ctx)
        if source == "cue-charpoly":
            return lambda n: calc.moment_cue_charpoly(n, kwargs["mu"], kwargs["u"], ctx=ctx)
        if source in ("ising-low", "ising-high"):
            phase = source.split("-")[1]
            return lambda n: calc.moment_ising(n, kwargs["k"], phase, ctx=ctx)
        if source == "borodin":
            return lambda n: calc.moment_borodin(n, kwargs["z"], kwargs["z_prime"], kwargs["x"], ctx=ctx)
        raise ValueError(f"未知的 moment 來源: {source}")

    @staticmethod
    def _check_phase(k: mpf, phase: str) -> None:
        if phase == "low" and k < 1:
            logger.error(f"低溫相需要 k ≥ 1，收到 k={mp.nstr(k, 10)}")
            raise PhaseError(f"低溫相需要 k ≥ 1 (k={mp.nstr(k, 10)})")
        if phase == "high" and not (0 < k < 1):
            logger.error(f"高溫相需要 0 < k < 1，收到 k={mp.nstr(k, 10)}")
            raise PhaseError(f"高溫相需要 0 < k < 1 (k={mp.nstr(k, 10)})")
        if phase not in ("low", "high"):
            raise ValueError(f"未知的相位: {phase}")

    @staticmethod
    def _regular_part(n: int, params: WeightParams, ctx: PrecisionContext) -> mpc:
        """t^μ w_n 在 ξ = 0 時的值"""
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        sf = SpecialFunctions
        return (
            sf.gamma(2 * params.omega1 + 1, ctx=ctx)
            * sf.rgamma(1 + n + mu + omega, ctx=ctx)
            * sf.gauss_2f1_regularized(-2 * mu, -n - mu - omega, 1 - n - mu + omega_bar, mpc(params.t), ctx=ctx)
        )

    @staticmethod
    def _jump_slope(n: int, params: WeightParams, ctx: PrecisionContext) -> mpc:
        """
        t^μ w_n 對 ξ 的導數（Im t > 0）

        Gamma 極點時依序改用第二種寫法、再以 μ±ε 的平均取極限。
        """
        try:
            return MomentCalculator._jump_slope_euler(n, params, ctx)
        except PoleError:
            logger.info(f"w_{n} 跳躍項落在 Gamma 極點，改用第二種寫法")
        try:
            unit = params.model_copy(update={"xi": mpc(1)})
            regular = MomentCalculator._regular_part(n, params, ctx)
            return params.t_power(params.mu) * MomentCalculator.moment_general_alt(n, unit, ctx=ctx) - regular
        except PoleError:
            logger.info(f"w_{n} 兩種寫法皆退化，以 μ±ε 取極限")
        eps = mpf(10) ** (-(ctx.decimal_digits // 3))
        shifted = [params.model_copy(update={"mu": params.mu + d}) for d in (eps, -eps)]
        return sum(MomentCalculator._jump_slope_euler(n, p, ctx) for p in shifted) / 2

    @staticmethod
    def _jump_slope_euler(n: int, params: WeightParams, ctx: PrecisionContext) -> mpc:
        mu, omega1, omega, omega_bar, t = params.mu, params.omega1, params.omega, params.omega_bar, mpc(params.t)
        s = n + mu - omega_bar
        sf = SpecialFunctions
        return (
            mp.expjpi(-s) / (2j * mp.pi)
            * sf.gamma(2 * mu + 1, ctx=ctx)
            * sf.gamma(2 * omega1 + 1, ctx=ctx)
            * params.t_power(s)
            * (1 - t) ** (2 * mu + 2 * omega1 + 1)
            * sf.gauss_2f1_regularized(2 * mu + 1, 1 + n + mu + omega, 2 * mu + 2 * omega1 + 2, 1 - t, ctx=ctx)
        )

    @staticmethod
    def _lower_half_slope(n: int, params: WeightParams, base: mpc, ctx: PrecisionContext) -> mpc:
        """
        Im t < 0 時 w_n 對 ξ 的斜率

        w_n(φ, ξ) = c·w'_{-n}(2π-φ, ξ')，c = (1-ξ)e^{-2πiμ}，1-ξ' = e^{4πiμ}/(1-ξ)，
        其中 w' 為 ω₂ ↦ -ω₂ 的權重。取 ξ = 1/2 代入後與 ξ = 0 的值相減。
        """
        mu = params.mu
        shift = _REFLECTION_SHIFT
        c = (1 - shift) * mp.expjpi(-2 * mu)
        reflected = WeightParams(
            mu=mu,
            omega1=params.omega1,
            omega2=-params.omega2,
            xi=1 - mp.expjpi(4 * mu) / (1 - shift),
            t=mp.conj(mpc(params.t)),
            phi=2 * mp.pi - params.angle,
        )
        shifted = c * MomentCalculator.moment_general(-n, reflected, ctx=ctx)
        return (shifted - base) / shift
