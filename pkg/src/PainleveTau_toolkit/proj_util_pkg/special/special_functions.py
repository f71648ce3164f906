# -*- coding: utf-8 -*-
"""
特殊函數計算工具

Gamma、Pochhammer、Gauss 超幾何函數 2F1 與完全橢圓積分，全部以 mpmath 在
PrecisionContext 指定的精度下計算。
"""
import logging
from typing import Optional

from mpmath import mp, mpc, mpf

from proj_util_pkg.common.errors import ConvergenceError, PoleError, SingularModulus
from proj_util_pkg.common.precision import PrecisionContext, precision_scope

logger = logging.getLogger(__name__)

# |z| 不超過此值時直接加總級數，否則交給 mpmath 的解析延拓
DIRECT_SERIES_RADIUS = mpf("0.75")


def nonpositive_integer(value, ctx: PrecisionContext) -> Optional[int]:
    """
    判斷 value 是否（在容許誤差內）為非正整數

    Returns:
        對應的整數 -m；若不是則回傳 None
    """
    value = mpc(value)
    nearest = mp.nint(value.real)
    if nearest > 0:
        return None
    if abs(value - nearest) <= ctx.tol * max(mpf(1), abs(nearest)):
        return int(nearest)
    return None


class SpecialFunctions:
    """特殊函數計算器"""

    @staticmethod
    @precision_scope
    def gamma(z, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        計算 Gamma 函數 Γ(z)

        Args:
            z: 複數引數
            ctx: 精度設定

        Returns:
            Γ(z)

        Raises:
            PoleError: z 為非正整數
        """
        if nonpositive_integer(z, ctx) is not None:
            raise PoleError(f"Γ(z) 在 z={mp.nstr(z, 10)} 有極點")
        return mpc(mp.gamma(z))

    @staticmethod
    @precision_scope
    def rgamma(z, ctx: Optional[PrecisionContext] = None) -> mpc:
        """1/Γ(z)，在非正整數處為 0"""
        m = nonpositive_integer(z, ctx)
        if m is not None:
            return mpc(0)
        return mpc(mp.rgamma(z))

    @staticmethod
    @precision_scope
    def pochhammer(a, n: int, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        上升階乘 (a)_n = a(a+1)...(a+n-1)

        Args:
            a: 複數
            n: 非負整數
            ctx: 精度設定

        Returns:
            (a)_n，其中 (a)_0 = 1
        """
        if n < 0:
            raise ValueError("pochhammer 只接受非負整數 n")
        result = mpc(1)
        a = mpc(a)
        for j in range(n):
            result *= a + j
        return result

    @staticmethod
    @precision_scope
    def gauss_2f1(a, b, c, z, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        Gauss 超幾何函數 2F1(a,b;c;z)

        |z| <= 0.75 或級數截斷時直接加總，連續三項小於 tolerance·|部分和| 即停止；
        其餘情況（|z| 接近 1 或位於單位圓外）使用 mpmath.hyp2f1 的解析延拓。

        Args:
            a, b, c: 參數
            z: 引數
            ctx: 精度設定

        Returns:
            2F1(a,b;c;z)

        Raises:
            PoleError: c 為非正整數且級數不會先截斷
            ConvergenceError: 超過 max_series_terms 仍未收斂
        """
        a, b, c, z = mpc(a), mpc(b), mpc(c), mpc(z)
        terminate = SpecialFunctions._termination_order(a, b, ctx)
        c_pole = nonpositive_integer(c, ctx)
        if c_pole is not None and (terminate is None or terminate > -c_pole):
            raise PoleError(f"2F1 的 c={mp.nstr(c, 10)} 為非正整數")

        if terminate is not None:
            return SpecialFunctions._series(a, b, c, z, ctx, max_terms=terminate + 1)
        if z == 0:
            return mpc(1)
        if abs(z) <= DIRECT_SERIES_RADIUS:
            return SpecialFunctions._series(a, b, c, z, ctx)
        return mpc(mp.hyp2f1(a, b, c, z))

    @staticmethod
    @precision_scope
    def gauss_2f1_regularized(a, b, c, z, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        正規化超幾何函數 2F1(a,b;c;z)/Γ(c)

        c = -m 為非正整數時使用極限
        (a)_{m+1}(b)_{m+1}/(m+1)! · z^{m+1} · 2F1(a+m+1, b+m+1; m+2; z)。
        """
        a, b, c, z = mpc(a), mpc(b), mpc(c), mpc(z)
        c_pole = nonpositive_integer(c, ctx)
        if c_pole is None:
            return SpecialFunctions.rgamma(c, ctx=ctx) * SpecialFunctions.gauss_2f1(a, b, c, z, ctx=ctx)
        m = -c_pole
        coefficient = (
            SpecialFunctions.pochhammer(a, m + 1, ctx=ctx)
            * SpecialFunctions.pochhammer(b, m + 1, ctx=ctx)
            / mp.factorial(m + 1)
        )
        if coefficient == 0:
            return mpc(0)
        return coefficient * z ** (m + 1) * SpecialFunctions.gauss_2f1(a + m + 1, b + m + 1, m + 2, z, ctx=ctx)

    @staticmethod
    @precision_scope
    def gauss_2f1_derivative(a, b, c, z, ctx: Optional[PrecisionContext] = None) -> mpc:
        """d/dz 2F1(a,b;c;z) = (ab/c)·2F1(a+1,b+1;c+1;z)"""
        a, b, c = mpc(a), mpc(b), mpc(c)
        if a == 0 or b == 0:
            return mpc(0)
        return a * b / c * SpecialFunctions.gauss_2f1(a + 1, b + 1, c + 1, z, ctx=ctx)

    @staticmethod
    @precision_scope
    def elliptic_K(k, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        第一類完全橢圓積分 K(k) = ∫_0^{π/2} dθ/√(1-k²sin²θ)

        以算術幾何平均 K = π / (2·AGM(1, k')) 計算。

        Raises:
            SingularModulus: k² = 1
        """
        k = mpc(k)
        if abs(k * k - 1) <= ctx.tol:
            raise SingularModulus("K(k) 在 k²=1 發散")
        k_prime = mp.sqrt(1 - k * k)
        return mpc(mp.pi / (2 * mp.agm(1, k_prime)))

    @staticmethod
    @precision_scope
    def elliptic_E(k, ctx: Optional[PrecisionContext] = None) -> mpc:
        """第二類完全橢圓積分 E(k)，模數慣例與 elliptic_K 相同"""
        k = mpc(k)
        return mpc(mp.ellipe(k * k))

    @staticmethod
    def _termination_order(a: mpc, b: mpc, ctx: PrecisionContext) -> Optional[int]:
        orders = [-m for m in (nonpositive_integer(a, ctx), nonpositive_integer(b, ctx)) if m is not None]
        return min(orders) if orders else None

    @staticmethod
    def _series(a: mpc, b: mpc, c: mpc, z: mpc, ctx: PrecisionContext, max_terms: Optional[int] = None) -> mpc:
        limit = max_terms if max_terms is not None else ctx.max_series_terms
        term = mpc(1)
        total = mpc(1)
        small_run = 0
        for k in range(1, limit):
            term *= (a + k - 1) * (b + k - 1) / ((c + k - 1) * k) * z
            total += term
            if max_terms is not None:
                continue
            if abs(term) <= ctx.tol * abs(total) * mpf("1e-5"):
                small_run += 1
                if small_run >= 3:
                    return total
            else:
                small_run = 0
        if max_terms is not None:
            return total
        logger.error(f"2F1 級數在 {limit} 項內未收斂 (z={mp.nstr(z, 8)})")
        raise ConvergenceError(f"2F1 級數在 {limit} 項內未收斂")
