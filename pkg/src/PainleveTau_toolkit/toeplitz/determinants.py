# -*- coding: utf-8 -*-
"""
Toeplitz 行列式直接計算（驗證用的獨立路徑）

I^ε_N = det[w_{j-k-ε}]_{0≤j,k≤N-1}，r_N = (-1)^N I¹_N / I⁰_N，r̄_N = (-1)^N I⁻¹_N / I⁰_N。
"""
import logging
from typing import List, Optional, Tuple

from mpmath import mp, mpc

from proj_util_pkg.common.errors import DivisionByZero
from proj_util_pkg.common.precision import PrecisionContext, precision_scope
from toeplitz.moments import MomentTable

logger = logging.getLogger(__name__)


class ToeplitzOracle:
    """Toeplitz 行列式計算器"""

    @staticmethod
    def required_indices(N: int, eps: int = 0) -> range:
        """I^ε_N 需要的 w_n 索引範圍"""
        return range(-(N - 1) - eps, (N - 1) - eps + 1)

    @staticmethod
    @precision_scope
    def toeplitz_det(eps: int, N: int, table: MomentTable, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        計算 I^ε_N

        Args:
            eps: -1、0 或 1
            N: 矩陣大小，N = 0 時回傳 1
            table: 涵蓋所需索引的 MomentTable
            ctx: 精度設定

        Returns:
            行列式值（奇異矩陣時為 0）
        """
        if eps not in (-1, 0, 1):
            raise ValueError("eps 只能是 -1、0、1")
        if N < 0:
            raise ValueError("N 必須為非負整數")
        if N == 0:
            return mpc(1)
        matrix = mp.matrix(N, N)
        for j in range(N):
            for k in range(N):
                matrix[j, k] = table.w(j - k - eps)
        return mpc(mp.det(matrix))

    @staticmethod
    @precision_scope
    def reflection_from_dets(N: int, table: MomentTable, ctx: Optional[PrecisionContext] = None) -> Tuple[mpc, mpc]:
        """
        由行列式比值得到反射係數 (r_N, r̄_N)

        Raises:
            DivisionByZero: I⁰_N = 0
        """
        if N == 0:
            return mpc(1), mpc(1)
        base = ToeplitzOracle.toeplitz_det(0, N, table, ctx=ctx)
        if base == 0:
            logger.error(f"I⁰_{N} = 0，無法計算反射係數")
            raise DivisionByZero(f"I⁰_{N} = 0")
        sign = (-1) ** N
        r = sign * ToeplitzOracle.toeplitz_det(1, N, table, ctx=ctx) / base
        r_bar = sign * ToeplitzOracle.toeplitz_det(-1, N, table, ctx=ctx) / base
        return r, r_bar

    @staticmethod
    @precision_scope
    def determinant_sequence(table: MomentTable, N_max: int, ctx: Optional[PrecisionContext] = None) -> List[mpc]:
        """I⁰_0 … I⁰_{N_max}"""
        return [ToeplitzOracle.toeplitz_det(0, N, table, ctx=ctx) for N in range(N_max + 1)]

    @staticmethod
    @precision_scope
    def reflection_sequence(table: MomentTable, N_max: int,
                            ctx: Optional[PrecisionContext] = None) -> List[Tuple[mpc, mpc]]:
        """(r_N, r̄_N)，N = 0 … N_max"""
        return [ToeplitzOracle.reflection_from_dets(N, table, ctx=ctx) for N in range(N_max + 1)]
