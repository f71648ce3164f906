# -*- coding: utf-8 -*-
"""
整數分拆工具

分拆 κ 以弱遞減的正整數 tuple 表示（尾端的 0 會被去除），提供列舉、鉤長乘積、
廣義 Pochhammer 符號與 Schur 多項式在等參數 (t, …, t) 的值。
"""
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple

from mpmath import mpc, mpf
from pydantic import BaseModel, ConfigDict, field_validator

from proj_util_pkg.common.precision import PrecisionContext, precision_scope


class Partition(BaseModel):
    """整數分拆 κ = (κ₁ ≥ κ₂ ≥ … > 0)"""

    model_config = ConfigDict(frozen=True)

    parts: Tuple[int, ...] = ()

    @field_validator("parts", mode="before")
    @classmethod
    def _normalize(cls, value) -> Tuple[int, ...]:
        parts = tuple(int(p) for p in value)
        if any(p < 0 for p in parts):
            raise ValueError("分拆的部分必須為非負整數")
        if any(parts[j] < parts[j + 1] for j in range(len(parts) - 1)):
            raise ValueError(f"分拆必須弱遞減: {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        return parts

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def part(self, j: int) -> int:
        """κ_j（j 從 1 起算，超出長度為 0）"""
        return self.parts[j - 1] if 1 <= j <= len(self.parts) else 0

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition()
        return Partition(parts=tuple(sum(1 for p in self.parts if p >= j) for j in range(1, self.parts[0] + 1)))

    def boxes(self) -> Iterator[Tuple[int, int]]:
        """Young 圖的方格 (i, j)，列 i、行 j 均從 1 起算"""
        for i, row in enumerate(self.parts, start=1):
            for j in range(1, row + 1):
                yield i, j

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")" if self.parts else "∅"


class PartitionTools:
    """分拆的組合量計算器"""

    @staticmethod
    def partitions_of(weight: int, max_length: int, max_part: Optional[int] = None) -> List[Partition]:
        """
        列舉 |κ| = weight、l(κ) ≤ max_length、κ₁ ≤ max_part 的分拆

        順序為字典序由大到小，例如 weight=3 得到 (3), (2,1), (1,1,1)。
        """
        if weight < 0 or max_length < 0:
            raise ValueError("weight 與 max_length 必須為非負整數")
        cap = weight if max_part is None else min(weight, max_part)
        return [Partition(parts=parts) for parts in _descending_parts(weight, max_length, cap)]

    @staticmethod
    def partitions_up_to(weight: int, max_length: int) -> List[Partition]:
        """
        列舉 |κ| ≤ weight 且 l(κ) ≤ max_length 的所有分拆

        Args:
            weight: 最大權重
            max_length: 最大長度

        Returns:
            先依權重、同權重內依字典序由大到小排列的分拆列表
        """
        result: List[Partition] = []
        for w in range(weight + 1):
            result.extend(PartitionTools.partitions_of(w, max_length))
        return result

    @staticmethod
    def hook_product(kappa: Partition) -> int:
        """鉤長乘積 h_κ = ∏ (a(i,j) + l(i,j) + 1)"""
        return _hook_product(kappa.parts)

    @staticmethod
    def content_product(kappa: Partition, N: int) -> int:
        """∏_{(i,j)∈κ} (N + j - i)"""
        return _content_product(kappa.parts, N)

    @staticmethod
    @precision_scope
    def gen_pochhammer(a, kappa: Partition, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        廣義 Pochhammer 符號 [a]_κ = ∏_j (a - j + 1)_{κ_j}

        Args:
            a: 複數
            kappa: 分拆
            ctx: 精度設定

        Returns:
            [a]_κ，[a]_∅ = 1
        """
        a = mpc(a)
        result = mpc(1)
        for j, row in enumerate(kappa.parts, start=1):
            base = a - j + 1
            for k in range(row):
                result *= base + k
            if result == 0:
                return result
        return result

    @staticmethod
    @precision_scope
    def schur_equal_args(kappa: Partition, t, N: int, ctx: Optional[PrecisionContext] = None) -> mpc:
        """
        Schur 多項式在 N 個相同參數的值 s_κ(t, …, t)

        使用鉤長-內容公式 t^{|κ|} ∏(N+j-i)/h_κ；l(κ) > N 時為 0。
        """
        if kappa.length > N:
            return mpc(0)
        ratio = PartitionTools.hook_content_ratio(kappa, N)
        return mpc(t) ** kappa.weight * mpf(ratio.numerator) / ratio.denominator

    @staticmethod
    def hook_content_ratio(kappa: Partition, N: int) -> Fraction:
        """∏(N+j-i)/h_κ 的有理數值"""
        if kappa.length > N:
            return Fraction(0)
        return Fraction(_content_product(kappa.parts, N), _hook_product(kappa.parts))


def _descending_parts(weight: int, max_length: int, max_part: int) -> Iterator[Tuple[int, ...]]:
    if weight == 0:
        yield ()
        return
    if max_length == 0:
        return
    for first in range(min(weight, max_part), 0, -1):
        for rest in _descending_parts(weight - first, max_length - 1, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _hook_product(parts: Tuple[int, ...]) -> int:
    conjugate = [sum(1 for p in parts if p >= j) for j in range(1, (parts[0] if parts else 0) + 1)]
    product = 1
    for i, row in enumerate(parts, start=1):
        for j in range(1, row + 1):
            product *= (row - j) + (conjugate[j - 1] - i) + 1
    return product


@lru_cache(maxsize=None)
def _content_product(parts: Tuple[int, ...], N: int) -> int:
    product = 1
    for i, row in enumerate(parts, start=1):
        for j in range(1, row + 1):
            product *= N + j - i
    return product
