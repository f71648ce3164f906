# -*- coding: utf-8 -*-
"""
任意精度運算設定

所有數值運算都透過 PrecisionContext 取得工作精度；mpmath 的精度是全域狀態，
因此只在 precision_scope 包住的函數內以 mp.workdps 暫時切換。
"""
import functools
import inspect
from typing import Any, Callable, Optional, Union

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from proj_util_pkg.settings import MIN_DIGITS, settings

ComplexLike = Union[int, float, complex, str, mpf, mpc]

# 參數轉換時使用的精度，避免十進位字串在預設 15 位精度下先被截斷
PARSE_DIGITS = 200


class PrecisionContext(BaseModel):
    """工作精度與收斂設定"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    decimal_digits: int = Field(default=60, ge=MIN_DIGITS)
    tolerance: Optional[mpf] = None
    max_series_terms: int = Field(default=5000, gt=0)
    max_partition_weight: int = Field(default=60, gt=0)

    @model_validator(mode="before")
    @classmethod
    def _default_tolerance(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("tolerance") is None:
            digits = data.get("decimal_digits", 60)
            with mp.workdps(int(digits)):
                data = {**data, "tolerance": mpf(10) ** (10 - int(digits))}
        return data

    @field_validator("tolerance", mode="before")
    @classmethod
    def _check_tolerance(cls, value: Any) -> Optional[mpf]:
        if value is None:
            return None
        with mp.workdps(PARSE_DIGITS):
            value = mpf(value)
        if not (0 < value < 1):
            raise ValueError("tolerance 必須介於 0 與 1 之間")
        return value

    @classmethod
    def from_settings(cls, **overrides) -> "PrecisionContext":
        """以環境變數 PT_DIGITS 建立預設精度"""
        return cls(decimal_digits=overrides.pop("decimal_digits", settings.default_digits), **overrides)

    @property
    def tol(self) -> mpf:
        return self.tolerance

    @property
    def half_tol(self) -> mpf:
        """10^(-digits/2)，用於與獨立計算路徑（積分、行列式）的比對"""
        with mp.workdps(self.decimal_digits):
            return mpf(10) ** (-(self.decimal_digits // 2))

    def escalated(self, factor: int = 2) -> "PrecisionContext":
        """提高精度後的新設定（容許誤差維持不變）"""
        return self.model_copy(update={"decimal_digits": self.decimal_digits * factor})


def precision_scope(func: Callable) -> Callable:
    """
    以 ctx 參數的精度執行函數

    被裝飾的函數必須有名為 ctx 的參數；未傳入時使用 PrecisionContext.from_settings()。
    """
    signature = inspect.signature(func)

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        bound = signature.bind(*args, **kwargs)
        bound.apply_defaults()
        ctx = bound.arguments.get("ctx") or PrecisionContext.from_settings()
        bound.arguments["ctx"] = ctx
        with mp.workdps(ctx.decimal_digits):
            return func(*bound.args, **bound.kwargs)

    return wrapper


def as_complex(value: ComplexLike) -> mpc:
    """
    將參數轉為 mpc

    Args:
        value: 數值、mpf/mpc，或 "re" / "re,im" 字串

    Returns:
        以高精度解析的複數
    """
    with mp.workdps(PARSE_DIGITS):
        if isinstance(value, mpc):
            return value
        if isinstance(value, str):
            parts = [p.strip() for p in value.split(",")]
            if len(parts) == 1:
                return mpc(mpf(parts[0]), 0)
            if len(parts) == 2:
                return mpc(mpf(parts[0]), mpf(parts[1]))
            raise ValueError(f"無法解析複數參數: {value!r}")
        if isinstance(value, complex):
            return mpc(value.real, value.imag)
        return mpc(value)


def is_small(value, scale, ctx: PrecisionContext) -> bool:
    """|value| 是否小於 tolerance·max(1, |scale|)"""
    return abs(value) <= ctx.tol * max(mpf(1), abs(scale))


def relative_error(value, reference) -> mpf:
    """相對誤差；參考值為零時改用絕對誤差"""
    denominator = abs(reference)
    if denominator == 0:
        return abs(value - reference)
    return abs(value - reference) / denominator
