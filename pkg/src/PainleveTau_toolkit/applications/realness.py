# -*- coding: utf-8 -*-
"""
實權重的反射係數結構

ω₂ = 0 且 |t| = 1 時二階關係可整理為
    (n+1+μ+ω)[t r_{n+1}/r_n - r̄_{n+1}/r̄_n] + (n-1+μ+ω)[r_{n-1}/r_n - t r̄_{n-1}/r̄_n] = 0，
即 D_n = t r_{n+1} r̄_n - r̄_{n+1} r_n 滿足 (n+μ+ω)(n+1+μ+ω)D_n = 常數。
D 恆為零時 r̄_n = t^n r_n，此時 t^{n/2} r_n 為實數。
"""
import logging
from typing import Optional

from mpmath import mp, mpc, mpf

from proj_util_pkg.common.errors import PreconditionError
from proj_util_pkg.common.precision import PrecisionContext, precision_scope
from recurrences.engine import RecurrenceEngine, p_coef
from recurrences.reflection_state import ReflectionSequence, ResidualReport, normalized_residual
from toeplitz.weight_params import WeightParams

logger = logging.getLogger(__name__)


@precision_scope
def realness_structure(params: WeightParams, N_max: int, ctx: Optional[PrecisionContext] = None,
                       sequence: Optional[ReflectionSequence] = None) -> ResidualReport:
    """
    實權重反射係數的結構殘差（n ≤ N_max）

    Args:
        params: ω₂ = 0、|t| = 1 的權重參數（可帶等效跳躍 ξ）
        N_max: 最大索引
        ctx: 精度設定
        sequence: 已算好的反射係數序列（需涵蓋到 N_max+1），未提供時以 2/2 遞迴計算

    Returns:
        ResidualReport，鍵：
            conjugate          |r̄_n - conj(r_n)|（權重為正實數時成立）
            twist_invariant    (n+μ+ω)(n+1+μ+ω)D_n 相對於 n = 1 的偏差（以 D_n 各項大小正規化）
            t_power_relation   |r̄_n - t^n r_n|
            real_part          |Im(t^{n/2} r_n)|

    Raises:
        PreconditionError: ω₂ ≠ 0 或 |t| ≠ 1
    """
    if params.omega2 != 0 or not params.on_circle:
        logger.error("實權重結構需要 ω₂ = 0 且 |t| = 1")
        raise PreconditionError("realness_structure 需要 ω₂ = 0 且 |t| = 1")
    if sequence is None:
        sequence = RecurrenceEngine.run(params, N_max + 1, ctx=ctx)
    r, rbar = sequence.r, sequence.rbar
    t = mpc(params.t)

    residuals = {name: mpf(0) for name in ("conjugate", "twist_invariant", "t_power_relation", "real_part")}

    def record(name: str, value) -> None:
        residuals[name] = max(residuals[name], mpf(value))

    for n in range(0, N_max + 1):
        record("conjugate", normalized_residual(rbar[n], -mp.conj(r[n])))
        record("t_power_relation", normalized_residual(rbar[n], -params.t_power(n) * r[n]))
        rotated = params.t_power(mpf(n) / 2) * r[n]
        if rotated != 0:
            record("real_part", abs(rotated.imag) / abs(rotated))

    def twisted(n: int):
        left, right = t * r[n + 1] * rbar[n], rbar[n + 1] * r[n]
        weight = p_coef(params, n) * p_coef(params, n + 1)
        return weight * (left - right), abs(weight) * max(abs(left), abs(right))

    # D_n 可以恆為零，偏差以各項的大小而非不變量本身正規化
    values = [twisted(n) for n in range(1, min(N_max, sequence.N_max - 1) + 1)]
    scale = max((size for _, size in values), default=mpf(0))
    if scale != 0:
        reference = values[0][0]
        for value, _ in values[1:]:
            record("twist_invariant", abs(value - reference) / scale)
    return ResidualReport(label="realness", residuals=residuals)
