# -*- coding: utf-8 -*-
"""
各計算方法的共同入口

命令列與驗證矩陣都透過這裡依方法名稱取得 τ 序列、反射係數序列或 (f, g) 序列，
並以行列式結果為基準建立交叉比對表。
"""
import logging
from typing import Dict, List, Mapping, Optional, Tuple

import pandas as pd
from mpmath import mp, mpc, mpf

from dpv.fg_system import DpvState, DpvSystem
from dpv.schemes import SCHEME_L01, SCHEME_L14, TauSchemes
from hypergeometric.series import PartitionHypergeometric
from proj_util_pkg.common.errors import PreconditionError
from proj_util_pkg.common.precision import PrecisionContext, precision_scope, relative_error
from recurrences.engine import METHOD_ORACLE, METHOD_STEP_21, METHOD_STEP_22, RecurrenceEngine
from recurrences.reflection_state import ReflectionSequence
from toeplitz.determinants import ToeplitzOracle
from toeplitz.moments import MomentCalculator, MomentTable
from toeplitz.weight_params import WeightParams

logger = logging.getLogger(__name__)

METHOD_DPV_PROP = "dpv-prop"
METHOD_HYP = "hyp"
METHOD_ALL = "all"
METHODS = (METHOD_STEP_22, METHOD_STEP_21, METHOD_DPV_PROP, SCHEME_L01, SCHEME_L14, METHOD_HYP, METHOD_ORACLE,
           METHOD_ALL)

# 分拆級數的收斂門檻與權重上限（行列式比對只要求到 10^-20）
HYP_TOLERANCE = mpf("1e-22")
HYP_AGREEMENT = mpf("1e-20")
HYP_MAX_WEIGHT = 100

# dPV 方案的非線性映射會放大捨入誤差
SCHEME_AGREEMENT = mpf("1e-25")


def build_params(spec: Mapping[str, str]) -> WeightParams:
    """
    由字串參數建立 WeightParams

    有 phi 時 t = e^{iφ}；real_modulus 為真時改用實數正權重的等效跳躍。
    """
    values = {key: value for key, value in spec.items() if value is not None}
    if values.pop("real_modulus", None) in ("1", "true", True):
        return WeightParams.real_modulus(mu=values["mu"], omega1=values["omega1"], phi=values["phi"],
                                         xi=values.get("xi", "0"))
    if "phi" in values:
        values.pop("t", None)
        return WeightParams.from_phi(**values)
    return WeightParams(**values)


def hyp_context(ctx: PrecisionContext) -> PrecisionContext:
    return ctx.model_copy(update={"max_partition_weight": max(ctx.max_partition_weight, HYP_MAX_WEIGHT)})


@precision_scope
def general_table(params: WeightParams, n_max: int, ctx: Optional[PrecisionContext] = None) -> MomentTable:
    """w_{-n_max-1} … w_{n_max+1}"""
    return MomentCalculator.build_table("general", range(-n_max - 1, n_max + 2), params, ctx=ctx)


def tau_methods(params: WeightParams) -> List[str]:
    """method=all 時可套用於 τ 的方法"""
    methods = [METHOD_STEP_22]
    if params.omega_bar != params.omega:
        methods.append(METHOD_STEP_21)
    methods += [SCHEME_L01, SCHEME_L14]
    if params.xi == 0 and params.omega1.real > -mpf(1) / 2:
        methods.append(METHOD_HYP)
    methods.append(METHOD_ORACLE)
    return methods


def reflection_methods(params: WeightParams) -> List[str]:
    return [m for m in tau_methods(params) if m not in (SCHEME_L01, SCHEME_L14)]


@precision_scope
def tau_by_method(method: str, params: WeightParams, n_max: int, ctx: Optional[PrecisionContext] = None,
                  table: Optional[MomentTable] = None) -> List[mpc]:
    """
    以指定方法計算 I_0 … I_{n_max}

    Raises:
        PreconditionError: 方法不產生 τ（dpv-prop）或參數不適用
    """
    table = table or general_table(params, n_max, ctx=ctx)
    if method in (METHOD_STEP_22, METHOD_STEP_21):
        sequence = RecurrenceEngine.run(params, n_max, method, ctx=ctx, table=table)
        return RecurrenceEngine.tau_sequence(sequence, table.w(0), ctx=ctx).values
    if method == METHOD_ORACLE:
        return ToeplitzOracle.determinant_sequence(table, n_max, ctx=ctx)
    if method == METHOD_HYP:
        hyp_ctx = hyp_context(ctx)
        return [PartitionHypergeometric.tau_via_hyp(params, N, ctx=hyp_ctx, tolerance=HYP_TOLERANCE,
                                                    with_t_factor=True)
                for N in range(n_max + 1)]
    if method in (SCHEME_L01, SCHEME_L14):
        return TauSchemes.run_scheme(method, params, n_max, ctx=ctx, table=table).T
    logger.error(f"方法 {method} 不產生 τ 序列")
    raise PreconditionError(f"方法 {method} 不產生 τ 序列，請改用 reflections 指令")


@precision_scope
def reflections_by_method(method: str, params: WeightParams, n_max: int, ctx: Optional[PrecisionContext] = None,
                          table: Optional[MomentTable] = None) -> ReflectionSequence:
    """以指定方法計算 (r_N, r̄_N)，N = 0 … n_max"""
    table = table or general_table(params, n_max, ctx=ctx)
    if method in (METHOD_STEP_22, METHOD_STEP_21):
        return RecurrenceEngine.run(params, n_max, method, ctx=ctx, table=table)
    if method == METHOD_ORACLE:
        return RecurrenceEngine.oracle_sequence(params, n_max, ctx=ctx, table=table)
    if method == METHOD_HYP:
        hyp_ctx = hyp_context(ctx)
        pairs = [PartitionHypergeometric.reflection_via_hyp(params, N, ctx=hyp_ctx, tolerance=HYP_TOLERANCE)
                 for N in range(n_max + 1)]
        return ReflectionSequence(params=params, r=[p[0] for p in pairs], rbar=[p[1] for p in pairs],
                                  method=METHOD_HYP)
    logger.error(f"方法 {method} 不產生反射係數序列")
    raise PreconditionError(f"方法 {method} 不產生反射係數序列")


@precision_scope
def dpv_states(params: WeightParams, n_max: int, ctx: Optional[PrecisionContext] = None,
               table: Optional[MomentTable] = None) -> Tuple[List[DpvState], List[DpvState]]:
    """
    由行列式的 r_1、r̄_1 推進 (f, g)，並回傳反射係數映射得到的對照序列

    Returns:
        (dpv_step 序列 N = 0 … n_max-1, 行列式映射序列 N = 0 … n_max-1)
    """
    table = table or general_table(params, n_max, ctx=ctx)
    oracle = RecurrenceEngine.oracle_sequence(params, n_max, ctx=ctx, table=table)
    propagated = DpvSystem.dpv_sequence(params, oracle.r[1], oracle.rbar[1], n_max - 1, ctx=ctx)
    return propagated, DpvSystem.oracle_images(oracle, ctx=ctx)


def threshold_for(method: str, ctx: PrecisionContext) -> mpf:
    if method == METHOD_HYP:
        return max(HYP_AGREEMENT, ctx.half_tol)
    if method in (SCHEME_L01, SCHEME_L14):
        return max(SCHEME_AGREEMENT, ctx.half_tol)
    return ctx.half_tol


def agreement_table(values: Dict[str, List], ctx: PrecisionContext, reference: str = METHOD_ORACLE,
                    thresholds: Optional[Dict[str, mpf]] = None) -> pd.DataFrame:
    """
    各方法相對於基準方法的最大相對誤差

    Args:
        values: 方法名稱 → 數值序列（同索引對齊）
        reference: 基準方法
        thresholds: 個別方法的容許誤差，預設依 threshold_for

    Returns:
        欄位 method、reference、worst_relative_error、threshold、agrees 的 DataFrame
    """
    base = values[reference]
    rows = []
    for method, sequence in values.items():
        if method == reference:
            continue
        worst = max((relative_error(mpc(a), mpc(b)) for a, b in zip(sequence, base)), default=mpf(0))
        limit = (thresholds or {}).get(method, threshold_for(method, ctx))
        rows.append({
            "method": method,
            "reference": reference,
            "worst_relative_error": float(worst),
            "threshold": float(limit),
            "agrees": bool(worst <= limit),
        })
        logger.info(f"{method} 對 {reference} 最大相對誤差 {mp.nstr(worst, 5)}")
    return pd.DataFrame(rows, columns=["method", "reference", "worst_relative_error", "threshold", "agrees"])
