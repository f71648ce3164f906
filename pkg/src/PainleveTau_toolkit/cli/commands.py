# -*- coding: utf-8 -*-
"""
命令列指令

    tau          Toeplitz 行列式 I_N（τ 函數）
    reflections  反射係數 r_N、r̄_N，或 dpv-prop 的 (f, g)
    cue-gap      CUE 間隙生成函數 E_N
    cue-moment   CUE 特徵多項式動差 F_N
    ising        Ising 對角相關 ⟨σ₀₀σ_NN⟩
    hyp2f1       相同參數的超幾何函數 2F1^(1)
    verify       內建驗證矩陣

複數參數寫成 "re,im"；t 也可以改用 --phi 指定（t = e^{iφ}）。
結束代碼：0 成功、2 未收斂、3 前置條件不成立、4 方法間不一致。
"""
import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Literal, Optional

import pandas as pd
from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, Field, field_validator

from applications.cue import CueApplications, CueGapRun, CueMomentRun
from applications.ising import IsingApplications, IsingRun
from cli.panels import CellResult, PANELS, panel_cells, run_cell
from cli.pipelines import (HYP_TOLERANCE, METHOD_ALL, METHOD_DPV_PROP, METHOD_HYP, METHODS, agreement_table,
                           build_params, dpv_states, general_table, hyp_context, reflection_methods,
                           reflections_by_method, tau_by_method, tau_methods)
from cli.report import RunReport, validate_payload
from dpv.fg_system import DpvSystem
from hypergeometric.series import PartitionHypergeometric
from proj_util_pkg.common.errors import DisagreementError, PainleveToolkitError
from proj_util_pkg.common.precision import PrecisionContext, as_complex, relative_error
from proj_util_pkg.settings import MIN_DIGITS, settings
from recurrences.engine import METHOD_ORACLE, METHOD_STEP_22
from recurrences.identities import RecurrenceIdentities
from recurrences.reflection_state import ReflectionSequence

logger = logging.getLogger(__name__)

Command = Literal["tau", "reflections", "cue-gap", "cue-moment", "ising", "hyp2f1", "verify"]


class RunConfig(BaseModel):
    """一次命令列執行的完整設定"""

    model_config = ConfigDict(frozen=True)

    command: Command
    params: Dict[str, Optional[str]] = {}
    n_max: int = Field(default=6, ge=1)
    method: str = METHOD_STEP_22
    digits: int = Field(default_factory=lambda: settings.default_digits, ge=MIN_DIGITS)
    format: Literal["csv", "json"] = "csv"
    output: Optional[Path] = None
    panel: str = "default"
    jobs: int = Field(default=1, ge=1)

    @field_validator("method")
    @classmethod
    def _check_method(cls, value: str) -> str:
        if value not in METHODS:
            raise ValueError(f"未知的方法 {value!r}，可用: {', '.join(METHODS)}")
        return value

    @field_validator("panel")
    @classmethod
    def _check_panel(cls, value: str) -> str:
        if value not in PANELS:
            raise ValueError(f"未知的面板 {value!r}，可用: {', '.join(PANELS)}")
        return value

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(decimal_digits=self.digits)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="painleve-tau",
        description="Painlevé VI τ 函數、Toeplitz 行列式與反射係數的高精度計算工具",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def common(sub: argparse.ArgumentParser, n_max: int = 6) -> None:
        sub.add_argument("--n-max", type=int, default=n_max, help="最大索引 N")
        sub.add_argument("--method", choices=METHODS, default=METHOD_STEP_22, help="計算方法")
        sub.add_argument("--digits", type=int, default=None, help="工作精度（十進位位數，預設 PT_DIGITS）")
        sub.add_argument("--format", choices=("csv", "json"), default="csv", help="輸出格式")
        sub.add_argument("--output", type=Path, default=None, help="輸出檔案（未指定時印到標準輸出）")

    def weight_args(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--mu", required=True, help="μ（re[,im]）")
        sub.add_argument("--omega1", required=True, help="ω₁（re[,im]）")
        sub.add_argument("--omega2", default="0", help="ω₂（re[,im]）")
        sub.add_argument("--xi", default="0", help="跳躍參數 ξ（re[,im]）")
        time_group = sub.add_mutually_exclusive_group(required=True)
        time_group.add_argument("--t", help="t（re[,im]）")
        time_group.add_argument("--phi", help="角度 φ，t = e^{iφ}")
        sub.add_argument("--real-modulus", action="store_true",
                         help="以實數正權重 |2cos θ/2|^{2ω₁}|2cos (θ+φ)/2|^{2μ} 解讀參數（需 --phi）")

    for name in ("tau", "reflections"):
        sub = subparsers.add_parser(name, help=f"{name} 序列")
        weight_args(sub)
        common(sub)

    sub = subparsers.add_parser("cue-gap", help="CUE 間隙生成函數 E_N")
    sub.add_argument("--xi", required=True, help="ξ（re[,im]）")
    sub.add_argument("--phi", required=True, help="弧長 φ ∈ (0, 2π)")
    common(sub, n_max=8)

    sub = subparsers.add_parser("cue-moment", help="CUE 特徵多項式動差 F_N")
    sub.add_argument("--mu", required=True, help="μ（re[,im]），Re μ > -1/2")
    sub.add_argument("--u", required=True, help="u（re[,im]）")
    common(sub, n_max=8)

    sub = subparsers.add_parser("ising", help="Ising 對角相關")
    sub.add_argument("--k", required=True, help="k = sinh2K₁ sinh2K₂（低溫可用 inf）")
    sub.add_argument("--phase", choices=("low", "high"), required=True)
    common(sub, n_max=5)

    sub = subparsers.add_parser("hyp2f1", help="超幾何函數 2F1^(1)(a,b;c;t,…,t)")
    for name in ("a", "b", "c", "t"):
        sub.add_argument(f"--{name}", required=True, help=f"{name}（re[,im]）")
    common(sub, n_max=4)

    sub = subparsers.add_parser("verify", help="執行內建驗證矩陣")
    sub.add_argument("--panel", choices=tuple(PANELS), default="default")
    sub.add_argument("--jobs", type=int, default=1, help="平行執行的行程數")
    sub.add_argument("--digits", type=int, default=None)
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--output", type=Path, default=None)
    return parser


PARAM_KEYS = {
    "tau": ("mu", "omega1", "omega2", "xi", "t", "phi", "real_modulus"),
    "reflections": ("mu", "omega1", "omega2", "xi", "t", "phi", "real_modulus"),
    "cue-gap": ("xi", "phi"),
    "cue-moment": ("mu", "u"),
    "ising": ("k", "phase"),
    "hyp2f1": ("a", "b", "c", "t"),
    "verify": (),
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    params = {}
    for key in PARAM_KEYS[args.command]:
        value = getattr(args, key, None)
        if key == "real_modulus":
            value = "true" if value else None
        params[key] = value
    options = {
        "command": args.command,
        "params": params,
        "format": args.format,
        "output": args.output,
    }
    for key in ("n_max", "method", "panel", "jobs", "digits"):
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    return RunConfig(**options)


# ---------------------------------------------------------------- 各指令

def _tau_report(config: RunConfig) -> RunReport:
    ctx = config.ctx
    with mp.workdps(ctx.decimal_digits):
        params = build_params(config.params)
        table = general_table(params, config.n_max, ctx=ctx)
        methods = tau_methods(params) if config.method == METHOD_ALL else [config.method]
        values = {method: tau_by_method(method, params, config.n_max, ctx=ctx, table=table) for method in methods}
        rows = [{"N": N, **{method: values[method][N] for method in methods}} for N in range(config.n_max + 1)]
        agreement = agreement_table(values, ctx) if config.method == METHOD_ALL else None
    return RunReport.from_frame("tau", config.params, config.method, config.digits, pd.DataFrame(rows),
                                agreement=agreement)


def _reflections_report(config: RunConfig) -> RunReport:
    ctx = config.ctx
    with mp.workdps(ctx.decimal_digits):
        params = build_params(config.params)
        table = general_table(params, config.n_max + 1, ctx=ctx)
        if config.method == METHOD_DPV_PROP:
            propagated, images = dpv_states(params, config.n_max + 1, ctx=ctx, table=table)
            residuals = {
                **DpvSystem.closure_residuals(propagated, ctx=ctx).as_floats(),
                "oracle_images": float(DpvSystem.compare_states(propagated, images)),
            }
            frame = pd.DataFrame([state.to_row() for state in propagated])
            return RunReport.from_frame("reflections", config.params, config.method, config.digits, frame,
                                        residuals=residuals)

        methods = reflection_methods(params) if config.method == METHOD_ALL else [config.method]
        sequences: Dict[str, ReflectionSequence] = {
            method: reflections_by_method(method, params, config.n_max + 1, ctx=ctx, table=table)
            for method in methods
        }
        primary = sequences[methods[0]]
        residuals = _scan_residuals(primary, ctx)
        frame = _trim(primary, config.n_max).to_frame()
        agreement = None
        if config.method == METHOD_ALL:
            values = {method: list(seq.r[1:config.n_max + 1]) + list(seq.rbar[1:config.n_max + 1])
                      for method, seq in sequences.items()}
            agreement = agreement_table(values, ctx)
    return RunReport.from_frame("reflections", config.params, config.method, config.digits, frame,
                                residuals=residuals, agreement=agreement)


def _trim(sequence: ReflectionSequence, n_max: int) -> ReflectionSequence:
    return sequence.model_copy(update={"r": sequence.r[:n_max + 1], "rbar": sequence.rbar[:n_max + 1]})


def _scan_residuals(sequence: ReflectionSequence, ctx: PrecisionContext) -> Dict[str, mpf]:
    worst: Dict[str, mpf] = {}
    if sequence.N_max < 3:
        return worst
    for report in RecurrenceIdentities.scan(sequence, ctx=ctx):
        for name, value in report.residuals.items():
            worst[name] = max(worst.get(name, mpf(0)), mpf(value))
    return worst


def _cue_gap_report(config: RunConfig) -> RunReport:
    ctx = config.ctx
    with mp.workdps(ctx.decimal_digits):
        xi, phi = as_complex(config.params["xi"]), mpf(config.params["phi"])
        run: Optional[CueGapRun] = None
        values: Dict[str, List] = {}
        if config.method != METHOD_ORACLE:
            run = CueApplications.cue_gap_sequence(xi, phi, config.n_max, ctx=ctx)
            values["cue-recurrence"] = run.E_values
        if config.method in (METHOD_ORACLE, METHOD_ALL):
            values[METHOD_ORACLE] = CueApplications.gap_oracle(xi, phi, config.n_max, ctx=ctx)
        if run is not None:
            frame = run.to_frame()
            residuals = {"quadratic_relation": run.quadratic_residual,
                         "first_value": abs(run.E_values[1] - (1 - xi * phi / (2 * mp.pi)))}
        else:
            frame = pd.DataFrame([{"N": N, "E": value, "method": METHOD_ORACLE}
                                  for N, value in enumerate(values[METHOD_ORACLE])])
            residuals = {}
        agreement = agreement_table(values, ctx) if config.method == METHOD_ALL else None
    return RunReport.from_frame("cue-gap", config.params, config.method, config.digits, frame,
                                residuals=residuals, agreement=agreement)


def _cue_moment_report(config: RunConfig) -> RunReport:
    ctx = config.ctx
    with mp.workdps(ctx.decimal_digits):
        mu, u = as_complex(config.params["mu"]), as_complex(config.params["u"])
        if config.method == METHOD_ORACLE:
            if abs(u) > 1:
                logger.error("行列式計算 F_N 需要 |u| ≤ 1")
                raise PainleveToolkitError("行列式計算 F_N 需要 |u| ≤ 1，請改用遞迴")
            oracle = CueApplications.moment_oracle(mu, u, config.n_max, ctx=ctx)
            run = CueMomentRun(mu=mu, u=u, F_values=oracle, method=METHOD_ORACLE)
            return RunReport.from_frame("cue-moment", config.params, config.method, config.digits, run.to_frame())

        run = CueApplications.cue_moment_sequence(mu, u, config.n_max, ctx=ctx)
        residuals = {}
        if abs(u) != 1 and u != 0 and config.n_max >= 2:
            residuals = CueApplications.charpoly_reflection_residual(
                mu, u if abs(u) < 1 else 1 / u, config.n_max, ctx=ctx).residuals
        agreement = None
        if config.method == METHOD_ALL and abs(u) <= 1:
            agreement = agreement_table({run.method: run.F_values,
                                         METHOD_ORACLE: CueApplications.moment_oracle(mu, u, config.n_max, ctx=ctx)},
                                        ctx)
    return RunReport.from_frame("cue-moment", config.params, config.method, config.digits, run.to_frame(),
                                residuals=residuals, agreement=agreement)


def _parse_k(text: str) -> mpf:
    return mp.inf if text.strip().lower() in ("inf", "infinity") else mpf(text)


def _ising_report(config: RunConfig) -> RunReport:
    ctx = config.ctx
    with mp.workdps(ctx.decimal_digits):
        k, phase = _parse_k(config.params["k"]), config.params["phase"]
        runs: Dict[str, IsingRun] = {}
        if config.method in (METHOD_ORACLE, METHOD_ALL):
            runs[METHOD_ORACLE] = IsingApplications.ising_oracle(k, phase, config.n_max, ctx=ctx)
        if config.method == METHOD_HYP or (config.method == METHOD_ALL and _ising_hyp_applicable(k, phase)):
            runs[METHOD_HYP] = _ising_hyp_run(k, phase, config.n_max, ctx)
        if config.method not in (METHOD_ORACLE, METHOD_HYP):
            runs["ising-recurrence"] = IsingApplications.ising_diagonal(k, phase, config.n_max, ctx=ctx)
        if config.method == METHOD_ALL and phase == "low" and not mp.isinf(k):
            borodin = [mpc(1)] + [IsingApplications.borodin_correlation(k, N, ctx=ctx)
                                  for N in range(1, config.n_max + 1)]
            runs["borodin"] = IsingRun(k=k, phase=phase, correlations=borodin, r_values=[], rbar_values=[],
                                       method="borodin")

        primary = runs.get("ising-recurrence") or next(iter(runs.values()))
        residuals = {}
        if phase == "low" and k == 1:
            closed = IsingApplications.critical_point(config.n_max)
            residuals["critical_point"] = max(relative_error(a, b)
                                              for a, b in zip(primary.correlations, closed.correlations))
        agreement = None
        if config.method == METHOD_ALL and METHOD_ORACLE in runs:
            agreement = agreement_table({name: run.correlations for name, run in runs.items()}, ctx)
    return RunReport.from_frame("ising", config.params, config.method, config.digits, primary.to_frame(),
                                residuals=residuals, agreement=agreement)


def _ising_hyp_applicable(k: mpf, phase: str) -> bool:
    """2F1^(1) 路徑只在 t = 1/k² 或 k² 不超過 0.7 時使用"""
    if mp.isinf(k):
        return False
    t = 1 / k ** 2 if phase == "low" else k ** 2
    return 0 < t <= mpf(7) / 10


def _ising_hyp_run(k: mpf, phase: str, n_max: int, ctx: PrecisionContext) -> IsingRun:
    hyp_ctx = hyp_context(ctx)
    triples = [IsingApplications.ising_via_hyp(k, phase, N, ctx=hyp_ctx, tolerance=HYP_TOLERANCE)
               for N in range(1, n_max + 1)]
    return IsingRun(k=k, phase=phase, correlations=[mpc(1)] + [c for c, _, _ in triples],
                    r_values=[mpc(1)] + [r for _, r, _ in triples],
                    rbar_values=[mpc(1)] + [rb for _, _, rb in triples], method=METHOD_HYP)


def _hyp2f1_report(config: RunConfig) -> RunReport:
    ctx = config.ctx
    with mp.workdps(ctx.decimal_digits):
        a, b, c, t = (as_complex(config.params[name]) for name in ("a", "b", "c", "t"))
        rows = []
        tails = {}
        converged = True
        for N in range(1, config.n_max + 1):
            value, diagnostics = PartitionHypergeometric.hyp_2f1(a, b, c, t, N, ctx=ctx)
            rows.append({"N": N, "value": value, "max_weight_used": diagnostics.max_weight_used,
                         "terms": diagnostics.terms, "terminating": diagnostics.terminating,
                         "evaluation": diagnostics.method})
            tails[f"tail_N{N}"] = diagnostics.tail_estimate
            converged = converged and diagnostics.converged
    return RunReport.from_frame("hyp2f1", config.params, METHOD_HYP, config.digits, pd.DataFrame(rows),
                                residuals=tails, converged=converged)


HANDLERS: Dict[str, Callable[[RunConfig], RunReport]] = {
    "tau": _tau_report,
    "reflections": _reflections_report,
    "cue-gap": _cue_gap_report,
    "cue-moment": _cue_moment_report,
    "ising": _ising_report,
    "hyp2f1": _hyp2f1_report,
}


def execute(config: RunConfig) -> RunReport:
    """依設定計算並回傳報告（不寫檔）"""
    logger.info(f"執行 {config.command}，方法 {config.method}，精度 {config.digits} 位，N ≤ {config.n_max}")
    return HANDLERS[config.command](config)


def emit(report: RunReport, config: RunConfig) -> None:
    """寫出報告；未指定輸出檔時印到標準輸出"""
    if config.output is not None:
        report.write(config.output, config.format)
        return
    if config.format == "json":
        print(json.dumps(report.to_payload(), indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(report.to_frame().to_csv(index=False), end="")


def run(config: RunConfig) -> int:
    """
    執行一個計算指令

    Returns:
        結束代碼：0 成功、2 未收斂、3 前置條件不成立、4 方法間不一致
    """
    if config.command == "verify":
        return verify(config)
    try:
        report = execute(config)
    except PainleveToolkitError as exc:
        print(f"❌ {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    problems = validate_payload(report.to_payload())
    if problems:
        logger.warning(f"報告格式問題: {problems}")
    emit(report, config)

    failed = [row["method"] for row in report.diagnostics.agreement if not row["agrees"]]
    if failed:
        worst = max(row["worst_relative_error"] for row in report.diagnostics.agreement if not row["agrees"])
        error = DisagreementError(f"方法 {', '.join(failed)} 與行列式不一致", worst=worst)
        print(f"❌ {type(error).__name__}: {error}（最大相對誤差 {worst:.3e}）", file=sys.stderr)
        return error.exit_code
    if not report.diagnostics.converged:
        return 2
    return 0


def verify_results(config: RunConfig) -> List[CellResult]:
    """執行面板的每一格；jobs > 1 時以多行程平行，結果順序與格子順序相同"""
    cells = panel_cells(config.panel)
    logger.info(f"驗證面板 {config.panel}：{len(cells)} 格，精度 {config.digits} 位，{config.jobs} 個行程")
    if config.jobs == 1:
        return [run_cell(cell, config.digits) for cell in cells]
    with ProcessPoolExecutor(max_workers=config.jobs) as executor:
        return list(executor.map(run_cell, cells, [config.digits] * len(cells)))


def verify(config: RunConfig) -> int:
    """
    執行驗證矩陣並輸出通過／失敗表

    Returns:
        全部通過為 0，任何一格失敗為 4
    """
    results = verify_results(config)
    frame = pd.DataFrame([result.to_row() for result in results])
    report = RunReport.from_frame(
        "verify", {"panel": config.panel}, METHOD_ALL, config.digits, frame,
        residuals={result.name: result.worst for result in results},
        converged=all(result.passed for result in results),
    )
    if config.output is not None:
        report.write(config.output, config.format)
    else:
        print(frame.to_string(index=False))

    failed = [result.name for result in results if not result.passed]
    if failed:
        print(f"❌ {len(failed)} 格未通過: {', '.join(failed)}", file=sys.stderr)
        return DisagreementError.exit_code
    print(f"✅ {len(results)} 格全部通過", file=sys.stderr)
    return 0
