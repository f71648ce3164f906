# -*- coding: utf-8 -*-
"""
內建驗證矩陣

每個 PanelCell 只保存檢查名稱與字串參數，可以直接交給子行程執行。
檢查函數回傳最差的相對誤差或正規化殘差，門檻為 10^{-min(cap_digits, digits/2)}
（或 cell 指定的固定門檻）。
"""
import logging
import time
from typing import Any, Callable, Dict, List, Literal, Optional

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict

from applications.cue import CueApplications
from applications.ising import IsingApplications
from applications.realness import realness_structure
from cli.pipelines import HYP_TOLERANCE, build_params, dpv_states, general_table, hyp_context
from dpv.fg_system import DpvSystem
from dpv.hamiltonian import HamiltonianMaps
from dpv.schemes import SCHEME_L01, SCHEME_L14, TauSchemes
from hypergeometric.series import PartitionHypergeometric
from proj_util_pkg.common.errors import PainleveToolkitError
from proj_util_pkg.common.precision import PrecisionContext, as_complex, relative_error
from recurrences.engine import METHOD_STEP_21, METHOD_STEP_22, RecurrenceEngine
from recurrences.identities import RecurrenceIdentities
from recurrences.reflection_state import normalized_residual
from toeplitz.determinants import ToeplitzOracle
from toeplitz.weight_params import WeightParams

logger = logging.getLogger(__name__)

Group = Literal["core", "hyp", "dpv", "structure", "cue", "ising"]

PANELS: Dict[str, tuple] = {
    "default": ("core", "hyp", "dpv", "structure", "cue", "ising"),
    "core-only": ("core",),
    "hyp-only": ("hyp",),
    "dpv-only": ("dpv",),
    "structure-only": ("structure",),
    "cue-only": ("cue",),
    "ising-only": ("ising",),
}

# ξ = 0 的一般參數（|t| ≤ 0.7，含 Im t < 0 與實數 t）
GENERIC_PANEL: List[Dict[str, str]] = [
    {"mu": "0.31,0.12", "omega1": "0.27,-0.08", "omega2": "0.15,0.05", "t": "0.45,0.2"},
    {"mu": "0.7,-0.2", "omega1": "0.4,0.1", "omega2": "-0.1,0.2", "t": "-0.3,0.5"},
    {"mu": "0.22", "omega1": "0.61", "omega2": "0.33", "t": "0.62"},
    {"mu": "1.1,0.3", "omega1": "0.2,0.25", "omega2": "0.05,-0.1", "t": "0.1,-0.6"},
    {"mu": "0.45,0.05", "omega1": "-0.2,0.1", "omega2": "0.12", "t": "0.55,0.35"},
]

# |t| = 1、ξ ≠ 0
CIRCLE_PANEL: List[Dict[str, str]] = [
    {"mu": "0.3,0.1", "omega1": "0.25", "omega2": "0.1", "xi": "0.4,0.1", "phi": "1.3"},
    {"mu": "0.2", "omega1": "0.35,0.05", "omega2": "0", "xi": "0.7", "phi": "2.4"},
]

# 2F1^(1) 路徑比對用的參數（|t| 到 0.7）
HYP_PANEL: List[Dict[str, str]] = [
    {"mu": "0.31,0.12", "omega1": "0.27,-0.08", "omega2": "0.15,0.05", "t": "0.25,0.1"},
    {"mu": "0.4", "omega1": "0.3", "omega2": "0.2", "t": "0.3"},
    {"mu": "0.22", "omega1": "0.61", "omega2": "0.33", "t": "0.62"},
    {"mu": "0.45,0.05", "omega1": "-0.2,0.1", "omega2": "0.12", "t": "0.55,0.35"},
    {"mu": "0.35", "omega1": "0.15", "omega2": "-0.1", "t": "0.1,0.69"},
]

REAL_PANEL: List[Dict[str, str]] = [
    {"mu": "0.3", "phi": "1.1"},
    {"mu": "0.45", "phi": "2.2"},
]


class PanelCell(BaseModel):
    """驗證矩陣的一格"""

    model_config = ConfigDict(frozen=True)

    name: str
    group: Group
    check: str
    kwargs: Dict[str, Any] = {}
    cap_digits: int = 40
    fixed_threshold: Optional[float] = None

    def threshold(self, digits: int) -> mpf:
        if self.fixed_threshold is not None:
            return mpf(self.fixed_threshold)
        return mpf(10) ** (-min(self.cap_digits, digits // 2))


class CellResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    group: str
    worst: float
    threshold: float
    passed: bool
    error: Optional[str] = None

    def to_row(self) -> Dict[str, Any]:
        return self.model_dump()


# ---------------------------------------------------------------- core

def check_oracle_equivalence(ctx: PrecisionContext, params: Dict[str, str], n_max: int,
                             method: str = METHOD_STEP_22) -> mpf:
    weight = build_params(params)
    table = general_table(weight, n_max, ctx=ctx)
    sequence = RecurrenceEngine.run(weight, n_max, method, ctx=ctx, table=table)
    oracle = RecurrenceEngine.oracle_sequence(weight, n_max, ctx=ctx, table=table)
    return RecurrenceEngine.compare_sequences(sequence, oracle)


def check_identities(ctx: PrecisionContext, params: Dict[str, str], n_max: int, family: str) -> mpf:
    """oracle 序列上的 ladder / bilinear / avm 殘差"""
    weight = build_params(params)
    oracle = RecurrenceEngine.oracle_sequence(weight, n_max + 1, ctx=ctx)
    seed = (oracle.r[1], oracle.rbar[1], oracle.r[2])
    checks: Dict[str, Callable] = {
        "ladder": lambda state: RecurrenceIdentities.residuals(state, ctx=ctx),
        "bilinear": lambda state: RecurrenceIdentities.verify_bilinear(state, ctx=ctx),
        "avm": lambda state: RecurrenceIdentities.check_avm(state, ctx=ctx, seed=seed),
    }
    worst = mpf(0)
    for M in range(1, oracle.N_max):
        worst = max(worst, checks[family](oracle.window(M + 1)).worst)
    if family == "avm":
        worst = max(worst, RecurrenceIdentities.avm_seed_identity(
            as_complex("0.3,0.1"), as_complex("0.7"), as_complex("1.9,-0.2"), as_complex("0.4,0.15"), ctx=ctx))
    return worst


# ---------------------------------------------------------------- hyp

def check_hyp_route(ctx: PrecisionContext, params: Dict[str, str], n_max: int) -> mpf:
    weight = build_params(params)
    table = general_table(weight, n_max, ctx=ctx)
    dets = ToeplitzOracle.determinant_sequence(table, n_max, ctx=ctx)
    oracle = RecurrenceEngine.oracle_sequence(weight, n_max, ctx=ctx, table=table)
    hyp_ctx = hyp_context(ctx)
    worst = mpf(0)
    for N in range(1, n_max + 1):
        tau = PartitionHypergeometric.tau_via_hyp(weight, N, ctx=hyp_ctx, tolerance=HYP_TOLERANCE, with_t_factor=True)
        r, rbar = PartitionHypergeometric.reflection_via_hyp(weight, N, ctx=hyp_ctx, tolerance=HYP_TOLERANCE)
        worst = max(worst, relative_error(tau, dets[N]), relative_error(r, oracle.r[N]),
                    relative_error(rbar, oracle.rbar[N]))
    return worst


def check_gauss_sum(ctx: PrecisionContext, mu: str, omega1: str, omega2: str, n_max: int) -> mpf:
    """截斷情形下 t = 1 的級數值等於 Gamma 乘積"""
    weight = WeightParams(mu=mu, omega1=omega1, omega2=omega2, t=1)
    worst = mpf(0)
    for N in range(1, n_max + 1):
        value, _ = PartitionHypergeometric.hyp_2f1_partition(
            -2 * weight.mu, -weight.mu - weight.omega, N - weight.mu + weight.omega_bar, 1, N, ctx=ctx)
        worst = max(worst, relative_error(value, PartitionHypergeometric.gauss_product(weight, N, ctx=ctx)))
    return worst


# ---------------------------------------------------------------- dpv

def check_dpv_closure(ctx: PrecisionContext, params: Dict[str, str], n_max: int) -> mpf:
    """行列式映射的 (f, g) 代入遞迴，並與 dpv_step 推進的序列比對"""
    weight = build_params(params)
    propagated, images = dpv_states(weight, n_max, ctx=ctx)
    closure = DpvSystem.closure_residuals(images, ctx=ctx).worst
    return max(closure, DpvSystem.compare_states(propagated, images))


def check_schemes(ctx: PrecisionContext, params: Dict[str, str], n_max: int) -> mpf:
    """tau_sequence、L01、L14 三條路徑對行列式的最大相對誤差"""
    weight = build_params(params)
    table = general_table(weight, n_max, ctx=ctx)
    dets = ToeplitzOracle.determinant_sequence(table, n_max, ctx=ctx)
    sequence = RecurrenceEngine.run(weight, n_max, ctx=ctx, table=table)
    worst = max(relative_error(a, b) for a, b in
                zip(RecurrenceEngine.tau_sequence(sequence, table.w(0), ctx=ctx).values, dets))
    for scheme in (SCHEME_L01, SCHEME_L14):
        trace = TauSchemes.run_scheme(scheme, weight, n_max, ctx=ctx, table=table)
        worst = max(worst, TauSchemes.compare_with(trace, dets))
    return worst


def check_l01_oracle_closure(ctx: PrecisionContext, params: Dict[str, str], n_max: int) -> mpf:
    weight = build_params(params)
    convention = TauSchemes.resolve_convention(SCHEME_L01, weight, ctx=ctx)
    oracle = RecurrenceEngine.oracle_sequence(weight, n_max + 1, ctx=ctx)
    return TauSchemes.oracle_l01_closure(oracle, convention=convention, ctx=ctx).worst


def check_hamiltonian_maps(ctx: PrecisionContext, params: Dict[str, str], n_max: int) -> mpf:
    """(q, p) 與反射係數的隱式關係、x³ 對合，以及 x³ 下 L01 與 L14 輔助變數的對應"""
    weight = build_params(params)
    oracle = RecurrenceEngine.oracle_sequence(weight, n_max + 1, ctx=ctx)
    worst = mpf(0)
    for N in range(1, n_max):
        window = oracle.window(N + 1)
        ham = HamiltonianMaps.oracle_qp(window, ctx=ctx, index=N)
        worst = max(worst, HamiltonianMaps.map_qp_reflections(ham, window, ctx=ctx, index=N).worst)
        image = HamiltonianMaps.s4_x3_transform(ham)
        back = HamiltonianMaps.s4_x3_transform(image)
        worst = max(worst, relative_error(back.q, ham.q), relative_error(back.p, ham.p),
                    relative_error(back.t, ham.t))
        g01, f01 = HamiltonianMaps.l01_aux(ham)
        g14, f14 = HamiltonianMaps.l14_aux(image)
        worst = max(worst, relative_error(g14, g01), normalized_residual(f14, -f01))
    return worst


# ---------------------------------------------------------------- structure

def check_realness(ctx: PrecisionContext, mu: str, phi: str, n_max: int) -> mpf:
    weight = WeightParams.real_modulus(mu=mu, omega1=mu, phi=phi)
    return realness_structure(weight, n_max, ctx=ctx).worst


# ---------------------------------------------------------------- cue

def check_cue_gap(ctx: PrecisionContext, xi: str, phi: str, n_max: int) -> mpf:
    xi_c, phi_f = as_complex(xi), mpf(phi)
    run = CueApplications.cue_gap_sequence(xi_c, phi_f, n_max, ctx=ctx)
    oracle = CueApplications.gap_oracle(xi_c, phi_f, n_max, ctx=ctx)
    worst = max(relative_error(a, b) for a, b in zip(run.E_values, oracle))
    exact = relative_error(run.E_values[1], 1 - xi_c * phi_f / (2 * mp.pi))
    return max(worst, exact, run.quadratic_residual)


def check_cue_moment(ctx: PrecisionContext, mu: str, u: str, n_max: int) -> mpf:
    """|u| ≤ 1 對行列式（|u| = 1 時遞迴即 Gamma 乘積），|u| > 1 對 |u|^{2μN}·行列式(1/u)"""
    mu_c, u_c = as_complex(mu), as_complex(u)
    run = CueApplications.cue_moment_sequence(mu_c, u_c, n_max, ctx=ctx)
    modulus = abs(u_c)
    if modulus <= 1:
        reference = CueApplications.moment_oracle(mu_c, u_c, n_max, ctx=ctx)
    else:
        inverse = CueApplications.moment_oracle(mu_c, 1 / u_c, n_max, ctx=ctx)
        reference = [modulus ** (2 * mu_c * N) * value for N, value in enumerate(inverse)]
    return max(relative_error(a, b) for a, b in zip(run.F_values, reference))


# ---------------------------------------------------------------- ising

def check_ising_oracle(ctx: PrecisionContext, k: str, phase: str, n_max: int) -> mpf:
    run = IsingApplications.ising_diagonal(mpf(k), phase, n_max, ctx=ctx)
    oracle = IsingApplications.ising_oracle(mpf(k), phase, n_max, ctx=ctx)
    worst = max(relative_error(a, b) for a, b in zip(run.correlations, oracle.correlations))
    for a, b in zip(run.r_values[1:], oracle.r_values[1:]):
        worst = max(worst, relative_error(a, b))
    for a, b in zip(run.rbar_values[1:], oracle.rbar_values[1:]):
        worst = max(worst, relative_error(a, b))
    return worst


def check_ising_hyp(ctx: PrecisionContext, k: str, phase: str, n_max: int) -> mpf:
    run = IsingApplications.ising_diagonal(mpf(k), phase, n_max, ctx=ctx)
    hyp_ctx = hyp_context(ctx)
    worst = mpf(0)
    for N in range(1, n_max + 1):
        corr, r, rbar = IsingApplications.ising_via_hyp(mpf(k), phase, N, ctx=hyp_ctx, tolerance=HYP_TOLERANCE)
        worst = max(worst, relative_error(corr, run.correlations[N]), relative_error(r, run.r_values[N]),
                    relative_error(rbar, run.rbar_values[N]))
    return worst


def check_ising_critical(ctx: PrecisionContext, n_max: int) -> mpf:
    run = IsingApplications.ising_diagonal(1, "low", n_max, ctx=ctx)
    closed = IsingApplications.critical_point(n_max)
    worst = mpf(0)
    for field in ("correlations", "r_values", "rbar_values"):
        for a, b in zip(getattr(run, field), getattr(closed, field)):
            worst = max(worst, relative_error(a, b))
    return worst


def check_ising_borodin(ctx: PrecisionContext, k: str, n_max: int) -> mpf:
    run = IsingApplications.ising_diagonal(mpf(k), "low", n_max, ctx=ctx)
    return max(relative_error(IsingApplications.borodin_correlation(mpf(k), N, ctx=ctx), run.correlations[N])
               for N in range(1, n_max + 1))


def check_long_range_order(ctx: PrecisionContext, k: str, n: int) -> mpf:
    run = IsingApplications.ising_diagonal(mpf(k), "low", n, ctx=ctx)
    return abs(mpc(run.correlations[n]) - IsingApplications.long_range_order(mpf(k), "low"))


CHECKS: Dict[str, Callable[..., mpf]] = {
    "oracle_equivalence": check_oracle_equivalence,
    "identities": check_identities,
    "hyp_route": check_hyp_route,
    "gauss_sum": check_gauss_sum,
    "dpv_closure": check_dpv_closure,
    "schemes": check_schemes,
    "l01_oracle_closure": check_l01_oracle_closure,
    "hamiltonian_maps": check_hamiltonian_maps,
    "realness": check_realness,
    "cue_gap": check_cue_gap,
    "cue_moment": check_cue_moment,
    "ising_oracle": check_ising_oracle,
    "ising_hyp": check_ising_hyp,
    "ising_critical": check_ising_critical,
    "ising_borodin": check_ising_borodin,
    "long_range_order": check_long_range_order,
}


def default_cells() -> List[PanelCell]:
    cells: List[PanelCell] = []
    for i, params in enumerate(GENERIC_PANEL + CIRCLE_PANEL):
        cells.append(PanelCell(name=f"oracle-22-{i}", group="core", check="oracle_equivalence",
                               kwargs={"params": params, "n_max": 10}, cap_digits=30))
    cells.append(PanelCell(name="oracle-21-0", group="core", check="oracle_equivalence",
                           kwargs={"params": GENERIC_PANEL[0], "n_max": 8, "method": METHOD_STEP_21}, cap_digits=30))
    for family in ("ladder", "bilinear", "avm"):
        for i, params in enumerate(GENERIC_PANEL[:2]):
            cells.append(PanelCell(name=f"{family}-{i}", group="core" if family != "avm" else "structure",
                                   check="identities", kwargs={"params": params, "n_max": 8, "family": family}))

    for i, params in enumerate(HYP_PANEL):
        cells.append(PanelCell(name=f"hyp-{i}", group="hyp", check="hyp_route",
                               kwargs={"params": params, "n_max": 6}, cap_digits=20))
    for mu in ("0.5", "1", "1.5"):
        cells.append(PanelCell(name=f"gauss-sum-{mu}", group="hyp", check="gauss_sum",
                               kwargs={"mu": mu, "omega1": "0.3", "omega2": "0.1", "n_max": 4}, cap_digits=45))

    for i, params in enumerate(GENERIC_PANEL[:3]):
        cells.append(PanelCell(name=f"dpv-closure-{i}", group="dpv", check="dpv_closure",
                               kwargs={"params": params, "n_max": 8}, cap_digits=35))
        cells.append(PanelCell(name=f"schemes-{i}", group="dpv", check="schemes",
                               kwargs={"params": params, "n_max": 8}, cap_digits=30))
    cells.append(PanelCell(name="l01-oracle-closure-0", group="dpv", check="l01_oracle_closure",
                           kwargs={"params": GENERIC_PANEL[0], "n_max": 6}, cap_digits=30))
    cells.append(PanelCell(name="hamiltonian-maps-0", group="dpv", check="hamiltonian_maps",
                           kwargs={"params": GENERIC_PANEL[0], "n_max": 6}, cap_digits=35))

    for i, spec in enumerate(REAL_PANEL):
        cells.append(PanelCell(name=f"realness-{i}", group="structure", check="realness",
                               kwargs={**spec, "n_max": 8}, cap_digits=35))

    for xi in ("0.3", "0.7", "1"):
        for label, phi in (("pi/4", mp.pi / 4), ("pi/2", mp.pi / 2), ("pi", mp.pi)):
            with mp.workdps(60):
                phi_text = mp.nstr(phi, 60)
            cells.append(PanelCell(name=f"cue-gap-{xi}-{label}", group="cue", check="cue_gap",
                                   kwargs={"xi": xi, "phi": phi_text, "n_max": 8}, cap_digits=30))
    for mu in ("0.5", "1", "1.5", "0.37"):
        cells.append(PanelCell(name=f"cue-moment-unit-{mu}", group="cue", check="cue_moment",
                               kwargs={"mu": mu, "u": "1", "n_max": 10}, cap_digits=40))
    for u in ("0.6", "0.36,0.48"):
        cells.append(PanelCell(name=f"cue-moment-{u}", group="cue", check="cue_moment",
                               kwargs={"mu": "0.37", "u": u, "n_max": 8}, cap_digits=30))
    cells.append(PanelCell(name="cue-moment-inverse", group="cue", check="cue_moment",
                           kwargs={"mu": "0.37", "u": "1.6666666666666666666666666666666666666666666666666667",
                                   "n_max": 8}, cap_digits=30))

    cells.append(PanelCell(name="ising-critical", group="ising", check="ising_critical",
                           kwargs={"n_max": 10}, cap_digits=40))
    for k, phase in (("1.2", "low"), ("2", "low"), ("5", "low"), ("0.2", "high"), ("0.5", "high"),
                     ("0.8", "high")):
        cells.append(PanelCell(name=f"ising-oracle-{phase}-{k}", group="ising", check="ising_oracle",
                               kwargs={"k": k, "phase": phase, "n_max": 6}, cap_digits=20))
    for k, phase in (("1.2", "low"), ("2", "low"), ("5", "low"), ("0.2", "high"), ("0.5", "high"), ("0.8", "high")):
        cells.append(PanelCell(name=f"ising-hyp-{phase}-{k}", group="ising", check="ising_hyp",
                               kwargs={"k": k, "phase": phase, "n_max": 6}, cap_digits=20))
    cells.append(PanelCell(name="ising-borodin-2", group="ising", check="ising_borodin",
                           kwargs={"k": "2", "n_max": 6}, cap_digits=20))
    cells.append(PanelCell(name="ising-long-range-2", group="ising", check="long_range_order",
                           kwargs={"k": "2", "n": 20}, fixed_threshold=1e-3))
    return cells


def panel_cells(panel: str) -> List[PanelCell]:
    """
    依面板名稱篩選格子

    Raises:
        ValueError: 未知的面板
    """
    if panel not in PANELS:
        raise ValueError(f"未知的面板 {panel!r}，可用: {', '.join(PANELS)}")
    groups = PANELS[panel]
    return [cell for cell in default_cells() if cell.group in groups]


def run_cell(cell: PanelCell, digits: int) -> CellResult:
    """在獨立的精度設定下執行一格；例外轉為失敗結果"""
    ctx = PrecisionContext(decimal_digits=digits)
    threshold = cell.threshold(digits)
    started = time.perf_counter()
    try:
        with mp.workdps(digits):
            worst = CHECKS[cell.check](ctx, **cell.kwargs)
    except PainleveToolkitError as exc:
        logger.error(f"驗證格 {cell.name} 執行失敗: {exc}")
        return CellResult(name=cell.name, group=cell.group, worst=float("nan"), threshold=float(threshold),
                          passed=False, error=f"{type(exc).__name__}: {exc}")
    logger.debug(f"驗證格 {cell.name} 耗時 {time.perf_counter() - started:.2f}s")
    return CellResult(name=cell.name, group=cell.group, worst=float(worst), threshold=float(threshold),
                      passed=bool(worst < threshold))
