# -*- coding: utf-8 -*-
"""
反射係數狀態與序列

ReflectionState 保存索引 N 附近的滑動視窗（N-3 … N）；ReflectionSequence 保存整段
序列並可切出任一索引的視窗。l_N/κ_N 以和式 Σ_{j=1}^N r_j r̄_{j-1} 累加。
"""
from typing import Any, Dict, List, Optional

import pandas as pd
from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict

from toeplitz.weight_params import WeightParams

WINDOW_DEPTH = 4


class ReflectionState(BaseModel):
    """索引 N 的反射係數視窗"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    N: int
    params: WeightParams
    r_window: Dict[int, Any]
    rbar_window: Dict[int, Any]
    l_window: Dict[int, Any]
    lbar_window: Dict[int, Any]

    @classmethod
    def seed(cls, params: WeightParams, r1, rbar1) -> "ReflectionState":
        """以 r_0 = r̄_0 = 1、r_1、r̄_1 建立 N = 1 的狀態（r_{-1} = r̄_{-1} = 0）"""
        r1, rbar1 = mpc(r1), mpc(rbar1)
        return cls(
            N=1,
            params=params,
            r_window={-1: mpc(0), 0: mpc(1), 1: r1},
            rbar_window={-1: mpc(0), 0: mpc(1), 1: rbar1},
            l_window={0: mpc(0), 1: r1},
            lbar_window={0: mpc(0), 1: rbar1},
        )

    def r(self, j: int) -> mpc:
        return self.r_window[j]

    def rbar(self, j: int) -> mpc:
        return self.rbar_window[j]

    def l(self, j: int) -> mpc:
        return self.l_window[j]

    def lbar(self, j: int) -> mpc:
        return self.lbar_window[j]

    def has(self, *indices: int) -> bool:
        return all(j in self.r_window and j in self.rbar_window for j in indices)

    @property
    def r_N(self) -> mpc:
        return self.r_window[self.N]

    @property
    def rbar_N(self) -> mpc:
        return self.rbar_window[self.N]

    @property
    def l_ratio(self) -> mpc:
        """l_N/κ_N"""
        return self.l_window[self.N]

    @property
    def lbar_ratio(self) -> mpc:
        """l̄_N/κ_N"""
        return self.lbar_window[self.N]

    def kappa_ratio(self, j: Optional[int] = None) -> mpc:
        """κ²_{j-1}/κ²_j = 1 - r_j r̄_j"""
        j = self.N if j is None else j
        return 1 - self.r_window[j] * self.rbar_window[j]

    def advanced(self, r_next, rbar_next) -> "ReflectionState":
        """加入 r_{N+1}、r̄_{N+1} 後的新狀態（視窗往前移動）"""
        n_next = self.N + 1
        keep = range(n_next - WINDOW_DEPTH + 1, n_next)
        r_window = {j: v for j, v in self.r_window.items() if j in keep}
        rbar_window = {j: v for j, v in self.rbar_window.items() if j in keep}
        r_window[n_next] = mpc(r_next)
        rbar_window[n_next] = mpc(rbar_next)
        l_window = {j: v for j, v in self.l_window.items() if j in keep}
        lbar_window = {j: v for j, v in self.lbar_window.items() if j in keep}
        l_window[n_next] = self.l_window[self.N] + r_window[n_next] * self.rbar_window[self.N]
        lbar_window[n_next] = self.lbar_window[self.N] + rbar_window[n_next] * self.r_window[self.N]
        return self.model_copy(update={
            "N": n_next,
            "r_window": r_window,
            "rbar_window": rbar_window,
            "l_window": l_window,
            "lbar_window": lbar_window,
        })


class ReflectionSequence(BaseModel):
    """r_N、r̄_N、l_N/κ_N、l̄_N/κ_N（N = 0 … M）"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: Optional[WeightParams] = None
    r: List[Any]
    rbar: List[Any]
    method: str = "recurrence-22"

    @property
    def N_max(self) -> int:
        return len(self.r) - 1

    @property
    def l(self) -> List[mpc]:
        values = [mpc(0)]
        for j in range(1, len(self.r)):
            values.append(values[-1] + self.r[j] * self.rbar[j - 1])
        return values

    @property
    def lbar(self) -> List[mpc]:
        values = [mpc(0)]
        for j in range(1, len(self.r)):
            values.append(values[-1] + self.rbar[j] * self.r[j - 1])
        return values

    def window(self, N: int) -> ReflectionState:
        """索引 N 的視窗狀態（含 N-3 … N，r_{-1} = r̄_{-1} = 0）"""
        if not 0 <= N <= self.N_max:
            raise IndexError(f"序列只涵蓋 N = 0 … {self.N_max}")
        l_values, lbar_values = self.l, self.lbar
        indices = range(max(-1, N - WINDOW_DEPTH + 1), N + 1)
        r_window = {j: (self.r[j] if j >= 0 else mpc(0)) for j in indices}
        rbar_window = {j: (self.rbar[j] if j >= 0 else mpc(0)) for j in indices}
        return ReflectionState(
            N=N,
            params=self.params,
            r_window=r_window,
            rbar_window=rbar_window,
            l_window={j: l_values[j] for j in indices if j >= 0},
            lbar_window={j: lbar_values[j] for j in indices if j >= 0},
        )

    @classmethod
    def from_states(cls, states: List[ReflectionState], method: str) -> "ReflectionSequence":
        first = states[0]
        r = [first.r(j) for j in range(0, first.N + 1)]
        rbar = [first.rbar(j) for j in range(0, first.N + 1)]
        for state in states[1:]:
            r.append(state.r_N)
            rbar.append(state.rbar_N)
        return cls(params=first.params, r=r, rbar=rbar, method=method)

    def to_frame(self, tau: Optional["TauSequence"] = None) -> pd.DataFrame:
        """輸出成 DataFrame（N, Re r, Im r, Re r̄, Im r̄ [, Re I_N, Im I_N]）"""
        rows = []
        for n, (r, rbar) in enumerate(zip(self.r, self.rbar)):
            row = {
                "N": n,
                "re_r": mp.nstr(mpc(r).real, 30),
                "im_r": mp.nstr(mpc(r).imag, 30),
                "re_rbar": mp.nstr(mpc(rbar).real, 30),
                "im_rbar": mp.nstr(mpc(rbar).imag, 30),
            }
            if tau is not None and n < len(tau.values):
                row["re_I"] = mp.nstr(mpc(tau.values[n]).real, 30)
                row["im_I"] = mp.nstr(mpc(tau.values[n]).imag, 30)
            rows.append(row)
        return pd.DataFrame(rows)


class TauSequence(BaseModel):
    """I_0 … I_M 與比值 1 - r_N r̄_N"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: Optional[WeightParams] = None
    values: List[Any]
    ratios: List[Any]


class ResidualReport(BaseModel):
    """
    恆等式殘差報告

    每個殘差都以參與項的最大絕對值正規化。
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    index: Optional[int] = None
    residuals: Dict[str, Any] = {}

    @property
    def worst(self) -> mpf:
        if not self.residuals:
            return mpf(0)
        return max(mpf(v) for v in self.residuals.values())

    def passed(self, threshold) -> bool:
        return self.worst < threshold

    def merged(self, other: "ResidualReport", label: Optional[str] = None) -> "ResidualReport":
        return ResidualReport(
            label=label or self.label,
            index=self.index,
            residuals={**self.residuals, **other.residuals},
        )

    def as_floats(self) -> Dict[str, float]:
        return {name: float(value) for name, value in self.residuals.items()}


def normalized_residual(*terms) -> mpf:
    """|Σ terms| / max |term|；全部為零時回傳 0"""
    scale = max((abs(mpc(term)) for term in terms), default=mpf(0))
    if scale == 0:
        return mpf(0)
    return abs(sum(terms, mpc(0))) / scale
