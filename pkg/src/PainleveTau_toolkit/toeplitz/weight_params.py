# -*- coding: utf-8 -*-
"""
權重參數

權重 w(z) = t^{-μ} z^{-μ-ω} (1+z)^{2ω₁} (1+tz)^{2μ}，並在弧 θ ∈ (π-φ, π) 上乘以 (1-ξ)。
冪次一律取主分支；t 在單位圓上時 t^s 以 e^{isφ}（φ ∈ [0, 2π)）定義。
"""
from typing import Any, Optional

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from proj_util_pkg.common.precision import PARSE_DIGITS, ComplexLike, as_complex

# 判斷 |t| = 1 的容許誤差（參數以 PARSE_DIGITS 位解析，故可取得很嚴）
UNIT_CIRCLE_TOL = mpf("1e-40")


class WeightParams(BaseModel):
    """權重參數 (μ, ω₁, ω₂, ξ, t)"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mu: Any
    omega1: Any
    omega2: Any = mpc(0)
    xi: Any = mpc(0)
    t: Any
    phi: Optional[Any] = None

    @field_validator("mu", "omega1", "omega2", "xi", "t", mode="before")
    @classmethod
    def _to_complex(cls, value: ComplexLike) -> mpc:
        return as_complex(value)

    @field_validator("phi", mode="before")
    @classmethod
    def _to_angle(cls, value) -> Optional[mpf]:
        if value is None:
            return None
        with mp.workdps(PARSE_DIGITS):
            angle = mpf(value) if not isinstance(value, str) else mpf(value.strip())
            two_pi = 2 * mp.pi
            return angle - two_pi * mp.floor(angle / two_pi)

    @model_validator(mode="after")
    def _check_circle(self) -> "WeightParams":
        if self.xi != 0 and not self.on_circle:
            raise ValueError("ξ ≠ 0 時 t 必須位於單位圓上 (|t| = 1)")
        return self

    @classmethod
    def from_phi(cls, mu: ComplexLike, omega1: ComplexLike, omega2: ComplexLike = 0,
                 xi: ComplexLike = 0, phi: ComplexLike = 0) -> "WeightParams":
        """以角度 φ 建立，t = e^{iφ}"""
        with mp.workdps(PARSE_DIGITS):
            angle = mpf(phi) if not isinstance(phi, str) else mpf(phi.strip())
            return cls(mu=mu, omega1=omega1, omega2=omega2, xi=xi, t=mp.expjpi(angle / mp.pi), phi=angle)

    @classmethod
    def real_modulus(cls, mu: ComplexLike, omega1: ComplexLike, phi: ComplexLike,
                     xi: ComplexLike = 0) -> "WeightParams":
        """
        實數正權重 |2cos θ/2|^{2ω₁} |2cos (θ+φ)/2|^{2μ}（弧上乘 1-ξ）

        主分支權重在弧上多出 e^{-2πiμ}，故以等效跳躍 ξ_eff = 1-(1-ξ)e^{2πiμ} 表示。
        """
        with mp.workdps(PARSE_DIGITS):
            mu_c = as_complex(mu)
            xi_eff = 1 - (1 - as_complex(xi)) * mp.expjpi(2 * mu_c)
            return cls.from_phi(mu=mu_c, omega1=omega1, omega2=0, xi=xi_eff, phi=phi)

    @property
    def omega(self) -> mpc:
        return self.omega1 + mpc(0, 1) * self.omega2

    @property
    def omega_bar(self) -> mpc:
        return self.omega1 - mpc(0, 1) * self.omega2

    @property
    def on_circle(self) -> bool:
        with mp.workdps(PARSE_DIGITS):
            return abs(abs(self.t) - 1) <= UNIT_CIRCLE_TOL

    @property
    def angle(self) -> Optional[mpf]:
        """t = e^{iφ} 的 φ ∈ [0, 2π)；t 不在單位圓上時為 None"""
        if self.phi is not None:
            return self.phi
        if not self.on_circle:
            return None
        with mp.workdps(PARSE_DIGITS):
            arg = mp.arg(self.t)
            return arg + 2 * mp.pi if arg < 0 else arg

    def t_power(self, s) -> mpc:
        """t^s：單位圓上取 e^{isφ}，否則取主分支"""
        angle = self.angle
        if angle is not None:
            return mp.exp(mpc(0, 1) * s * angle)
        return mpc(self.t) ** s

    def dual(self) -> "WeightParams":
        """
        z ↦ 1/z 的對偶參數：ω₂ ↦ -ω₂、t ↦ 1/t

        r̄_N 滿足的關係式即為 r_N 的關係式在對偶參數下、r 與 r̄ 互換後的形式。
        """
        angle = self.angle
        if angle is not None:
            with mp.workdps(PARSE_DIGITS):
                dual_angle = (2 * mp.pi - angle) if angle != 0 else mpf(0)
                return WeightParams(mu=self.mu, omega1=self.omega1, omega2=-self.omega2,
                                    xi=self.xi, t=1 / mpc(self.t), phi=dual_angle)
        return WeightParams(mu=self.mu, omega1=self.omega1, omega2=-self.omega2, xi=self.xi, t=1 / mpc(self.t))

    def describe(self) -> dict:
        """輸出用的參數字典（字串以保留精度）"""
        return {
            "mu": mp.nstr(self.mu, 20),
            "omega1": mp.nstr(self.omega1, 20),
            "omega2": mp.nstr(self.omega2, 20),
            "xi": mp.nstr(self.xi, 20),
            "t": mp.nstr(self.t, 20),
            "phi": None if self.angle is None else mp.nstr(self.angle, 20),
        }
