# -*- coding: utf-8 -*-
"""
Painlevé VI 的 Hamilton 變數

K = q(q-1)(q-t)p² - [α₄(q-1)(q-t) + α₃q(q-t) + (α₀-1)q(q-1)]p + α₂(α₁+α₂)(q-t)，
參數滿足 α₀+α₁+2α₂+α₃+α₄ = 1。L01 型的 α = (N+1+2ω₁, N+2μ, -N, -μ-ω, -μ-ω̄)，
L14 型的 α = (1-μ-ω, N+2μ, -N, -μ-ω̄, N+2ω₁)。
"""
import logging
from typing import Any, Literal, Optional, Tuple

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from proj_util_pkg.common.errors import DivisionByZero, PreconditionError
from proj_util_pkg.common.precision import PARSE_DIGITS, PrecisionContext, is_small, precision_scope
from recurrences.engine import p_coef, pb_coef
from recurrences.reflection_state import ReflectionState, ResidualReport, normalized_residual
from toeplitz.weight_params import WeightParams

logger = logging.getLogger(__name__)

Scheme = Literal["L01", "L14", "generic"]
Alphas = Tuple[Any, Any, Any, Any, Any]

_SWAPPED = {"L01": "L14", "L14": "L01", "generic": "generic"}
ALPHA_TOL = mpf("1e-25")


def alphas_l01(params: WeightParams, N: int) -> Alphas:
    mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
    return (N + 1 + 2 * params.omega1, N + 2 * mu, mpc(-N), -mu - omega, -mu - omega_bar)


def alphas_l14(params: WeightParams, N: int) -> Alphas:
    mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
    return (1 - mu - omega, N + 2 * mu, mpc(-N), -mu - omega_bar, N + 2 * params.omega1)


def reflection_time(s) -> mpc:
    """
    反射係數隱式關係所用的時間 s/(s-1)（= 1 - τ，τ = 1/(1-s) 為 L01 的 PVI 時間）

    Raises:
        DivisionByZero: s = 1
    """
    s = mpc(s)
    if s == 1:
        raise DivisionByZero("s = 1 時 s/(s-1) 無定義")
    return s / (s - 1)


def hamiltonian_K(q, p, t, alphas: Alphas, ctx: Optional[PrecisionContext] = None) -> mpc:
    """
    K = t(t-1)H

    Args:
        q, p: Hamilton 變數
        t: PVI 時間
        alphas: (α₀, α₁, α₂, α₃, α₄)

    Returns:
        K 的值
    """
    a0, a1, a2, a3, a4 = (mpc(a) for a in alphas)
    q, p, t = mpc(q), mpc(p), mpc(t)
    return (
        q * (q - 1) * (q - t) * p ** 2
        - (a4 * (q - 1) * (q - t) + a3 * q * (q - t) + (a0 - 1) * q * (q - 1)) * p
        + a2 * (a1 + a2) * (q - t)
    )


class HamiltonianState(BaseModel):
    """索引 N 的 (q, p) 與參數 α、時間 t"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    N: int
    q: Any
    p: Any
    t: Any
    alphas: Alphas
    scheme: Scheme = "generic"

    @field_validator("q", "p", "t", mode="before")
    @classmethod
    def _to_complex(cls, value) -> mpc:
        return mpc(value)

    @field_validator("alphas", mode="before")
    @classmethod
    def _to_alphas(cls, value) -> Alphas:
        values = tuple(mpc(a) for a in value)
        if len(values) != 5:
            raise ValueError("alphas 必須有五個分量")
        return values

    @model_validator(mode="after")
    def _check_constraint(self) -> "HamiltonianState":
        a0, a1, a2, a3, a4 = self.alphas
        with mp.workdps(PARSE_DIGITS):
            if abs(a0 + a1 + 2 * a2 + a3 + a4 - 1) > ALPHA_TOL:
                raise ValueError("α₀+α₁+2α₂+α₃+α₄ 必須等於 1")
        return self

    @classmethod
    def for_scheme(cls, params: WeightParams, N: int, q, p, scheme: Scheme, t=None) -> "HamiltonianState":
        """以 L01 或 L14 的 α 建立狀態（t 預設為權重的 t）"""
        alphas = alphas_l01(params, N) if scheme == "L01" else alphas_l14(params, N)
        return cls(N=N, q=q, p=p, t=params.t if t is None else t, alphas=alphas, scheme=scheme)

    @property
    def K(self) -> mpc:
        return hamiltonian_K(self.q, self.p, self.t, self.alphas)


class HamiltonianMaps:
    """Hamilton 變數與 (g, f)、反射係數之間的轉換"""

    @staticmethod
    def s4_x3_transform(ham: HamiltonianState) -> HamiltonianState:
        """
        x³: α₀ ↔ α₄、t ↦ t/(t-1)、q ↦ (t-q)/(t-1)、p ↦ -(t-1)p

        Raises:
            DivisionByZero: t = 1
        """
        t = ham.t
        if t == 1:
            raise DivisionByZero("x³ 在 t = 1 無定義")
        a0, a1, a2, a3, a4 = ham.alphas
        return HamiltonianState(
            N=ham.N,
            q=(t - ham.q) / (t - 1),
            p=-(t - 1) * ham.p,
            t=t / (t - 1),
            alphas=(a4, a1, a2, a3, a0),
            scheme=_SWAPPED[ham.scheme],
        )

    @staticmethod
    def l01_aux(ham: HamiltonianState) -> Tuple[mpc, mpc]:
        """
        L01 型輔助變數

        g = q/(q-1)，f = q(q-1)p + (1-α₂-α₄)(q-1) - α₃q - α₀q(q-1)/(q-t)
        """
        q, p, t = ham.q, ham.p, ham.t
        a0, _, a2, a3, a4 = ham.alphas
        g = q / (q - 1)
        f = q * (q - 1) * p + (1 - a2 - a4) * (q - 1) - a3 * q - a0 * q * (q - 1) / (q - t)
        return g, f

    @staticmethod
    def l14_aux(ham: HamiltonianState) -> Tuple[mpc, mpc]:
        """
        L14 型輔助變數

        g = (q-t)/(q-1)，
        f = [(q-t)(q-1)p + (1-α₀-α₂)(q-1) - α₃(q-t) - α₄(q-t)(q-1)/q]/(1-t)
        """
        q, p, t = ham.q, ham.p, ham.t
        a0, _, a2, a3, a4 = ham.alphas
        g = (q - t) / (q - 1)
        f = ((q - t) * (q - 1) * p + (1 - a0 - a2) * (q - 1) - a3 * (q - t)
             - a4 * (q - t) * (q - 1) / q) / (1 - t)
        return g, f

    @staticmethod
    def dpv_generic_residuals(g, g_next, f_prev, f, t, alphas: Alphas) -> Tuple[mpf, mpf]:
        """
        α 參數化的 dPV 在索引 n 的正規化殘差

        g_{n+1}g_n = t(f_n+1-α₂)(f_n+1-α₀-α₂)/(f_n(f_n+α₃))
        f_n + f_{n-1} = -α₃ + α₁/(g_n-1) + α₄t/(g_n-t)
        """
        a0, a1, a2, a3, a4 = alphas
        first = normalized_residual(g_next * g * f * (f + a3), -t * (f + 1 - a2) * (f + 1 - a0 - a2))
        second = normalized_residual(f, f_prev, a3, -a1 / (g - 1), -a4 * t / (g - t))
        return first, second

    @staticmethod
    def l01_generic_residuals(g, g_next, f_prev, f, t, alphas: Alphas) -> Tuple[mpf, mpf]:
        """
        L01 型 dPV 在索引 n 的正規化殘差

        g_{n+1}g_n = t/(t-1)·(f_n+1-α₂)(f_n+1-α₂-α₄)/(f_n(f_n+α₃))
        f_n + f_{n-1} = -α₃ + α₁/(g_n-1) + α₀t/(t(g_n-1)-g_n)
        """
        a0, a1, a2, a3, a4 = alphas
        first = normalized_residual(g_next * g * f * (f + a3) * (t - 1), -t * (f + 1 - a2) * (f + 1 - a2 - a4))
        second = normalized_residual(f, f_prev, a3, -a1 / (g - 1), -a0 * t / (t * (g - 1) - g))
        return first, second

    @staticmethod
    @precision_scope
    def map_qp_reflections(ham: HamiltonianState, refl: ReflectionState, ctx: Optional[PrecisionContext] = None,
                           index: Optional[int] = None) -> ResidualReport:
        """
        L01 型 (q_N, p_N) 與反射係數的隱式關係殘差

        檢查 q p + μ+ω̄ 的兩種表示、(q-1)p + μ+ω 的兩種表示，以及因式分解
        (N+μ+ω)(N+μ+ω̄) r_N r̄_N = [q p + μ+ω̄][(q-1)p + μ+ω]。
        r_N 或 r̄_N 為零時只檢查因式分解。

        Args:
            ham: L01 型 Hamilton 狀態（PVI 時間 τ = 1/(1-s)）
            refl: 含 r_{N-1} … r_{N+1} 的視窗
            ctx: 精度設定
            index: 索引 N，預設 refl.N - 1

        Returns:
            ResidualReport（鍵 qp_a、qp_b、qp_c、qp_d、factorization）
        """
        params = refl.params
        N = refl.N - 1 if index is None else index
        q, p = ham.q, ham.p
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        S = refl.r(N) * refl.rbar(N)
        A = q * p + mu + omega_bar
        B = (q - 1) * p + mu + omega
        residuals = {
            "factorization": normalized_residual(p_coef(params, N) * pb_coef(params, N) * S, -A * B),
        }
        if refl.r(N) == 0 or refl.rbar(N) == 0 or N == 0:
            return ResidualReport(label="qp-map", index=N, residuals=residuals)

        forms = HamiltonianMaps._implicit_forms(params, refl, N, q)
        residuals["qp_a"] = normalized_residual(A, -forms["a"])
        residuals["qp_b"] = normalized_residual(A, -forms["b"])
        residuals["qp_c"] = normalized_residual(B, -forms["c"])
        residuals["qp_d"] = normalized_residual(B, -forms["d"])
        return ResidualReport(label="qp-map", index=N, residuals=residuals)

    @staticmethod
    @precision_scope
    def oracle_qp(refl: ReflectionState, ctx: Optional[PrecisionContext] = None,
                  index: Optional[int] = None) -> HamiltonianState:
        """
        由反射係數解出 L01 型 (q_N, p_N)

        令 (q-1)p + μ+ω 的兩種表示相等得到 q 的二次方程。兩個根都使 q p + μ+ω̄ 的兩種表示相等
        （兩組表示的乘積恆為 (N+μ+ω)(N+μ+ω̄) r_N r̄_N），因此由第一種表示求 p 後，
        取 q p + μ+ω̄ 與其表示最接近的根。

        Returns:
            HamiltonianState（t 為 PVI 時間 1/(1-s)）

        Raises:
            DivisionByZero: r_N 或 r̄_N 為零、N = 0、s = 1，或二次方程退化
        """
        params = refl.params
        N = refl.N - 1 if index is None else index
        r, rb = refl.r, refl.rbar
        if N <= 0 or r(N) == 0 or rb(N) == 0:
            raise DivisionByZero("oracle_qp 需要 N ≥ 1 且 r_N、r̄_N 不為零")
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        t = reflection_time(params.t)
        S = r(N) * rb(N)
        K = 1 - S
        L = refl.l(N)
        M2 = N + 2 * params.omega1
        Y = t * L - N * t - pb_coef(params, N + 1) * K * t * r(N + 1) / r(N)
        Z = t * L - N * t - pb_coef(params, N - 1) * K * t * rb(N - 1) / rb(N)
        c1 = (pb_coef(params, N) * S - mu + omega) * (p_coef(params, N) * S - mu + omega_bar)

        a2 = c1 - S * M2 ** 2
        a1 = -c1 - S * M2 * (Z - M2 - Y)
        a0 = S * Z * (M2 + Y)
        if is_small(a2, abs(a1) + abs(a0), ctx):
            if is_small(a1, abs(a0), ctx):
                raise DivisionByZero("q 的方程式退化")
            roots = [-a0 / a1]
        else:
            disc = mp.sqrt(a1 ** 2 - 4 * a2 * a0)
            roots = [(-a1 + disc) / (2 * a2), (-a1 - disc) / (2 * a2)]

        best = None
        for q in roots:
            if is_small(q, 1, ctx) or is_small(q - 1, 1, ctx):
                continue
            forms = HamiltonianMaps._implicit_forms(params, refl, N, q)
            p = (forms["c"] - mu - omega) / (q - 1)
            mismatch = normalized_residual(q * p + mu + omega_bar, -forms["a"])
            if best is None or mismatch < best[0]:
                best = (mismatch, q, p)
        if best is None:
            raise DivisionByZero("q 的兩個根都落在 0 或 1")
        mismatch, q, p = best
        logger.debug(f"oracle q_{N}={mp.nstr(q, 12)}, p_{N}={mp.nstr(p, 12)}（殘差 {mp.nstr(mismatch, 3)}）")
        return HamiltonianState.for_scheme(params, N, q, p, "L01", t=1 / (1 - mpc(params.t)))

    @staticmethod
    def _implicit_forms(params: WeightParams, refl: ReflectionState, N: int, q) -> dict:
        """q p + μ+ω̄（a, b）與 (q-1)p + μ+ω（c, d）的四種表示，時間取 s/(s-1)"""
        r, rb = refl.r, refl.rbar
        mu, omega, omega_bar = params.mu, params.omega, params.omega_bar
        t = reflection_time(params.t)
        S = r(N) * rb(N)
        K = 1 - S
        L = refl.l(N)
        M2 = N + 2 * params.omega1
        forward = -t * L + N * t + pb_coef(params, N + 1) * K * t * r(N + 1) / r(N)
        backward = t * L - N * t - pb_coef(params, N - 1) * K * t * rb(N - 1) / rb(N)
        pb_s = pb_coef(params, N) * S
        p_s = p_coef(params, N) * S
        if pb_s - mu + omega == 0 or p_s - mu + omega_bar == 0:
            raise PreconditionError(f"N={N} 的隱式關係分母為零")
        return {
            "a": pb_s / (pb_s - mu + omega) / (q - 1) * (M2 * (q - 1) + forward),
            "b": pb_coef(params, N) * (p_s - mu + omega_bar) * q / (M2 * q + backward),
            "c": p_coef(params, N) * (pb_s - mu + omega) * (q - 1) / (M2 * (q - 1) + forward),
            "d": p_s / (p_s - mu + omega_bar) / q * (M2 * q + backward),
        }
