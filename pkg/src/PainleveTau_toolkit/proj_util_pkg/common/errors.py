# -*- coding: utf-8 -*-
"""
例外類別

每個例外帶有 exit_code，供命令列入口對應結束代碼：
    2 - 數值未收斂
    3 - 前置條件不成立（參數落在極點、分支不明確等）
    4 - 不同計算方法結果不一致
"""


class PainleveToolkitError(Exception):
    """工具包例外基底類別"""

    exit_code = 1


class PreconditionError(PainleveToolkitError):
    """前置條件不成立"""

    exit_code = 3


class PoleError(PreconditionError):
    """參數落在 Gamma 函數或超幾何級數的極點上"""


class SingularModulus(PreconditionError):
    """橢圓積分模數 k^2 = 1"""


class BranchAmbiguity(PreconditionError):
    """ξ ≠ 0 且 t 為實數時，Toeplitz 矩陣元素的分支無法決定"""


class PhaseError(PreconditionError):
    """Ising 模型的 k 值與指定相位不符"""


class ZeroPivot(PreconditionError):
    """遞迴式中求解的線性係數為零"""


class DegenerateForm(PreconditionError):
    """遞迴式退化（例如 2/1 型在 ω̄ = ω 時）"""


class SingularStep(PreconditionError):
    """離散 Painlevé 步進遇到零分母"""

    def __init__(self, message: str, denominator: str = ""):
        super().__init__(message)
        self.denominator = denominator


class DegenerateParameter(PreconditionError):
    """超幾何參數退化，需改用極限公式"""


class DivisionByZero(PreconditionError):
    """除以零（行列式或反射係數為零）"""


class ConvergenceError(PainleveToolkitError):
    """級數或積分未在上限內收斂"""

    exit_code = 2


class DisagreementError(PainleveToolkitError):
    """交叉驗證的結果超出容許誤差"""

    exit_code = 4

    def __init__(self, message: str, worst: float = float("nan")):
        super().__init__(message)
        self.worst = worst
