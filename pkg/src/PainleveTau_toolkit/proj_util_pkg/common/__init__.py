# -*- coding: utf-8 -*-
"""
共用工具：例外類別與精度設定
"""

from .errors import (
    PainleveToolkitError,
    PreconditionError,
    PoleError,
    SingularModulus,
    BranchAmbiguity,
    PhaseError,
    ZeroPivot,
    DegenerateForm,
    SingularStep,
    DegenerateParameter,
    DivisionByZero,
    ConvergenceError,
    DisagreementError,
)
from .precision import PrecisionContext, precision_scope

__all__ = [
    'PainleveToolkitError', 'PreconditionError', 'PoleError', 'SingularModulus',
    'BranchAmbiguity', 'PhaseError', 'ZeroPivot', 'DegenerateForm', 'SingularStep',
    'DegenerateParameter', 'DivisionByZero', 'ConvergenceError', 'DisagreementError',
    'PrecisionContext', 'precision_scope',
]
