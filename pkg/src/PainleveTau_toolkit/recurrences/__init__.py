# -*- coding: utf-8 -*-
"""
反射係數遞迴與恆等式檢查

"""
from recurrences.reflection_state import (
    ReflectionSequence,
    ReflectionState,
    ResidualReport,
    TauSequence,
    normalized_residual,
)
from recurrences.engine import METHOD_ORACLE, METHOD_STEP_21, METHOD_STEP_22, RecurrenceEngine, p_coef, pb_coef
from recurrences.identities import RecurrenceIdentities

__all__ = [
    "ReflectionSequence",
    "ReflectionState",
    "ResidualReport",
    "TauSequence",
    "normalized_residual",
    "METHOD_ORACLE",
    "METHOD_STEP_21",
    "METHOD_STEP_22",
    "RecurrenceEngine",
    "p_coef",
    "pb_coef",
    "RecurrenceIdentities",
]
