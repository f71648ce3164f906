# -*- coding: utf-8 -*-
"""
權重與 Toeplitz 矩陣元素

"""
from toeplitz.weight_params import WeightParams
from toeplitz.moments import MOMENT_SOURCES, MomentCalculator, MomentTable
from toeplitz.determinants import ToeplitzOracle

__all__ = [
    "WeightParams",
    "MOMENT_SOURCES",
    "MomentCalculator",
    "MomentTable",
    "ToeplitzOracle",
]
