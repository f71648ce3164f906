# -*- coding: utf-8 -*-
"""
Special 模組
任意精度特殊函數
"""

from .special_functions import SpecialFunctions, nonpositive_integer

__all__ = ['SpecialFunctions', 'nonpositive_integer']
