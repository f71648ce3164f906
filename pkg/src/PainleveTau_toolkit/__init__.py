"""
PainleveTau Toolkit
Painlevé VI τ 函數、Toeplitz 行列式與反射係數的高精度計算工具
"""

__version__ = "0.1.0"
__author__ = "PainleveTau Toolkit Team"
