# -*- coding: utf-8 -*-
"""
離散 Painlevé V：(f, g) 系統、Hamilton 結構與 τ 遞迴方案

"""
from dpv.fg_system import DpvState, DpvSystem
from dpv.hamiltonian import HamiltonianMaps, HamiltonianState, alphas_l01, alphas_l14, hamiltonian_K
from dpv.schemes import SCHEME_L01, SCHEME_L14, TIME_CONVENTIONS, SchemeRow, SchemeTrace, TauSchemes, pvi_time

__all__ = [
    "DpvState",
    "DpvSystem",
    "HamiltonianMaps",
    "HamiltonianState",
    "alphas_l01",
    "alphas_l14",
    "hamiltonian_K",
    "SCHEME_L01",
    "SCHEME_L14",
    "TIME_CONVENTIONS",
    "SchemeRow",
    "SchemeTrace",
    "TauSchemes",
    "pvi_time",
]
