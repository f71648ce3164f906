# -*- coding: utf-8 -*-
"""
應用：CUE 動差與間隙機率、Ising 對角相關、實權重結構

"""
from applications.cue import CueApplications, CueGapRun, CueMomentRun
from applications.ising import IsingApplications, IsingRun
from applications.realness import realness_structure

__all__ = [
    "CueApplications",
    "CueGapRun",
    "CueMomentRun",
    "IsingApplications",
    "IsingRun",
    "realness_structure",
]
