# -*- coding: utf-8 -*-
"""
分拆超幾何級數 2F1^(1)

"""
from hypergeometric.partitions import Partition, PartitionTools
from hypergeometric.series import PartitionHypergeometric, SeriesDiagnostics

__all__ = [
    "Partition",
    "PartitionTools",
    "PartitionHypergeometric",
    "SeriesDiagnostics",
]
