# -*- coding: utf-8 -*-
"""共用 fixture"""
import pytest
from mpmath import mp

from cli.panels import CIRCLE_PANEL, GENERIC_PANEL
from cli.pipelines import build_params
from proj_util_pkg.common.precision import PrecisionContext

DIGITS = 60


@pytest.fixture(autouse=True)
def working_precision():
    """測試內直接使用 mpmath 時也採用 60 位精度"""
    with mp.workdps(DIGITS):
        yield


@pytest.fixture
def ctx() -> PrecisionContext:
    return PrecisionContext(decimal_digits=DIGITS)


@pytest.fixture(params=range(len(GENERIC_PANEL)), ids=lambda i: f"generic-{i}")
def generic_params(request):
    return build_params(GENERIC_PANEL[request.param])


@pytest.fixture(params=range(len(CIRCLE_PANEL)), ids=lambda i: f"circle-{i}")
def circle_params(request):
    return build_params(CIRCLE_PANEL[request.param])


@pytest.fixture(params=range(3), ids=lambda i: f"dpv-{i}")
def dpv_params(request):
    """dPV 與 τ 方案使用的一般參數"""
    return build_params(GENERIC_PANEL[request.param])
