# -*- coding: utf-8 -*-
"""
命令列入口、內建驗證矩陣與報告輸出

"""
from cli.commands import RunConfig, build_parser, config_from_args, execute, run, verify
from cli.panels import CellResult, PanelCell, panel_cells, run_cell
from cli.report import RunReport, validate_payload, write_json_atomic

__all__ = [
    "RunConfig",
    "build_parser",
    "config_from_args",
    "execute",
    "run",
    "verify",
    "CellResult",
    "PanelCell",
    "panel_cells",
    "run_cell",
    "RunReport",
    "validate_payload",
    "write_json_atomic",
]
