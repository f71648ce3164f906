# -*- coding: utf-8 -*-
"""
執行結果報告

JSON 格式 {meta: {command, params, method, digits}, rows: [...], diagnostics: {residuals, converged}}。
schema/run_report.schema.json 由 RunReport.model_json_schema() 產生（write_schema），
輸出檔以 RunReport.model_validate 檢查。
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd
from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from proj_util_pkg.settings import MIN_DIGITS

logger = logging.getLogger(__name__)

SCHEMA_PATH = Path(__file__).parent / "schema" / "run_report.schema.json"

# 輸出檔中數值的有效位數
OUTPUT_DIGITS = 30

# 表格欄位值：高精度數值一律以字串輸出
Scalar = Union[str, bool, int, float, None]


def format_value(value: Any, digits: int = OUTPUT_DIGITS) -> Any:
    """mpf/mpc 轉為字串；複數寫成 "re,im"，numpy 純量轉成 Python 型別，其他型別原樣保留"""
    if isinstance(value, mpc):
        if value.imag == 0:
            return mp.nstr(value.real, digits)
        return f"{mp.nstr(value.real, digits)},{mp.nstr(value.imag, digits)}"
    if isinstance(value, mpf):
        return mp.nstr(value, digits)
    if isinstance(value, np.generic):
        return value.item()
    return value


class ReportMeta(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    command: str
    params: Dict[str, Scalar]
    method: str
    digits: int = Field(ge=MIN_DIGITS)


class ReportDiagnostics(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    residuals: Dict[str, float] = Field(default_factory=dict)
    converged: bool = True
    agreement: List[Dict[str, Scalar]] = Field(default_factory=list)


class RunReport(BaseModel):
    """一次執行的輸出（表格列 + 殘差診斷）"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    meta: ReportMeta
    rows: List[Dict[str, Scalar]]
    diagnostics: ReportDiagnostics = Field(default_factory=ReportDiagnostics)

    @classmethod
    def from_frame(cls, command: str, params: Dict[str, Any], method: str, digits: int, frame: pd.DataFrame,
                   residuals: Optional[Dict[str, Any]] = None, converged: bool = True,
                   agreement: Optional[pd.DataFrame] = None) -> "RunReport":
        """
        由 DataFrame 建立報告

        Args:
            frame: 序列表格，每列一個索引
            residuals: 殘差名稱 → 數值（mpf 會轉成 float）
            agreement: method=all 時的交叉比對表
        """
        rows = [{key: format_value(value) for key, value in row.items()} for row in frame.to_dict("records")]
        diagnostics = ReportDiagnostics(
            residuals={name: float(value) for name, value in (residuals or {}).items()},
            converged=converged,
            agreement=[] if agreement is None else [
                {key: format_value(value) for key, value in row.items()} for row in agreement.to_dict("records")
            ],
        )
        return cls(
            meta=ReportMeta(command=command, params={k: format_value(v) for k, v in params.items()},
                            method=method, digits=digits),
            rows=rows,
            diagnostics=diagnostics,
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    def to_payload(self) -> Dict[str, Any]:
        payload = self.model_dump()
        if not payload["diagnostics"]["agreement"]:
            del payload["diagnostics"]["agreement"]
        return payload

    def write(self, path: Path, fmt: str = "csv") -> List[Path]:
        """
        寫出報告

        csv：序列表格寫入 path，診斷區塊寫入同名的 .diagnostics.json
        json：整份報告寫入 path

        Returns:
            實際寫出的檔案
        """
        path = Path(path)
        if fmt == "json":
            write_json_atomic(path, self.to_payload())
            return [path]
        if fmt != "csv":
            raise ValueError(f"不支援的輸出格式: {fmt!r}")
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        side = path.with_suffix(".diagnostics.json")
        payload = self.to_payload()
        write_json_atomic(side, {"meta": payload["meta"], "diagnostics": payload["diagnostics"]})
        logger.info(f"已寫出 {path} 與 {side}")
        return [path, side]


def write_json_atomic(path: Path, payload: Dict[str, Any]) -> None:
    """先寫暫存檔再改名，鍵排序固定以保證輸出可重現"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")
    tmp.replace(path)


def load_schema() -> Dict[str, Any]:
    return json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))


def write_schema(path: Path = SCHEMA_PATH) -> Path:
    """將 RunReport 的 JSON schema 寫入 path（發佈的 schema 檔由此產生）"""
    write_json_atomic(path, RunReport.model_json_schema())
    return Path(path)


def validate_payload(payload: Dict[str, Any]) -> List[str]:
    """
    以 RunReport 模型檢查報告

    Returns:
        問題描述清單（欄位路徑: 訊息），空清單代表通過
    """
    try:
        RunReport.model_validate(payload)
    except ValidationError as exc:
        return [f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}" for error in exc.errors()]
    return []
