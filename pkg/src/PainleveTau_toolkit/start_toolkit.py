#!/usr/bin/env python3
"""
PainleveTau Toolkit 啟動腳本

    uv run python src/PainleveTau_toolkit/start_toolkit.py tau --mu 1 --omega1 0.3 --t 0.5 --method all
"""

import logging
import sys
from pathlib import Path
from typing import List, Optional

# 讓 proj_util_pkg、toeplitz 等套件可以直接 import
sys.path.insert(0, str(Path(__file__).parent))

from pydantic import ValidationError  # noqa: E402

from cli.commands import build_parser, config_from_args, run  # noqa: E402
from proj_util_pkg.common.errors import PainleveToolkitError  # noqa: E402

logger = logging.getLogger(__name__)


def main(argv: Optional[List[str]] = None) -> int:
    """解析命令列並執行，回傳結束代碼"""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = config_from_args(args)
    except ValidationError as e:
        print(f"❌ 參數錯誤: {e}", file=sys.stderr)
        return 3

    print(f"🚀 執行 {config.command}（精度 {config.digits} 位）", file=sys.stderr)
    print(f"🐍 Python 版本: {sys.version.split()[0]}", file=sys.stderr)
    print("-" * 50, file=sys.stderr)

    try:
        code = run(config)
    except KeyboardInterrupt:
        print("\n👋 已中斷", file=sys.stderr)
        return 130
    except PainleveToolkitError as e:
        print(f"❌ 執行失敗: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        logger.error(f"參數錯誤: {e}")
        print(f"❌ 參數錯誤: {e}", file=sys.stderr)
        return 3

    if code == 0:
        print("✅ 完成", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
