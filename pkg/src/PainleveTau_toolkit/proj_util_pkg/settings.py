# -*- coding: utf-8 -*-
"""
初始環境參數設定

"""
import logging
import os
from pathlib import Path
from dotenv import load_dotenv

MIN_DIGITS = 30
DEFAULT_DIGITS = 60


class ProjEnvSettings:

    def __init__(self):
        self.env_loaded = False
        self.proj_env_settings_init()

    def proj_env_settings_init(self):
        """ Load .env file """
        # Get the path to the directory this file is in (package directory)
        base_dir = Path(__file__).parent.parent.absolute()

        # Setting app project head path to system environment variable
        os.environ["PROJECT_ROOT"] = str(base_dir)

        # Load .env file from the config subdirectory
        env_file_path = os.path.join(base_dir, "proj_util_pkg", "config", ".env")

        if os.path.exists(env_file_path):
            load_dotenv(env_file_path)
            self.env_loaded = True

    @property
    def default_digits(self) -> int:
        """
        預設工作精度（十進位位數）

        Returns:
            PT_DIGITS 環境變數，未設定時為 60；低於 30 時照樣回傳，由 PrecisionContext 與 RunConfig 拒絕
        """
        raw = os.environ.get("PT_DIGITS", "").strip()
        if not raw:
            return DEFAULT_DIGITS
        try:
            digits = int(raw)
        except ValueError:
            logging.getLogger(__name__).warning(f"PT_DIGITS={raw!r} 不是整數，改用預設 {DEFAULT_DIGITS}")
            return DEFAULT_DIGITS
        if digits < MIN_DIGITS:
            logging.getLogger(__name__).warning(f"PT_DIGITS={digits} 低於下限 {MIN_DIGITS}，精度設定將被拒絕")
        return digits

    @property
    def log_level(self) -> str:
        return os.environ.get("PT_LOG_LEVEL", "INFO").upper()


settings = ProjEnvSettings()

logging.basicConfig(level=getattr(logging, settings.log_level, logging.INFO))
logger = logging.getLogger(__name__)

if settings.env_loaded:
    logger.debug(f"✅ 成功載入環境變數檔案, PROJECT_ROOT: {os.environ.get('PROJECT_ROOT')}")
