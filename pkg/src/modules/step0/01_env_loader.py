"""
環境変数ローダーモジュール
.envファイルから環境変数を読み込み、実行環境の上書き設定を提供
"""

import logging
import os
from pathlib import Path
from typing import Dict

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# 環境変数名
CHECKPOINT_DIR_ENV = "DESIGN_CHECKPOINT_DIR"
MAX_WORKERS_ENV = "DESIGN_MAX_WORKERS"


def load_env():
    """
    .envファイルから環境変数を読み込み

    プロジェクトルートの.envファイルを探して読み込む
    """
    # src/modules/step0/ から project root へ (3階層上)
    project_root = Path(__file__).parent.parent.parent.parent
    env_path = project_root / '.env'

    if env_path.exists():
        load_dotenv(env_path)
        logger.info(f".envファイルを読み込みました: {env_path}")
    else:
        logger.debug(f".envファイルが見つかりません: {env_path}")


def env_overrides() -> Dict[str, str]:
    """
    設定ファイルより優先される環境変数を取得

    Returns:
        Dict[str, str]: 設定キー → 値（設定されている環境変数のみ）
    """
    overrides = {}
    checkpoint_dir = os.getenv(CHECKPOINT_DIR_ENV)
    if checkpoint_dir:
        overrides["checkpoints"] = checkpoint_dir
    max_workers = os.getenv(MAX_WORKERS_ENV)
    if max_workers:
        overrides["max_workers"] = max_workers
    return overrides
