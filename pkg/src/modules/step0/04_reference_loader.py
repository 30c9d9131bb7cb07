"""
参照テーブルローダーモジュール
検証用の期待値テーブル（位数6の作用表・分類結果・2-rank表）を読み込む機能を提供
"""

import logging
import os
from pathlib import Path
from typing import Dict

import yaml

logger = logging.getLogger(__name__)

REFERENCE_FILENAME = 'reference_tables.yaml'


def load_reference_tables(config_path: str) -> Dict:
    """
    参照テーブルを読み込み

    Args:
        config_path (str): 設定ファイルのパス（参照テーブルの基準位置）

    Returns:
        Dict: 参照テーブルデータ

    Raises:
        RuntimeError: 参照テーブル読み込み失敗時
    """
    try:
        # 設定ファイルと同じディレクトリを優先
        config_dir = os.path.dirname(os.path.abspath(config_path))
        tables_path = os.path.join(config_dir, REFERENCE_FILENAME)

        if not os.path.exists(tables_path):
            # src/modules/step0/ から project root へ (3階層上)
            project_root = Path(__file__).parent.parent.parent.parent
            fallback_path = project_root / "config" / REFERENCE_FILENAME
            logger.debug(f"load_reference_tables: fallback_path={fallback_path}")

            if fallback_path.exists():
                tables_path = str(fallback_path)
            else:
                raise FileNotFoundError(
                    f"{REFERENCE_FILENAME} not found in {config_dir} or {fallback_path}"
                )

        with open(tables_path, 'r', encoding='utf-8') as f:
            tables = yaml.safe_load(f) or {}
        logger.debug(f"参照テーブル読み込み: {tables_path}")
        return tables

    except Exception as e:
        logger.error(f"参照テーブル読み込み失敗: {e}", exc_info=True)
        raise RuntimeError(f"参照テーブル読み込みエラー: {e}")


def expected_cells(tables: Dict) -> Dict:
    """
    作用表の期待値を (f_p, f_q) → {"orbit_matrices": int|None, "designs": str} に整形

    Args:
        tables (Dict): load_reference_tables の戻り値

    Returns:
        Dict: セル期待値の辞書
    """
    cells = {}
    for entry in tables.get('action_table', {}).get('cells', []):
        key = (int(entry['f_p']), int(entry['f_q']))
        cells[key] = {
            "orbit_matrices": entry.get('orbit_matrices'),
            "designs": entry.get('designs', '-'),
        }
    return cells
