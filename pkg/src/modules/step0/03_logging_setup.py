"""
ログシステムセットアップモジュール
ステージごとの階層構造を持つログシステムの設定機能を提供
"""

import logging
import sys
from typing import Dict


class HierarchicalFormatter(logging.Formatter):
    """階層構造を表現するカスタムフォーマッター"""

    def __init__(self):
        super().__init__()
        self.component_prefixes = {
            'src.main_pipeline': '🚀',
            'src.modules.step1': '🧱',
            'src.modules.step2': '📐',
            'src.modules.step3': '🧮',
            'src.modules.step4': '🔬',
            'src.modules.step5': '🧩',
            'src.modules.step6': '🔍',
            'src.modules.step7': '💾',
        }

    def format(self, record):
        component_name = record.name
        message = record.getMessage()

        prefix = None
        is_main_component = component_name.startswith('src.main_pipeline') or component_name == '__main__'

        for module_name, module_prefix in self.component_prefixes.items():
            if component_name.startswith(module_name):
                if not is_main_component:
                    # サブコンポーネントはインデントで表示
                    prefix = f"  {module_prefix}"
                break

        if record.levelno >= logging.ERROR:
            level_icon = '❌ '
        elif record.levelno >= logging.WARNING:
            level_icon = '⚠️ '
        else:
            level_icon = ''

        if prefix:
            return f"{prefix} {level_icon}{message}"
        return f"{level_icon}{message}"


class SuppressFilter(logging.Filter):
    """探索ノード単位の冗長メッセージをフィルタリングするカスタムフィルター"""

    def filter(self, record):
        if record.levelno <= logging.DEBUG and record.name.startswith('src.modules'):
            message = record.getMessage()
            suppressed_patterns = [
                'ノード',
                'プロトタイプ',
                '候補ブロック',
            ]
            for pattern in suppressed_patterns:
                if pattern in message:
                    return False
        return True


def setup_logging(config: Dict):
    """
    階層構造を持つログシステムの設定

    Args:
        config (Dict): 設定データ（systemセクションからlog_levelを取得）
    """
    log_level = config.get('system', {}).get('log_level', 'INFO')
    level = getattr(logging, str(log_level).upper(), logging.INFO)

    root_logger = logging.getLogger()
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(level)
    console_handler.setFormatter(HierarchicalFormatter())
    console_handler.addFilter(SuppressFilter())

    root_logger.addHandler(console_handler)
    root_logger.setLevel(level)

    for logger_name in ['src.main_pipeline', 'src.modules']:
        logging.getLogger(logger_name).propagate = True

    # joblib / sympy の内部ログは警告以上のみ
    for noisy in ['joblib', 'sympy']:
        logging.getLogger(noisy).setLevel(logging.WARNING)
