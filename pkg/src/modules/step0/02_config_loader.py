"""
設定ファイルローダーモジュール
YAMLファイルから設定を読み込み、処理オプション・環境変数の上書きを適用する機能を提供
"""

import importlib
import logging
from typing import Dict, Optional

import yaml

# 数字プレフィックス付きモジュールをインポート
_type_utils = importlib.import_module('src.modules.step0.00_type_utils')
_env_loader = importlib.import_module('src.modules.step0.01_env_loader')

logger = logging.getLogger(__name__)

to_budget = _type_utils.to_budget
to_int = _type_utils.to_int

# 設定ファイルで省略された場合の既定値
DEFAULT_CONFIG = {
    'system': {'log_level': 'INFO', 'max_workers': 1},
    'group': {'p': 2, 'q': 3},
    'targets': [],
    'orbit_matrix': {'mode': 'full', 'stabilizer_divisibility': False, 'shard_percent': None},
    'budgets': {'gen_om': None, 'refine': None, 'index': None, 'code_search': None},
    'indexing': {'checkpoint_every': 100000},
    'codes': {
        'weight': None,
        'weight_budget': 1 << 26,
        'subgroup_order': 3,
        'search_max_rank': 22,
    },
    'directories': {'output': 'data/output', 'checkpoints': 'data/checkpoints'},
}

STAGE_BUDGET_KEYS = ('gen_om', 'refine', 'index', 'code_search')


def _merge_defaults(config: Dict) -> Dict:
    """既定値を不足キーに補完（ネストは1階層まで）"""
    for section, defaults in DEFAULT_CONFIG.items():
        if section not in config or config[section] is None:
            config[section] = dict(defaults) if isinstance(defaults, dict) else list(defaults)
        elif isinstance(defaults, dict):
            for key, value in defaults.items():
                config[section].setdefault(key, value)
    return config


def load_config(config_path: str) -> Dict:
    """
    設定ファイルを読み込み

    Args:
        config_path (str): 設定ファイルのパス

    Returns:
        Dict: 設定データ（既定値・環境変数の上書き適用済み）

    Raises:
        RuntimeError: 設定ファイル読み込み失敗時
    """
    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config = yaml.safe_load(f) or {}
    except Exception as e:
        raise RuntimeError(f"設定ファイル読み込みエラー: {e}")

    if 'design' not in config:
        raise RuntimeError("設定ファイル読み込みエラー: designセクションがありません")

    config = _merge_defaults(config)

    overrides = _env_loader.env_overrides()
    if 'checkpoints' in overrides:
        config['directories']['checkpoints'] = overrides['checkpoints']
        logger.info(f"⚡ チェックポイントディレクトリを環境変数で上書き: {overrides['checkpoints']}")
    if 'max_workers' in overrides:
        workers = to_int(overrides['max_workers'])
        if workers:
            config['system']['max_workers'] = workers
            logger.info(f"⚡ ワーカー数を環境変数で上書き: {workers}")

    for key in STAGE_BUDGET_KEYS:
        config['budgets'][key] = to_budget(config['budgets'].get(key))

    return config


def apply_processing_options(config: Dict, processing_options: Optional[Dict] = None):
    """
    処理オプションを設定に適用

    Args:
        config (Dict): 設定データ
        processing_options (Optional[Dict]): 処理オプション
            - threads (int): ワーカー数
            - budgets (Dict[str, int]): ステージ別ノード予算
            - skip_classify (bool): 同型判定ステージをスキップ
            - skip_codes (bool): 符号解析ステージをスキップ
            - output (str): 出力ディレクトリ
            - design (Dict[str, int]): v, k, lambda の上書き
            - group (Dict[str, int]): p, q の上書き
            - checkpoints (str): チェックポイントディレクトリ
            - shard_percent (float): 軌道行列生成で探索する先頭行候補の割合
    """
    if not processing_options:
        return

    threads = to_int(processing_options.get('threads'))
    if threads:
        config.setdefault('system', {})['max_workers'] = threads
        logger.info(f"⚡ ワーカー数: {threads}")

    for key, value in (processing_options.get('budgets') or {}).items():
        if key not in STAGE_BUDGET_KEYS:
            logger.warning(f"未知のステージ予算キーを無視します: {key}")
            continue
        config.setdefault('budgets', {})[key] = to_budget(value)
        logger.info(f"⚡ {key} のノード予算: {config['budgets'][key]}")

    if processing_options.get('skip_classify'):
        config['enable_step6'] = False
        logger.info("⚡ 同型判定処理がスキップされます")

    if processing_options.get('skip_codes'):
        config['enable_step7'] = False
        logger.info("⚡ 符号解析処理がスキップされます")

    if processing_options.get('output'):
        config.setdefault('directories', {})['output'] = processing_options['output']
        logger.info(f"⚡ 出力ディレクトリ: {processing_options['output']}")

    for key, value in (processing_options.get('design') or {}).items():
        if value is not None:
            config.setdefault('design', {})[key] = int(value)
            logger.info(f"⚡ 設計パラメータ {key}: {value}")

    for key, value in (processing_options.get('group') or {}).items():
        if value is not None:
            config.setdefault('group', {})[key] = int(value)
            logger.info(f"⚡ 作用群 {key}: {value}")

    if processing_options.get('checkpoints'):
        config.setdefault('directories', {})['checkpoints'] = processing_options['checkpoints']
        logger.info(f"⚡ チェックポイントディレクトリ: {processing_options['checkpoints']}")

    if processing_options.get('shard_percent') is not None:
        config.setdefault('orbit_matrix', {})['shard_percent'] = float(processing_options['shard_percent'])
        logger.info(f"⚡ 先頭行候補の {processing_options['shard_percent']}% のみ探索")
