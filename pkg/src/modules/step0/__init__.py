"""
Step0: パイプライン初期化モジュール群
環境変数・設定・ログ・参照テーブル・コンポーネント・ディレクトリの初期化処理を提供
"""

import importlib

# 00_type_utils
_type_utils = importlib.import_module('src.modules.step0.00_type_utils')
to_bool = _type_utils.to_bool
to_int = _type_utils.to_int
to_budget = _type_utils.to_budget
to_int_tuple = _type_utils.to_int_tuple

# 01_env_loader
_env_loader = importlib.import_module('src.modules.step0.01_env_loader')
load_env = _env_loader.load_env
env_overrides = _env_loader.env_overrides

# 02_config_loader
_config_loader = importlib.import_module('src.modules.step0.02_config_loader')
load_config = _config_loader.load_config
apply_processing_options = _config_loader.apply_processing_options

# 03_logging_setup
_logging_setup = importlib.import_module('src.modules.step0.03_logging_setup')
setup_logging = _logging_setup.setup_logging

# 04_reference_loader
_reference_loader = importlib.import_module('src.modules.step0.04_reference_loader')
load_reference_tables = _reference_loader.load_reference_tables
expected_cells = _reference_loader.expected_cells

# 05_component_initializer
_component_initializer = importlib.import_module('src.modules.step0.05_component_initializer')
ComponentInitializer = _component_initializer.ComponentInitializer

# 06_directory_manager
_directory_manager = importlib.import_module('src.modules.step0.06_directory_manager')
DirectoryManager = _directory_manager.DirectoryManager

__all__ = [
    'load_env',
    'env_overrides',
    'load_config',
    'apply_processing_options',
    'setup_logging',
    'load_reference_tables',
    'expected_cells',
    'ComponentInitializer',
    'DirectoryManager',
    'to_bool',
    'to_int',
    'to_budget',
    'to_int_tuple',
]
