"""
Step5: インデックス化

1. GroupAction: 軌道ごとに連番を振った巡回群の作用と軌道行列への集約
2. DesignIndexer: 細分化軌道行列を実現する接続行列の探索（チェックポイント対応）
3. Step5Processor: 上記を統合した処理オーケストレーター
"""

import importlib

# 数字プレフィックス付きモジュールをimportlibで読み込み
_group_action_module = importlib.import_module('src.modules.step5.01_group_action')
_indexer_module = importlib.import_module('src.modules.step5.02_indexer')
_step5_processor_module = importlib.import_module('src.modules.step5.03_step5_processor')

IndexingError = _group_action_module.IndexingError
GroupAction = _group_action_module.GroupAction
build_cyclic_action = _group_action_module.build_cyclic_action
build_action = _group_action_module.build_action
action_for_structure = _group_action_module.action_for_structure
collapse = _group_action_module.collapse

IndexedDesign = _indexer_module.IndexedDesign
IndexResult = _indexer_module.IndexResult
DesignIndexer = _indexer_module.DesignIndexer
index = _indexer_module.index
rotate_mask = _indexer_module.rotate_mask
lex_less = _indexer_module.lex_less
rom_digest = _indexer_module.rom_digest

Step5Processor = _step5_processor_module.Step5Processor

__all__ = [
    'IndexingError',
    'GroupAction',
    'build_cyclic_action',
    'build_action',
    'action_for_structure',
    'collapse',
    'IndexedDesign',
    'IndexResult',
    'DesignIndexer',
    'index',
    'rotate_mask',
    'lex_less',
    'rom_digest',
    'Step5Processor',
]
