"""
Step6: 同型分類

1. CanonicalLabeller: 接続グラフの標準ラベル付けと自己同型の生成元
2. GroupFingerprint: 置換群の指紋
3. 群カタログ: 位数 6, 24, 42, 168 の群の構成と名前の認識
4. AutomorphismGroup: 設計の全自己同型群
5. classify: 同型類・自己双対・双対対の分類
6. Step6Processor: 上記を統合した処理オーケストレーター
"""

import importlib

# 数字プレフィックス付きモジュールをimportlibで読み込み
_labelling_module = importlib.import_module('src.modules.step6.01_canonical_labelling')
_fingerprint_module = importlib.import_module('src.modules.step6.02_group_fingerprint')
_catalog_module = importlib.import_module('src.modules.step6.03_group_catalog')
_automorphism_module = importlib.import_module('src.modules.step6.04_automorphism_group')
_classifier_module = importlib.import_module('src.modules.step6.05_classifier')
_step6_processor_module = importlib.import_module('src.modules.step6.06_step6_processor')

CanonicalCertificate = _labelling_module.CanonicalCertificate
CanonicalLabeller = _labelling_module.CanonicalLabeller
canonical_labelling = _labelling_module.canonical_labelling
canonical_form = _labelling_module.canonical_form
automorphism_generators = _labelling_module.automorphism_generators

GroupFingerprint = _fingerprint_module.GroupFingerprint
fingerprint_group = _fingerprint_module.fingerprint_group

CATALOG = _catalog_module.CATALOG
COMPLETE_ORDERS = _catalog_module.COMPLETE_ORDERS
UNIQUE_IN_ORDER = _catalog_module.UNIQUE_IN_ORDER
catalog_fingerprints = _catalog_module.catalog_fingerprints
ambiguous_names = _catalog_module.ambiguous_names
recognise = _catalog_module.recognise
name_fingerprint = _catalog_module.name_fingerprint

AutomorphismGroup = _automorphism_module.AutomorphismGroup
automorphism_group = _automorphism_module.automorphism_group
automorphism_fingerprint = _automorphism_module.automorphism_fingerprint

DesignClass = _classifier_module.DesignClass
Classification = _classifier_module.Classification
classify = _classifier_module.classify
write_classification = _classifier_module.write_classification

Step6Processor = _step6_processor_module.Step6Processor

__all__ = [
    'CanonicalCertificate',
    'CanonicalLabeller',
    'canonical_labelling',
    'canonical_form',
    'automorphism_generators',
    'GroupFingerprint',
    'fingerprint_group',
    'CATALOG',
    'COMPLETE_ORDERS',
    'UNIQUE_IN_ORDER',
    'catalog_fingerprints',
    'ambiguous_names',
    'recognise',
    'name_fingerprint',
    'AutomorphismGroup',
    'automorphism_group',
    'automorphism_fingerprint',
    'DesignClass',
    'Classification',
    'classify',
    'write_classification',
    'Step6Processor',
]
