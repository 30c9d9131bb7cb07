"""
Step7: 符号解析

1. BinaryCode: GF(2) 上の行空間（rank2, span_code）
2. weight_count: グレイ符号順の全列挙による重み w の語数
3. designs_in_code: 符号に含まれ部分群で不変な設計の探索
4. cyclic_subgroup_classes: 巡回部分群の共役類
5. rank_table: (2-ランク, |Aut|) の分割表
6. Step7Processor: 上記を統合した処理オーケストレーター
"""

import importlib

# 数字プレフィックス付きモジュールをimportlibで読み込み
_binary_code_module = importlib.import_module('src.modules.step7.01_binary_code')
_weight_module = importlib.import_module('src.modules.step7.02_weight_enumeration')
_search_module = importlib.import_module('src.modules.step7.03_design_search')
_subgroup_module = importlib.import_module('src.modules.step7.04_subgroup_classes')
_rank_table_module = importlib.import_module('src.modules.step7.05_rank_table')
_step7_processor_module = importlib.import_module('src.modules.step7.06_step7_processor')

CodeBudgetError = _binary_code_module.CodeBudgetError
CodeInvarianceError = _binary_code_module.CodeInvarianceError
BinaryCode = _binary_code_module.BinaryCode
gf2_rref = _binary_code_module.gf2_rref
gf2_rank = _binary_code_module.gf2_rank
rank2 = _binary_code_module.rank2
span_code = _binary_code_module.span_code
is_self_orthogonal = _binary_code_module.is_self_orthogonal

WeightClassReport = _weight_module.WeightClassReport
weight_distribution = _weight_module.weight_distribution
codewords_of_weight = _weight_module.codewords_of_weight
word_orbits = _weight_module.word_orbits
weight_count = _weight_module.weight_count

DesignSearchResult = _search_module.DesignSearchResult
designs_in_code = _search_module.designs_in_code

cyclic_subgroup_classes = _subgroup_module.cyclic_subgroup_classes
to_permutation = _subgroup_module.to_permutation

RankTable = _rank_table_module.RankTable
rank_check = _rank_table_module.rank_check
rank_table = _rank_table_module.rank_table

Step7Processor = _step7_processor_module.Step7Processor
reference_rank_columns = _step7_processor_module.reference_rank_columns
check_reference_tables = _step7_processor_module.check_reference_tables

__all__ = [
    'CodeBudgetError',
    'CodeInvarianceError',
    'BinaryCode',
    'gf2_rref',
    'gf2_rank',
    'rank2',
    'span_code',
    'is_self_orthogonal',
    'WeightClassReport',
    'weight_distribution',
    'codewords_of_weight',
    'word_orbits',
    'weight_count',
    'DesignSearchResult',
    'designs_in_code',
    'cyclic_subgroup_classes',
    'to_permutation',
    'RankTable',
    'rank_check',
    'rank_table',
    'Step7Processor',
    'reference_rank_columns',
    'check_reference_tables',
]
