"""
Step3: 軌道行列
軌道構造・行プロトタイプ・標準形・生成・ファイル入出力
"""

import importlib

# 数字プレフィックス付きモジュールをimportlibで読み込み
_orbit_structure_module = importlib.import_module('src.modules.step3.01_orbit_structure')
_row_prototypes_module = importlib.import_module('src.modules.step3.02_row_prototypes')
_canonical_form_module = importlib.import_module('src.modules.step3.03_canonical_form')
_om_generator_module = importlib.import_module('src.modules.step3.04_om_generator')
_om_io_module = importlib.import_module('src.modules.step3.05_om_io')
_step3_processor_module = importlib.import_module('src.modules.step3.06_step3_processor')

OrbitStructureError = _orbit_structure_module.OrbitStructureError
OrbitStructure = _orbit_structure_module.OrbitStructure
OrbitMatrix = _orbit_structure_module.OrbitMatrix
check_orbit_matrix = _orbit_structure_module.check_orbit_matrix
orbit_matrix_violations = _orbit_structure_module.orbit_matrix_violations
stabilizer_divisible = _orbit_structure_module.stabilizer_divisible

row_prototypes = _row_prototypes_module.row_prototypes
prototypes_for_size = _row_prototypes_module.prototypes_for_size

EQUIVALENCE_FULL = _canonical_form_module.EQUIVALENCE_FULL
EQUIVALENCE_ROWS = _canonical_form_module.EQUIVALENCE_ROWS
canonical_entries = _canonical_form_module.canonical_entries
canonical_form = _canonical_form_module.canonical_form
is_canonical = _canonical_form_module.is_canonical

GenerationResult = _om_generator_module.GenerationResult
OrbitMatrixSearch = _om_generator_module.OrbitMatrixSearch
generate_orbit_matrices = _om_generator_module.generate_orbit_matrices
split_budget = _om_generator_module.split_budget
shard_partitions = _om_generator_module.shard_partitions
redistribute_budget = _om_generator_module.redistribute_budget

OrbitMatrixRecord = _om_io_module.OrbitMatrixRecord
format_om_block = _om_io_module.format_om_block
parse_om_block = _om_io_module.parse_om_block
format_orbit_matrices = _om_io_module.format_orbit_matrices
parse_orbit_matrices = _om_io_module.parse_orbit_matrices
read_orbit_matrices = _om_io_module.read_orbit_matrices
write_orbit_matrices = _om_io_module.write_orbit_matrices

Step3Processor = _step3_processor_module.Step3Processor
cell_label = _step3_processor_module.cell_label

__all__ = [
    'OrbitStructureError',
    'OrbitStructure',
    'OrbitMatrix',
    'check_orbit_matrix',
    'orbit_matrix_violations',
    'stabilizer_divisible',
    'row_prototypes',
    'prototypes_for_size',
    'EQUIVALENCE_FULL',
    'EQUIVALENCE_ROWS',
    'canonical_entries',
    'canonical_form',
    'is_canonical',
    'GenerationResult',
    'OrbitMatrixSearch',
    'generate_orbit_matrices',
    'split_budget',
    'shard_partitions',
    'redistribute_budget',
    'OrbitMatrixRecord',
    'format_om_block',
    'parse_om_block',
    'format_orbit_matrices',
    'parse_orbit_matrices',
    'read_orbit_matrices',
    'write_orbit_matrices',
    'Step3Processor',
    'cell_label',
]
