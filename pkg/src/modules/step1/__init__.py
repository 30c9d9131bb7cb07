"""
Step1: 設計の基礎構造
パラメータ・接続行列・置換・設計ファイル入出力
"""

import importlib

# 数字プレフィックス付きモジュールをimportlibで読み込み
_design_params_module = importlib.import_module('src.modules.step1.01_design_params')
_incidence_matrix_module = importlib.import_module('src.modules.step1.02_incidence_matrix')
_permutation_module = importlib.import_module('src.modules.step1.03_permutation')
_design_io_module = importlib.import_module('src.modules.step1.04_design_io')

DesignParams = _design_params_module.DesignParams

IncidenceMatrix = _incidence_matrix_module.IncidenceMatrix
DesignStructureError = _incidence_matrix_module.DesignStructureError
validate_design = _incidence_matrix_module.validate_design
dual = _incidence_matrix_module.dual

Permutation = _permutation_module.Permutation
AutomorphismPair = _permutation_module.AutomorphismPair
fixed_point_count = _permutation_module.fixed_point_count
is_automorphism = _permutation_module.is_automorphism
induced_block_permutation = _permutation_module.induced_block_permutation

DesignRecord = _design_io_module.DesignRecord
format_design = _design_io_module.format_design
format_designs = _design_io_module.format_designs
parse_designs = _design_io_module.parse_designs
read_designs = _design_io_module.read_designs
write_designs = _design_io_module.write_designs
from_difference_set = _design_io_module.from_difference_set
cyclic_shift_pair = _design_io_module.cyclic_shift_pair
fano_plane = _design_io_module.fano_plane
biplane_11 = _design_io_module.biplane_11

__all__ = [
    'DesignParams',
    'IncidenceMatrix',
    'DesignStructureError',
    'validate_design',
    'dual',
    'Permutation',
    'AutomorphismPair',
    'fixed_point_count',
    'is_automorphism',
    'induced_block_permutation',
    'DesignRecord',
    'format_design',
    'format_designs',
    'parse_designs',
    'read_designs',
    'write_designs',
    'from_difference_set',
    'cyclic_shift_pair',
    'fano_plane',
    'biplane_11',
]
