"""
Step4: 軌道行列の細分化

1. 細分化マップ: 位数 pq の軌道を部分群 ⟨ρ^q⟩ の軌道へ分割する規則と整合性判定
2. 細分化探索: 代表子行の探索（回転に関する同型除去付き）
3. .rom ファイル入出力
4. Step4Processor: 上記を統合した処理オーケストレーター
"""

import importlib

# 数字プレフィックス付きモジュールをimportlibで読み込み
_refinement_map_module = importlib.import_module('src.modules.step4.01_refinement_map')
_refiner_module = importlib.import_module('src.modules.step4.02_refiner')
_rom_io_module = importlib.import_module('src.modules.step4.03_rom_io')
_step4_processor_module = importlib.import_module('src.modules.step4.04_step4_processor')

RefinementError = _refinement_map_module.RefinementError
RefinementMap = _refinement_map_module.RefinementMap
RefinedOrbitMatrix = _refinement_map_module.RefinedOrbitMatrix
build_refinement_map = _refinement_map_module.build_refinement_map
identity_refinement = _refinement_map_module.identity_refinement
expand_representatives = _refinement_map_module.expand_representatives
check_refinement = _refinement_map_module.check_refinement
aggregation_consistent = _refinement_map_module.aggregation_consistent
q_action_invariant = _refinement_map_module.q_action_invariant
split_sizes = _refinement_map_module.split_sizes
rotate = _refinement_map_module.rotate

RefinementResult = _refiner_module.RefinementResult
RefinementSearch = _refiner_module.RefinementSearch
refine = _refiner_module.refine
canonical_representatives = _refiner_module.canonical_representatives
is_canonical_refinement = _refiner_module.is_canonical_refinement
compositions = _refiner_module.compositions

RomRecord = _rom_io_module.RomRecord
format_rom = _rom_io_module.format_rom
format_roms = _rom_io_module.format_roms
parse_roms = _rom_io_module.parse_roms
read_roms = _rom_io_module.read_roms
write_roms = _rom_io_module.write_roms

Step4Processor = _step4_processor_module.Step4Processor

__all__ = [
    'RefinementError',
    'RefinementMap',
    'RefinedOrbitMatrix',
    'build_refinement_map',
    'identity_refinement',
    'expand_representatives',
    'check_refinement',
    'aggregation_consistent',
    'q_action_invariant',
    'split_sizes',
    'rotate',
    'RefinementResult',
    'RefinementSearch',
    'refine',
    'canonical_representatives',
    'is_canonical_refinement',
    'compositions',
    'RomRecord',
    'format_rom',
    'format_roms',
    'parse_roms',
    'read_roms',
    'write_roms',
    'Step4Processor',
]
