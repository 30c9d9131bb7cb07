"""
Step3-02: 行プロトタイプ
行条件と対角直交条件を満たす行ベクトルの列挙
"""

import importlib
import logging
from math import gcd
from typing import List, Tuple

_step1 = importlib.import_module('src.modules.step1')
_orbit_structure = importlib.import_module('src.modules.step3.01_orbit_structure')

DesignParams = _step1.DesignParams
OrbitStructure = _orbit_structure.OrbitStructure

logger = logging.getLogger(__name__)


def entry_upper_bounds(params: DesignParams, structure: OrbitStructure, block_size: int) -> List[int]:
    """長さ block_size のブロック軌道の行における各成分の上限"""
    return [
        min(omega, (params.k * omega) // block_size)
        for omega in structure.point_sizes
    ]


def prototypes_for_size(
    params: DesignParams,
    structure: OrbitStructure,
    block_size: int,
    stabilizer_divisibility: bool = False,
) -> List[Tuple[int, ...]]:
    """
    長さ block_size のブロック軌道に置ける行ベクトルを辞書式昇順で列挙

    Args:
        params: 設計パラメータ
        structure: 軌道構造
        block_size: ブロック軌道長 Ω
        stabilizer_divisibility: 成分を安定化群の軌道長の倍数に制限する

    Returns:
        List[Tuple[int, ...]]: 行プロトタイプ
    """
    group_order = structure.group_order
    omega = structure.point_sizes
    size = structure.n
    weights = [group_order // w for w in omega]
    target = group_order * params.lam + (group_order // block_size) * params.n
    upper = entry_upper_bounds(params, structure, block_size)
    steps = [
        (w // gcd(w, block_size)) if stabilizer_divisibility else 1
        for w in omega
    ]

    # 残り列で置ける最大和
    suffix_capacity = [0] * (size + 1)
    for j in range(size - 1, -1, -1):
        suffix_capacity[j] = suffix_capacity[j + 1] + upper[j] - upper[j] % steps[j]
    # 残り列での 1 単位あたり最大重み（w·s² ≤ s·w·upper）
    suffix_max_rate = [0] * (size + 1)
    for j in range(size - 1, -1, -1):
        suffix_max_rate[j] = max(suffix_max_rate[j + 1], weights[j] * upper[j])

    results: List[Tuple[int, ...]] = []
    row = [0] * size

    def extend(j: int, remaining: int, square: int):
        if j == size:
            if remaining == 0 and square == target:
                results.append(tuple(row))
            return
        if remaining > suffix_capacity[j]:
            return
        if square + remaining > target:
            return
        if square + remaining * suffix_max_rate[j] < target:
            return
        value = 0
        while value <= upper[j] and value <= remaining:
            added = weights[j] * value * value
            if square + added > target:
                break
            row[j] = value
            extend(j + 1, remaining - value, square + added)
            value += steps[j]
        row[j] = 0

    extend(0, params.k, 0)
    logger.debug(f"行プロトタイプ Ω={block_size}: {len(results)}個")
    return results


def row_prototypes(
    params: DesignParams,
    structure: OrbitStructure,
    i: int,
    stabilizer_divisibility: bool = False,
) -> List[Tuple[int, ...]]:
    """
    ブロック軌道 i の行として許される全ベクトル

    0 ≤ s_j ≤ ω_j, Σ s_j = k, Σ_j (Ω_i/ω_j) s_j² = λΩ_i + (k-λ)
    """
    return prototypes_for_size(params, structure, structure.block_sizes[i], stabilizer_divisibility)
