"""
Step5-01: 巡回群の作用
軌道ごとに連番で点・ブロックを並べた標準的な生成元 ρ と、設計の軌道行列への集約
"""

import importlib
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

_step1 = importlib.import_module('src.modules.step1')
_step3 = importlib.import_module('src.modules.step3')

IncidenceMatrix = _step1.IncidenceMatrix
Permutation = _step1.Permutation
AutomorphismPair = _step1.AutomorphismPair
is_automorphism = _step1.is_automorphism
OrbitStructure = _step3.OrbitStructure
OrbitMatrix = _step3.OrbitMatrix

logger = logging.getLogger(__name__)


class IndexingError(ValueError):
    """インデックス化・集約の前提条件違反"""


def _offsets(sizes: Sequence[int]) -> Tuple[int, ...]:
    offsets, start = [], 0
    for size in sizes:
        offsets.append(start)
        start += size
    return tuple(offsets)


def _cyclic_images(sizes: Sequence[int]) -> Tuple[int, ...]:
    """o + x → o + (x + 1 mod ℓ)"""
    images: List[int] = []
    for offset, size in zip(_offsets(sizes), sizes):
        images.extend(offset + (x + 1) % size for x in range(size))
    return tuple(images)


@dataclass(frozen=True)
class GroupAction:
    """
    点とブロックへの巡回群の作用

    点 o_J + x (x ∈ Z_{ω_J}) は点軌道 J に属し、ρ は x を 1 進める。
    ブロック o_I + y はブロック軌道 I の基底ブロックの ρ^y による像
    """

    point_sizes: Tuple[int, ...]
    block_sizes: Tuple[int, ...]
    order: int
    p: Optional[int] = None
    q: Optional[int] = None

    @property
    def point_offsets(self) -> Tuple[int, ...]:
        return _offsets(self.point_sizes)

    @property
    def block_offsets(self) -> Tuple[int, ...]:
        return _offsets(self.block_sizes)

    @property
    def point_rho(self) -> Permutation:
        return Permutation(_cyclic_images(self.point_sizes))

    @property
    def block_rho(self) -> Permutation:
        return Permutation(_cyclic_images(self.block_sizes))

    @property
    def pair(self) -> AutomorphismPair:
        return AutomorphismPair(self.point_rho, self.block_rho)

    @property
    def structure(self) -> OrbitStructure:
        return OrbitStructure(self.point_sizes, self.block_sizes, self.order)

    @property
    def point_orbit_of(self) -> Tuple[int, ...]:
        """点ごとの軌道番号"""
        return tuple(j for j, size in enumerate(self.point_sizes) for _ in range(size))

    @property
    def block_orbit_of(self) -> Tuple[int, ...]:
        return tuple(i for i, size in enumerate(self.block_sizes) for _ in range(size))

    def point_orbit_masks(self) -> List[int]:
        return [((1 << size) - 1) << offset for offset, size in zip(self.point_offsets, self.point_sizes)]


def build_cyclic_action(
    point_sizes: Sequence[int],
    block_sizes: Optional[Sequence[int]] = None,
    order: Optional[int] = None,
    p: Optional[int] = None,
    q: Optional[int] = None,
) -> GroupAction:
    """
    軌道長の列から作用を作成

    Raises:
        IndexingError: 軌道長が群の位数を割り切らない場合
    """
    points = tuple(int(x) for x in point_sizes)
    blocks = tuple(int(x) for x in (block_sizes if block_sizes is not None else point_sizes))
    if order is None:
        order = math.lcm(*points, *blocks)
    for size in points + blocks:
        if size < 1 or order % size:
            raise IndexingError(f"軌道長 {size} は群の位数 {order} を割り切りません")
    return GroupAction(points, blocks, order, p, q)


def build_action(dist) -> GroupAction:
    """軌道長分布 (d1, dp, dq, dpq) から位数 pq の作用を作成（昇順の軌道）"""
    sizes = dist.orbit_sizes()
    return build_cyclic_action(sizes, sizes, dist.p * dist.q, dist.p, dist.q)


def action_for_structure(structure: OrbitStructure, p: Optional[int] = None,
                         q: Optional[int] = None) -> GroupAction:
    return build_cyclic_action(structure.point_sizes, structure.block_sizes,
                               structure.group_order, p, q)


def collapse(design: IncidenceMatrix, action: GroupAction) -> OrbitMatrix:
    """
    設計を作用の軌道行列に集約（成分 = 各ブロック軌道の先頭ブロックと点軌道の共通部分の大きさ）

    Raises:
        IndexingError: 作用が設計の自己同型でない場合
    """
    if sum(action.point_sizes) != design.v or sum(action.block_sizes) != design.v:
        raise IndexingError("作用の軌道長の総和が v と一致しません")
    if not is_automorphism(design, action.pair):
        raise IndexingError("作用が設計の自己同型ではありません")
    masks = action.point_orbit_masks()
    entries = tuple(
        tuple((design.rows[offset] & mask).bit_count() for mask in masks)
        for offset in action.block_offsets
    )
    return OrbitMatrix(action.structure, entries)
