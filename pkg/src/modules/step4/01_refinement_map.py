"""
Step4-01: 細分化マップ
位数 pq の軌道行列から位数 p の部分群 ⟨ρ^q⟩ の軌道行列への軌道の分割規則
"""

import importlib
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

_step1 = importlib.import_module('src.modules.step1')
_step3 = importlib.import_module('src.modules.step3')

DesignParams = _step1.DesignParams
OrbitStructure = _step3.OrbitStructure
OrbitMatrix = _step3.OrbitMatrix
check_orbit_matrix = _step3.check_orbit_matrix

logger = logging.getLogger(__name__)

Segment = Tuple[int, ...]
RepresentativeRow = Tuple[Segment, ...]


class RefinementError(ValueError):
    """細分化の前提条件違反"""


def split_sizes(size: int, p: int, q: int) -> List[int]:
    """
    長さ size の親軌道が ⟨ρ^q⟩ の下で分かれる子軌道の長さ

    長さ 1, p はそのまま、長さ q は q 個の不動点、長さ pq は長さ p の q 個
    """
    if size in (1, p):
        return [size]
    if size == q:
        return [1] * q
    if size == p * q:
        return [p] * q
    raise RefinementError(f"軌道長 {size} は位数 {p * q} の巡回群の軌道長ではありません")


def _split_layout(sizes: Sequence[int], p: int, q: int):
    """子軌道の長さ・親ごとの子添字・ρ^p が誘導する子軌道の置換"""
    child_sizes: List[int] = []
    groups: List[Tuple[int, ...]] = []
    action: List[int] = []
    for size in sizes:
        parts = split_sizes(size, p, q)
        start = len(child_sizes)
        indices = tuple(range(start, start + len(parts)))
        child_sizes.extend(parts)
        groups.append(indices)
        if len(parts) == 1:
            action.append(start)
        else:
            # 分割群の中で i → i+1 mod q
            action.extend(start + (u + 1) % q for u in range(q))
    return child_sizes, tuple(groups), tuple(action)


@dataclass(frozen=True)
class RefinementMap:
    """
    親軌道行列と子軌道構造の対応

    Attributes:
        parent: 親軌道行列（位数 pq）
        params: 設計パラメータ
        p, q: 子群 ⟨ρ^q⟩ の位数 p と、ρ^p の位数 q
        child_structure: 子軌道構造（位数 p）
        row_split: 親ブロック軌道ごとの子ブロック軌道の添字
        column_split: 親点軌道ごとの子点軌道の添字
        q_action: ρ^p が誘導する子点軌道の置換
        q_action_blocks: ρ^p が誘導する子ブロック軌道の置換
    """

    parent: OrbitMatrix
    params: DesignParams
    p: int
    q: int
    child_structure: OrbitStructure
    row_split: Tuple[Tuple[int, ...], ...]
    column_split: Tuple[Tuple[int, ...], ...]
    q_action: Tuple[int, ...]
    q_action_blocks: Tuple[int, ...]

    def is_split_row(self, i: int) -> bool:
        return len(self.row_split[i]) > 1

    def is_split_column(self, j: int) -> bool:
        return len(self.column_split[j]) > 1


def build_refinement_map(parent: OrbitMatrix, params: DesignParams, p: int, q: int) -> RefinementMap:
    """
    親の軌道構造から分割規則を作成

    Raises:
        RefinementError: 親の群の位数が pq でない場合
    """
    structure = parent.structure
    if structure.group_order != p * q:
        raise RefinementError(
            f"親の群の位数 {structure.group_order} が p·q={p * q} と一致しません"
        )
    point_sizes, column_split, q_action = _split_layout(structure.point_sizes, p, q)
    block_sizes, row_split, q_action_blocks = _split_layout(structure.block_sizes, p, q)
    child_structure = OrbitStructure(tuple(point_sizes), tuple(block_sizes), p)
    return RefinementMap(
        parent=parent,
        params=params,
        p=p,
        q=q,
        child_structure=child_structure,
        row_split=row_split,
        column_split=column_split,
        q_action=q_action,
        q_action_blocks=q_action_blocks,
    )


def identity_map(parent: OrbitMatrix, params: DesignParams) -> RefinementMap:
    """分割しない恒等マップ（子 = 親）"""
    structure = parent.structure
    n = structure.n
    singletons = tuple((i,) for i in range(n))
    return RefinementMap(
        parent=parent,
        params=params,
        p=structure.group_order,
        q=1,
        child_structure=structure,
        row_split=singletons,
        column_split=singletons,
        q_action=tuple(range(n)),
        q_action_blocks=tuple(range(n)),
    )


@dataclass(frozen=True)
class RefinedOrbitMatrix:
    """子軌道行列と細分化マップ"""

    matrix: OrbitMatrix
    map: RefinementMap

    def representative_rows(self) -> Tuple[RepresentativeRow, ...]:
        """親ブロック軌道ごとの代表子行（親点軌道ごとの区間に分けたもの）"""
        entries = self.matrix.entries
        rows = []
        for group in self.map.row_split:
            child_row = entries[group[0]]
            rows.append(tuple(
                tuple(child_row[b] for b in columns) for columns in self.map.column_split
            ))
        return tuple(rows)


def rotate(segment: Sequence[int], shift: int) -> Segment:
    """rotate(x, d)[v] = x[(v + d) mod q]"""
    size = len(segment)
    return tuple(segment[(v + shift) % size] for v in range(size))


def expand_representatives(ref_map: RefinementMap, rows: Sequence[RepresentativeRow]) -> OrbitMatrix:
    """
    代表子行から子軌道行列全体を構成

    分割された親行 I の子 u の行は代表行の各区間を rotate(·, -u) したもの
    """
    child_rows: List[Tuple[int, ...]] = []
    for i, group in enumerate(ref_map.row_split):
        for u in range(len(group)):
            line: List[int] = []
            for segment in rows[i]:
                line.extend(rotate(segment, -u) if len(segment) > 1 else segment)
            child_rows.append(tuple(line))
    return OrbitMatrix(ref_map.child_structure, tuple(child_rows))


def identity_refinement(parent: OrbitMatrix, params: DesignParams) -> RefinedOrbitMatrix:
    """
    親をそのまま子とする細分化（素数位数・自明群の場合のインデックス化用）
    """
    return RefinedOrbitMatrix(matrix=parent, map=identity_map(parent, params))


def aggregation_consistent(r: RefinedOrbitMatrix) -> bool:
    """各親セル (I,J) について、子行の列区間の和が親成分に等しいか"""
    parent = r.map.parent.entries
    entries = r.matrix.entries
    for i, group in enumerate(r.map.row_split):
        for a in group:
            for j, columns in enumerate(r.map.column_split):
                if sum(entries[a][b] for b in columns) != parent[i][j]:
                    return False
    return True


def q_action_invariant(r: RefinedOrbitMatrix) -> bool:
    """ρ^p による子行・子列の置換で行列が不変か"""
    entries = r.matrix.entries
    rows_action = r.map.q_action_blocks
    cols_action = r.map.q_action
    n = len(entries)
    for a in range(n):
        for b in range(n):
            if entries[rows_action[a]][cols_action[b]] != entries[a][b]:
                return False
    return True


def check_refinement(r: RefinedOrbitMatrix) -> bool:
    """
    集約整合性・q_action 不変性・子軌道行列の条件をすべて満たすか判定
    """
    if r.matrix.structure != r.map.child_structure:
        logger.debug("子軌道行列の構造がマップと一致しません")
        return False
    if not aggregation_consistent(r):
        logger.debug("集約整合性の違反")
        return False
    if not q_action_invariant(r):
        logger.debug("q_action 不変性の違反")
        return False
    return check_orbit_matrix(r.matrix, r.map.params)
