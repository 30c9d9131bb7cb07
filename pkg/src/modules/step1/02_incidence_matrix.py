"""
Step1-02: 接続行列
行 = ブロック、列 = 点のビットパック接続行列と、設計公理の検証・双対化
"""

import importlib
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

_design_params = importlib.import_module('src.modules.step1.01_design_params')
DesignParams = _design_params.DesignParams

logger = logging.getLogger(__name__)


class DesignStructureError(ValueError):
    """次元・形状の不整合（公理違反とは区別する）"""


@dataclass(frozen=True)
class IncidenceMatrix:
    """
    v×v の 0/1 接続行列

    rows[i] はブロック i の特性ベクトル（ビット j = 点 j）
    """

    params: DesignParams
    rows: Tuple[int, ...]

    def __post_init__(self):
        v = self.params.v
        if len(self.rows) != v:
            raise DesignStructureError(f"行数 {len(self.rows)} が v={v} と一致しません")
        limit = 1 << v
        for i, row in enumerate(self.rows):
            if not isinstance(row, int) or row < 0 or row >= limit:
                raise DesignStructureError(f"行 {i} が長さ {v} のビットベクトルではありません")

    @property
    def v(self) -> int:
        return self.params.v

    @classmethod
    def from_lists(cls, params: DesignParams, matrix: Sequence[Sequence[int]]) -> "IncidenceMatrix":
        """
        0/1 の二重リストから生成

        Raises:
            DesignStructureError: 形状が v×v でない、または 0/1 以外の値を含む場合
        """
        v = params.v
        if len(matrix) != v:
            raise DesignStructureError(f"行数 {len(matrix)} が v={v} と一致しません")
        rows = []
        for i, line in enumerate(matrix):
            if len(line) != v:
                raise DesignStructureError(f"行 {i} の長さ {len(line)} が v={v} と一致しません")
            mask = 0
            for j, value in enumerate(line):
                if value not in (0, 1):
                    raise DesignStructureError(f"行 {i} 列 {j} の値 {value!r} は 0/1 ではありません")
                if value:
                    mask |= 1 << j
            rows.append(mask)
        return cls(params, tuple(rows))

    @classmethod
    def from_blocks(cls, params: DesignParams, blocks: Sequence[Sequence[int]]) -> "IncidenceMatrix":
        """点集合のリストから生成"""
        rows = []
        for block in blocks:
            mask = 0
            for point in block:
                mask |= 1 << point
            rows.append(mask)
        return cls(params, tuple(rows))

    def to_lists(self) -> List[List[int]]:
        v = self.v
        return [[(row >> j) & 1 for j in range(v)] for row in self.rows]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.int64)

    def block(self, i: int) -> List[int]:
        """ブロック i の点のリスト（昇順）"""
        row = self.rows[i]
        return [j for j in range(self.v) if (row >> j) & 1]

    def column(self, j: int) -> int:
        """点 j を含むブロックのビットマスク"""
        mask = 0
        for i, row in enumerate(self.rows):
            if (row >> j) & 1:
                mask |= 1 << i
        return mask

    def transpose(self) -> "IncidenceMatrix":
        return IncidenceMatrix(self.params, tuple(self.column(j) for j in range(self.v)))

    def permute(self, point_images: Sequence[int], block_images: Sequence[int]) -> "IncidenceMatrix":
        """
        点を point_images、ブロックを block_images で付け替えた行列

        ブロック i は新しい位置 block_images[i] に移り、その点 j は point_images[j] に移る
        """
        v = self.v
        if len(point_images) != v or len(block_images) != v:
            raise DesignStructureError("置換の長さが v と一致しません")
        new_rows = [0] * v
        for i, row in enumerate(self.rows):
            mask = 0
            for j in range(v):
                if (row >> j) & 1:
                    mask |= 1 << point_images[j]
            new_rows[block_images[i]] = mask
        return IncidenceMatrix(self.params, tuple(new_rows))

    def to_text(self) -> List[str]:
        """行ごとの '0'/'1' 文字列"""
        v = self.v
        return ["".join("1" if (row >> j) & 1 else "0" for j in range(v)) for row in self.rows]


def _violation(axiom: str, index, found: int, expected: int, message: str) -> Dict:
    return {"axiom": axiom, "index": index, "found": found, "expected": expected, "error": message}


def validate_design(m: IncidenceMatrix) -> Dict:
    """
    設計公理（行和・列和・ブロック対の交わり）を検証

    Args:
        m: 接続行列

    Returns:
        Dict: {"valid": bool, "axiom": str|None, "index": 最初の違反位置, "error": str,
               "violations": 公理ごとの最初の違反}

    Raises:
        DesignStructureError: 形状不整合
    """
    v, k, lam = m.params.v, m.params.k, m.params.lam
    if len(m.rows) != v:
        raise DesignStructureError(f"行数 {len(m.rows)} が v={v} と一致しません")

    n_matrix = m.to_numpy()
    violations = []

    row_sums = n_matrix.sum(axis=1)
    bad_rows = np.flatnonzero(row_sums != k)
    if bad_rows.size:
        i = int(bad_rows[0])
        violations.append(_violation(
            "row_sum", i, int(row_sums[i]), k, f"ブロック {i} のサイズ {int(row_sums[i])} != k={k}"
        ))

    col_sums = n_matrix.sum(axis=0)
    bad_cols = np.flatnonzero(col_sums != k)
    if bad_cols.size:
        j = int(bad_cols[0])
        violations.append(_violation(
            "column_sum", j, int(col_sums[j]), k, f"点 {j} の次数 {int(col_sums[j])} != k={k}"
        ))

    # NNᵀ の非対角成分がすべて λ
    gram = n_matrix @ n_matrix.T
    off_diagonal = gram != lam
    np.fill_diagonal(off_diagonal, False)
    bad_pairs = np.argwhere(off_diagonal)
    if bad_pairs.size:
        i, j = (int(x) for x in bad_pairs[0])
        violations.append(_violation(
            "intersection", (i, j), int(gram[i, j]), lam,
            f"ブロック {i} と {j} の交わり {int(gram[i, j])} != λ={lam}"
        ))

    if not violations:
        return {"valid": True, "axiom": None, "index": None, "error": "", "violations": []}

    first = violations[0]
    logger.debug(f"設計公理違反: {first['error']}")
    return {
        "valid": False,
        "axiom": first["axiom"],
        "index": first["index"],
        "error": first["error"],
        "violations": violations,
    }


def dual(m: IncidenceMatrix) -> IncidenceMatrix:
    """双対設計（転置）"""
    return m.transpose()
