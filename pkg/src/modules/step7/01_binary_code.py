"""
Step7-01: 二元符号
接続行列の行が GF(2) 上で張る符号（整数ビット集合のガウス消去）
"""

import importlib
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

_step1 = importlib.import_module('src.modules.step1')

IncidenceMatrix = _step1.IncidenceMatrix
Permutation = _step1.Permutation

logger = logging.getLogger(__name__)


class CodeBudgetError(ValueError):
    """符号語の全列挙が予算を超える"""


class CodeInvarianceError(ValueError):
    """置換が符号を保たない"""


def gf2_rref(rows: Sequence[int], n_cols: int) -> Tuple[List[int], List[int]]:
    """
    GF(2) 上の既約行階段形

    Returns:
        (基底行, 各行のピボット列)。ピボット列の昇順で、ピボット列は他の行に現れない
    """
    work = [r for r in rows if r]
    basis: List[int] = []
    pivots: List[int] = []
    for col in range(n_cols):
        bit = 1 << col
        pivot = next((i for i, r in enumerate(work) if r & bit), None)
        if pivot is None:
            continue
        row = work.pop(pivot)
        work = [r ^ row if r & bit else r for r in work]
        basis = [b ^ row if b & bit else b for b in basis]
        basis.append(row)
        pivots.append(col)
        work = [r for r in work if r]
        if not work:
            break
    return basis, pivots


def gf2_rank(rows: Sequence[int], n_cols: int) -> int:
    return len(gf2_rref(rows, n_cols)[0])


@dataclass(frozen=True)
class BinaryCode:
    """
    Attributes:
        length: 符号長
        basis: 既約行階段形の基底（ピボット列の昇順）
        pivots: 各基底行のピボット列
    """

    length: int
    basis: Tuple[int, ...]
    pivots: Tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @classmethod
    def from_rows(cls, rows: Sequence[int], length: int) -> "BinaryCode":
        basis, pivots = gf2_rref(rows, length)
        return cls(length, tuple(basis), tuple(pivots))

    def reduce(self, word: int) -> int:
        """基底で簡約した剰余（符号語なら 0）"""
        for row, col in zip(self.basis, self.pivots):
            if (word >> col) & 1:
                word ^= row
        return word

    def contains(self, word: int) -> bool:
        return self.reduce(word) == 0

    def is_invariant_under(self, perm: Permutation) -> bool:
        return all(self.contains(perm.apply_to_mask(row)) for row in self.basis)


def rank2(m: IncidenceMatrix) -> int:
    """接続行列の GF(2) 上の階数"""
    return gf2_rank(m.rows, m.v)


def span_code(m: IncidenceMatrix) -> BinaryCode:
    """ブロックの特性ベクトルが張る二元符号"""
    return BinaryCode.from_rows(m.rows, m.v)


def is_self_orthogonal(m: IncidenceMatrix) -> bool:
    """全ての行の組（自分自身を含む）の内積が偶数か"""
    rows = m.rows
    return all(
        (rows[i] & rows[j]).bit_count() % 2 == 0
        for i in range(len(rows)) for j in range(i, len(rows))
    )
