"""
Step7-05: 2-ランク表
設計ごとのランク検査と、(2-ランク, |Aut|) の分割表
"""

import importlib
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

_step1 = importlib.import_module('src.modules.step1')
_binary_code_module = importlib.import_module('src.modules.step7.01_binary_code')

IncidenceMatrix = _step1.IncidenceMatrix
dual = _step1.dual
rank2 = _binary_code_module.rank2
is_self_orthogonal = _binary_code_module.is_self_orthogonal

logger = logging.getLogger(__name__)


def rank_check(m: IncidenceMatrix) -> Dict:
    """
    ランクとその双対のランク、k と λ が偶数なら自己直交性も調べる

    Raises:
        RuntimeError: k, λ が偶数なのに自己直交でない、または次元が v/2 を超える場合
    """
    params = m.params
    rank = rank2(m)
    dual_rank = rank2(dual(m))
    even = params.k % 2 == 0 and params.lam % 2 == 0
    self_orthogonal = is_self_orthogonal(m) if even else None
    if even and (not self_orthogonal or rank > params.v // 2):
        raise RuntimeError(
            f"k, λ が偶数の設計が自己直交でない (自己直交={self_orthogonal}, ランク={rank})"
        )
    if rank != dual_rank:
        logger.warning(f"⚠️ 2-ランクが双対と異なります: {rank} != {dual_rank}")
    return {"rank": rank, "dual_rank": dual_rank, "self_orthogonal": self_orthogonal}


@dataclass
class RankTable:
    """
    Attributes:
        cells: (2-ランク, |Aut|) → 設計数
        mismatches: 列合計が期待値と異なる |Aut| と (計算値, 期待値)
    """

    cells: Dict[Tuple[int, int], int] = field(default_factory=dict)
    mismatches: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    @property
    def ranks(self) -> List[int]:
        return sorted({r for r, _ in self.cells})

    @property
    def aut_orders(self) -> List[int]:
        return sorted({a for _, a in self.cells})

    def column_totals(self) -> Dict[int, int]:
        totals: Counter = Counter()
        for (_, order), count in self.cells.items():
            totals[order] += count
        return dict(sorted(totals.items()))

    def to_dict(self) -> Dict:
        return {
            "ranks": self.ranks,
            "aut_orders": self.aut_orders,
            "cells": {f"{r},{a}": c for (r, a), c in sorted(self.cells.items())},
            "column_totals": {str(k): v for k, v in self.column_totals().items()},
            "mismatches": {str(k): list(v) for k, v in self.mismatches.items()},
        }


def rank_table(ranks: Sequence[int], aut_orders: Sequence[int],
               expected_columns: Optional[Dict[int, int]] = None) -> RankTable:
    """
    (2-ランク, |Aut|) の分割表を作り、列合計を期待値と照合（不一致は警告のみ）

    Args:
        ranks: 設計ごとの 2-ランク
        aut_orders: 設計ごとの自己同型群の位数
        expected_columns: |Aut| ごとの期待される設計数
    """
    if len(ranks) != len(aut_orders):
        raise ValueError(f"ランク {len(ranks)}個と位数 {len(aut_orders)}個の長さが異なります")
    table = RankTable(cells=dict(Counter(zip(ranks, aut_orders))))
    if expected_columns:
        totals = table.column_totals()
        for order, expected in sorted(expected_columns.items()):
            found = totals.get(int(order), 0)
            if found != int(expected):
                table.mismatches[int(order)] = (found, int(expected))
                logger.warning(f"⚠️ |Aut|={order} の列合計 {found} が期待値 {expected} と異なります")
    return table
