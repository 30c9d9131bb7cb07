"""
Step6-02: 群の指紋
位数・可換性・中心と交換子群の位数・元の位数分布
"""

import logging
from collections import Counter
from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

from sympy.combinatorics import PermutationGroup

logger = logging.getLogger(__name__)

# これを超える位数の群では元の位数分布を数えない
HISTOGRAM_LIMIT = 200000


@dataclass(frozen=True)
class GroupFingerprint:
    """
    Attributes:
        order: 群の位数
        abelian: 可換か
        histogram: (元の位数, 個数) の昇順タプル（位数が大きすぎる場合は空）
        center_order: 中心の位数
        derived_subgroup_order: 交換子群の位数
        name: 認識できた群の名前
    """

    order: int
    abelian: bool
    histogram: Tuple[Tuple[int, int], ...]
    center_order: int
    derived_subgroup_order: int
    name: Optional[str] = None

    @property
    def element_order_histogram(self) -> Dict[int, int]:
        return dict(self.histogram)

    @property
    def key(self) -> Tuple:
        """名前を除いた比較用キー"""
        return (self.order, self.abelian, self.histogram, self.center_order, self.derived_subgroup_order)

    def with_name(self, name: Optional[str]) -> "GroupFingerprint":
        return replace(self, name=name)

    def to_dict(self) -> Dict:
        return {
            "order": self.order,
            "abelian": self.abelian,
            "element_order_histogram": {str(k): v for k, v in self.histogram},
            "center_order": self.center_order,
            "derived_subgroup_order": self.derived_subgroup_order,
            "name": self.name,
        }


def fingerprint_group(group: PermutationGroup, limit: int = HISTOGRAM_LIMIT) -> GroupFingerprint:
    """
    sympy の置換群から指紋を計算（名前なし）

    Args:
        group: 置換群
        limit: 元の位数分布を数える位数の上限
    """
    order = int(group.order())
    histogram: Tuple[Tuple[int, int], ...] = ()
    if order <= limit:
        counts = Counter(int(g.order()) for g in group.generate())
        histogram = tuple(sorted(counts.items()))
        if sum(counts.values()) != order or counts.get(1) != 1:
            raise RuntimeError(f"元の位数分布が群の位数 {order} と整合しません: {dict(counts)}")
    else:
        logger.warning(f"⚠️ 位数 {order} の群は元の位数分布を省略します")
    return GroupFingerprint(
        order=order,
        abelian=bool(group.is_abelian),
        histogram=histogram,
        center_order=int(group.center().order()),
        derived_subgroup_order=int(group.derived_subgroup().order()),
    )
