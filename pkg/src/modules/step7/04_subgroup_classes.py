"""
Step7-04: 巡回部分群の共役類
自己同型群の位数 r の巡回部分群を共役で分類し、各類の生成元を1つずつ返す
"""

import importlib
import logging
from typing import List

from sympy.combinatorics import PermutationGroup

_step1 = importlib.import_module('src.modules.step1')

Permutation = _step1.Permutation

logger = logging.getLogger(__name__)


def _subgroup_key(g) -> frozenset:
    """g が生成する巡回部分群（元の配列表現の集合）"""
    return frozenset(tuple((g ** e).array_form) for e in range(int(g.order())))


def cyclic_subgroup_classes(group: PermutationGroup, order: int) -> List:
    """
    位数 order の巡回部分群の共役類の代表生成元（sympy の置換）

    Args:
        group: 置換群
        order: 部分群の位数

    Returns:
        List: 各共役類から1つずつ選んだ生成元（元の配列表現の昇順で最小の類から）
    """
    elements = list(group.generate())
    candidates = sorted(
        (g for g in elements if int(g.order()) == order),
        key=lambda g: tuple(g.array_form),
    )
    seen = set()
    representatives = []
    for g in candidates:
        key = _subgroup_key(g)
        if key in seen:
            continue
        representatives.append(g)
        for h in elements:
            seen.add(_subgroup_key(g ^ h))
    logger.debug(f"位数 {order} の巡回部分群の共役類: {len(representatives)}個")
    return representatives


def to_permutation(g, degree: int) -> Permutation:
    """sympy の置換を長さ degree の Permutation に変換"""
    images = list(g.array_form) + list(range(g.size, degree))
    return Permutation(tuple(images[:degree]))
