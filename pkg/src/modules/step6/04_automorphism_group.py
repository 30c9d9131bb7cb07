"""
Step6-04: 自己同型群
標準ラベル付けの探索で集めた生成元から点上の置換群を閉じ、指紋を付ける
"""

import importlib
import logging
from dataclasses import dataclass
from typing import List

from sympy.combinatorics import Permutation as SymPermutation
from sympy.combinatorics import PermutationGroup

_step1 = importlib.import_module('src.modules.step1')
_labelling_module = importlib.import_module('src.modules.step6.01_canonical_labelling')
_fingerprint_module = importlib.import_module('src.modules.step6.02_group_fingerprint')
_catalog_module = importlib.import_module('src.modules.step6.03_group_catalog')

IncidenceMatrix = _step1.IncidenceMatrix
AutomorphismPair = _step1.AutomorphismPair
is_automorphism = _step1.is_automorphism
automorphism_generators = _labelling_module.automorphism_generators
GroupFingerprint = _fingerprint_module.GroupFingerprint
fingerprint_group = _fingerprint_module.fingerprint_group
name_fingerprint = _catalog_module.name_fingerprint

logger = logging.getLogger(__name__)


@dataclass
class AutomorphismGroup:
    """
    Attributes:
        generators: (点置換, ブロック置換) の生成元
        group: 点上の sympy 置換群
    """

    generators: List[AutomorphismPair]
    group: PermutationGroup

    @property
    def order(self) -> int:
        return int(self.group.order())


def automorphism_group(m: IncidenceMatrix) -> AutomorphismGroup:
    """
    設計の全自己同型群

    Raises:
        RuntimeError: 探索で得た生成元が自己同型でない場合
    """
    generators = automorphism_generators(m)
    for g in generators:
        if not is_automorphism(m, g):
            raise RuntimeError("標準ラベル付けが自己同型でない置換を返しました")
    perms = [SymPermutation(list(g.point_perm.images)) for g in generators]
    if not perms:
        perms = [SymPermutation(list(range(m.v)))]
    group = PermutationGroup(perms)
    logger.debug(f"自己同型群: 生成元 {len(generators)}個, 位数 {group.order()}")
    return AutomorphismGroup(generators, group)


def automorphism_fingerprint(m: IncidenceMatrix) -> GroupFingerprint:
    """自己同型群の指紋（認識できれば名前付き）"""
    return name_fingerprint(fingerprint_group(automorphism_group(m).group))
