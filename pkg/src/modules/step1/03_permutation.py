"""
Step1-03: 置換と自己同型
点・ブロック上の置換、自己同型の組、不動点数
"""

import importlib
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

_incidence_matrix = importlib.import_module('src.modules.step1.02_incidence_matrix')
IncidenceMatrix = _incidence_matrix.IncidenceMatrix
DesignStructureError = _incidence_matrix.DesignStructureError


@dataclass(frozen=True)
class Permutation:
    """{0..n-1} 上の全単射（images[i] が i の像）"""

    images: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise ValueError(f"全単射ではありません: {self.images!r}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(n))
        for cycle in cycles:
            for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
                images[a] = b
        return cls(tuple(images))

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """self ∘ other（other を先に適用）"""
        if len(other) != len(self):
            raise ValueError("長さの異なる置換は合成できません")
        return Permutation(tuple(self.images[x] for x in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images):
            inv[x] = i
        return Permutation(tuple(inv))

    def power(self, e: int) -> "Permutation":
        """e 乗（負の指数は逆置換の冪）"""
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = Permutation.identity(len(self.images))
        while e:
            if e & 1:
                result = base.compose(result)
            base = base.compose(base)
            e >>= 1
        return result

    def cycles(self) -> List[Tuple[int, ...]]:
        """長さ1を含む全巡回（最小元から開始、最小元の昇順）"""
        seen = [False] * len(self.images)
        result = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cycle = []
            x = start
            while not seen[x]:
                seen[x] = True
                cycle.append(x)
                x = self.images[x]
            result.append(tuple(cycle))
        return result

    def cycle_type(self) -> List[int]:
        return sorted(len(c) for c in self.cycles())

    def order(self) -> int:
        return math.lcm(*self.cycle_type()) if self.images else 1

    def fixed_point_count(self) -> int:
        return sum(1 for i, x in enumerate(self.images) if i == x)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def apply_to_mask(self, mask: int) -> int:
        """ビット集合の像"""
        result = 0
        j = 0
        while mask:
            if mask & 1:
                result |= 1 << self.images[j]
            mask >>= 1
            j += 1
        return result


@dataclass(frozen=True)
class AutomorphismPair:
    """点置換とブロック置換の組"""

    point_perm: Permutation
    block_perm: Permutation

    def compose(self, other: "AutomorphismPair") -> "AutomorphismPair":
        return AutomorphismPair(
            self.point_perm.compose(other.point_perm),
            self.block_perm.compose(other.block_perm),
        )

    def power(self, e: int) -> "AutomorphismPair":
        return AutomorphismPair(self.point_perm.power(e), self.block_perm.power(e))


def fixed_point_count(p: Permutation) -> int:
    """不動点の個数"""
    return p.fixed_point_count()


def is_automorphism(m: IncidenceMatrix, a: AutomorphismPair) -> bool:
    """
    (点置換, ブロック置換) が接続行列を保つか判定

    ブロック i の点置換による像がブロック block_perm(i) と一致することを確認する

    Raises:
        DesignStructureError: 置換の長さが v と一致しない場合
    """
    v = m.v
    if len(a.point_perm) != v or len(a.block_perm) != v:
        raise DesignStructureError(
            f"置換の長さ ({len(a.point_perm)}, {len(a.block_perm)}) が v={v} と一致しません"
        )
    rows = m.rows
    for i, row in enumerate(rows):
        if a.point_perm.apply_to_mask(row) != rows[a.block_perm.images[i]]:
            return False
    return True


def induced_block_permutation(m: IncidenceMatrix, point_perm: Permutation):
    """
    点置換が誘導するブロック置換（自己同型でなければ None）

    Returns:
        Optional[Permutation]: 誘導されたブロック置換
    """
    index = {row: i for i, row in enumerate(m.rows)}
    if len(index) != m.v:
        return None
    images = []
    for row in m.rows:
        target = index.get(point_perm.apply_to_mask(row))
        if target is None:
            return None
        images.append(target)
    return Permutation(tuple(images))
