"""
Step3-01: 軌道構造と軌道行列
軌道長ベクトル・軌道行列と、行・列・直交条件の検査
"""

import importlib
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

_step1 = importlib.import_module('src.modules.step1')
DesignParams = _step1.DesignParams

logger = logging.getLogger(__name__)


class OrbitStructureError(ValueError):
    """軌道構造・軌道行列の形状やパラメータとの不整合"""


def _size_classes(sizes: Sequence[int]) -> List[List[int]]:
    """同じ長さの軌道の添字をまとめる（初出順）"""
    classes: dict = {}
    for i, size in enumerate(sizes):
        classes.setdefault(size, []).append(i)
    return list(classes.values())


@dataclass(frozen=True)
class OrbitStructure:
    """
    点軌道長 (ω_1..ω_n) とブロック軌道長 (Ω_1..Ω_n)

    Attributes:
        point_sizes: 点軌道長
        block_sizes: ブロック軌道長
        group_order: 群の位数
    """

    point_sizes: Tuple[int, ...]
    block_sizes: Tuple[int, ...]
    group_order: int

    def __post_init__(self):
        if len(self.point_sizes) != len(self.block_sizes):
            raise OrbitStructureError("点軌道とブロック軌道の個数が一致しません")
        if sum(self.point_sizes) != sum(self.block_sizes):
            raise OrbitStructureError("点軌道長とブロック軌道長の総和が一致しません")
        if self.group_order <= 0:
            raise OrbitStructureError(f"群の位数が不正です: {self.group_order}")
        for size in self.point_sizes + self.block_sizes:
            if size <= 0 or self.group_order % size:
                raise OrbitStructureError(f"軌道長 {size} が群の位数 {self.group_order} を割り切りません")
        if sorted(self.point_sizes) != sorted(self.block_sizes):
            raise OrbitStructureError("点軌道長とブロック軌道長の多重集合が一致しません")

    @classmethod
    def from_sizes(cls, sizes: Sequence[int], group_order: int) -> "OrbitStructure":
        sizes = tuple(int(s) for s in sizes)
        return cls(sizes, sizes, int(group_order))

    @classmethod
    def from_distribution(cls, dist) -> "OrbitStructure":
        """OrbitDistribution から昇順の構造を生成"""
        return cls.from_sizes(dist.orbit_sizes(), dist.p * dist.q)

    @classmethod
    def trivial(cls, v: int) -> "OrbitStructure":
        return cls.from_sizes([1] * v, 1)

    @property
    def n(self) -> int:
        return len(self.point_sizes)

    @property
    def v(self) -> int:
        return sum(self.point_sizes)

    def is_sorted(self) -> bool:
        return (
            list(self.point_sizes) == sorted(self.point_sizes)
            and list(self.block_sizes) == sorted(self.block_sizes)
        )

    def point_classes(self) -> List[List[int]]:
        return _size_classes(self.point_sizes)

    def block_classes(self) -> List[List[int]]:
        return _size_classes(self.block_sizes)


@dataclass(frozen=True)
class OrbitMatrix:
    """
    軌道行列 s（s[i][j] = ブロック軌道 i の1ブロックに含まれる点軌道 j の点数）
    """

    structure: OrbitStructure
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        n = self.structure.n
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise OrbitStructureError(f"軌道行列の形状が {n}×{n} ではありません")
        for row in self.entries:
            for value in row:
                if not isinstance(value, int) or value < 0:
                    raise OrbitStructureError(f"軌道行列の成分が非負整数ではありません: {value!r}")

    @classmethod
    def from_lists(cls, structure: OrbitStructure, rows: Sequence[Sequence[int]]) -> "OrbitMatrix":
        return cls(structure, tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def n(self) -> int:
        return self.structure.n

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]


def orbit_matrix_violations(om: OrbitMatrix, params: DesignParams) -> List[str]:
    """
    軌道行列の条件違反を列挙（空なら条件を満たす）

    Raises:
        OrbitStructureError: 軌道長の総和が v と一致しない場合
    """
    structure = om.structure
    if structure.v != params.v:
        raise OrbitStructureError(f"軌道長の総和 {structure.v} が v={params.v} と一致しません")

    k, lam, n_order = params.k, params.lam, params.n
    omega = structure.point_sizes
    big_omega = structure.block_sizes
    group_order = structure.group_order
    s = om.entries
    size = structure.n
    violations = []

    for i in range(size):
        for j in range(size):
            if s[i][j] > omega[j]:
                violations.append(f"s[{i}][{j}]={s[i][j]} > ω_{j}={omega[j]}")

    for i in range(size):
        if sum(s[i]) != k:
            violations.append(f"行 {i} の和 {sum(s[i])} != k={k}")

    # Σ_i (Ω_i/ω_j) s_ij = k ⇔ Σ_i Ω_i s_ij = k ω_j
    for j in range(size):
        total = sum(big_omega[i] * s[i][j] for i in range(size))
        if total != k * omega[j]:
            violations.append(f"列 {j} の重み付き和 {total} != kω_j={k * omega[j]}")

    # Σ_j (L/ω_j) s_rj s_ij = Lλ + δ_ri (L/Ω_i) n
    weights = [group_order // w for w in omega]
    for r in range(size):
        for i in range(r, size):
            inner = sum(weights[j] * s[r][j] * s[i][j] for j in range(size))
            expected = group_order * lam
            if r == i:
                expected += (group_order // big_omega[i]) * n_order
            if inner != expected:
                violations.append(f"行 {r}, {i} の直交条件 {inner} != {expected}")

    return violations


def check_orbit_matrix(om: OrbitMatrix, params: DesignParams) -> bool:
    """
    成分の範囲・行条件・列条件・直交条件をすべて満たすか判定

    Raises:
        OrbitStructureError: 構造とパラメータの不整合
    """
    violations = orbit_matrix_violations(om, params)
    if violations:
        logger.debug(f"軌道行列の条件違反: {violations[0]}")
    return not violations


def stabilizer_divisible(om: OrbitMatrix) -> bool:
    """
    各成分が対応するブロック安定化群の点軌道上の軌道長で割り切れるか

    長さ Ω のブロック軌道の1ブロックの安定化群は ⟨ρ^Ω⟩ で、長さ ω の点軌道上に
    長さ ω/gcd(ω, Ω) の軌道を持つ
    """
    from math import gcd

    structure = om.structure
    for i, row in enumerate(om.entries):
        for j, value in enumerate(row):
            omega = structure.point_sizes[j]
            if value % (omega // gcd(omega, structure.block_sizes[i])):
                return False
    return True
