"""
Step2-02: 軌道長分布
位数 pq の巡回群について d_1, d_p, d_q, d_pq の連立方程式を解く
"""

import importlib
import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

from sympy import factorint, isprime

_step1 = importlib.import_module('src.modules.step1')
_fixed_points = importlib.import_module('src.modules.step2.01_fixed_points')
DesignParams = _step1.DesignParams
admissible_fixed_points = _fixed_points.admissible_fixed_points

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrbitDistribution:
    """長さ 1, p, q, pq の軌道の個数"""

    d1: int
    dp: int
    dq: int
    dpq: int
    p: int
    q: int

    @property
    def v(self) -> int:
        return self.d1 + self.p * self.dp + self.q * self.dq + self.p * self.q * self.dpq

    @property
    def f_p(self) -> int:
        """ρ^q（位数 p）の不動点数"""
        return self.d1 + self.q * self.dq

    @property
    def f_q(self) -> int:
        """ρ^p（位数 q）の不動点数"""
        return self.d1 + self.p * self.dp

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.d1, self.dp, self.dq, self.dpq)

    def orbit_sizes(self) -> List[int]:
        """軌道長の昇順リスト"""
        sizes = (
            [1] * self.d1 + [self.p] * self.dp + [self.q] * self.dq
            + [self.p * self.q] * self.dpq
        )
        return sorted(sizes)

    def label(self) -> str:
        """(d1×1, dp×p, dq×q, dpq×pq) 表記"""
        pq = self.p * self.q
        return (
            f"({self.d1}×1, {self.dp}×{self.p}, {self.dq}×{self.q}, {self.dpq}×{pq})"
        )


def group_primes(order: int) -> Tuple[int, int]:
    """
    位数 pq を相異なる素数 p < q に分解

    Raises:
        ValueError: 相異なる2つの素数の積でない場合
    """
    factors = factorint(order)
    if len(factors) != 2 or any(e != 1 for e in factors.values()):
        raise ValueError(f"位数 {order} は相異なる2つの素数の積ではありません")
    p, q = sorted(factors)
    return p, q


def distribution_from_tuple(values, p: int, q: int) -> OrbitDistribution:
    """(d_1, d_p, d_q, d_pq) の並びから分布を作る"""
    d1, dp, dq, dpq = (int(x) for x in values)
    if min(d1, dp, dq, dpq) < 0:
        raise ValueError(f"軌道の個数は非負である必要があります: {tuple(values)}")
    return OrbitDistribution(d1, dp, dq, dpq, p, q)


def orbit_distributions(params: DesignParams, p: int, q: int, f_p: int, f_q: int) -> List[OrbitDistribution]:
    """
    不動点数 (f_p, f_q) に対応する軌道長分布をすべて列挙

    d_1 + p·d_p = f_q, d_1 + q·d_q = f_p, d_1 + p·d_p + q·d_q + pq·d_pq = v

    Returns:
        List[OrbitDistribution]: 辞書式順の解（存在しなければ空）

    Raises:
        ValueError: p, q が相異なる素数でない場合
    """
    if not (isprime(p) and isprime(q)) or p == q:
        raise ValueError(f"p, q は相異なる素数である必要があります: p={p}, q={q}")

    v = params.v
    results = []
    for d1 in range(0, min(f_p, f_q) + 1):
        if (f_q - d1) % p or (f_p - d1) % q:
            continue
        dp = (f_q - d1) // p
        dq = (f_p - d1) // q
        rest = v - d1 - p * dp - q * dq
        if rest < 0 or rest % (p * q):
            continue
        dist = OrbitDistribution(d1, dp, dq, rest // (p * q), p, q)
        assert dist.v == v and dist.f_p == f_p and dist.f_q == f_q
        results.append(dist)
    return results


def fixed_point_grid(params: DesignParams, p: int, q: int) -> List[Dict]:
    """
    許容される (f_p, f_q) の全組と対応する分布

    Returns:
        List[Dict]: {"f_p", "f_q", "distributions"} のリスト（f_p, f_q の昇順）
    """
    profile_p = admissible_fixed_points(params, p)
    profile_q = admissible_fixed_points(params, q)
    cells = []
    for f_p in profile_p.admissible:
        for f_q in profile_q.admissible:
            cells.append({
                "f_p": f_p,
                "f_q": f_q,
                "distributions": orbit_distributions(params, p, q, f_p, f_q),
            })
    return cells


def summarize_actions(cell_results: List[Dict]) -> Dict:
    """
    計算済みセルから作用の要約を作成

    Args:
        cell_results: {"f_p", "f_q", "orbit_matrices"} のリスト

    Returns:
        Dict: {"fixed_point_free": f_p=0 で軌道行列がある f_q の集合,
               "with_fixed_points": f_q → f_p の昇順リスト}
    """
    fixed_point_free = set()
    with_fixed: Dict[int, List[int]] = {}
    for cell in cell_results:
        if not cell.get("orbit_matrices"):
            continue
        if cell["f_p"] == 0:
            fixed_point_free.add(cell["f_q"])
        else:
            with_fixed.setdefault(cell["f_q"], []).append(cell["f_p"])
    return {
        "fixed_point_free": sorted(fixed_point_free),
        "with_fixed_points": {f_q: sorted(fs) for f_q, fs in sorted(with_fixed.items())},
    }
