"""
Step2-01: 素数位数自己同型の不動点数
合同条件と2つの上界・位数2の下界から許容される不動点数を求める
"""

import importlib
import logging
from dataclasses import dataclass
from typing import Tuple

from sympy import isprime

_step1 = importlib.import_module('src.modules.step1')
DesignParams = _step1.DesignParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixedPointProfile:
    """素数 r の自己同型に許される不動点数の集合"""

    prime: int
    admissible: Tuple[int, ...]


def _within_ratio_bound(params: DesignParams, f: int) -> Tuple[bool, bool]:
    """
    f ≤ λv/(k-√n) を整数演算で判定

    Returns:
        (bound内か, 等号か)
    """
    v, k, lam, n = params.v, params.k, params.lam, params.n
    # f(k-√n) ≤ λv ⇔ fk - λv ≤ f√n
    lhs = f * k - lam * v
    if lhs < 0:
        return True, False
    # 両辺非負なので二乗で比較
    left, right = lhs * lhs, f * f * n
    return left <= right, left == right


def admissible_fixed_points(params: DesignParams, r: int) -> FixedPointProfile:
    """
    位数 r（素数）の自己同型の不動点数として許される値

    Args:
        params: 設計パラメータ
        r: 素数

    Returns:
        FixedPointProfile: 昇順の許容値

    Raises:
        ValueError: r が素数でない場合
    """
    if not isinstance(r, int) or not isprime(r):
        raise ValueError(f"r は素数である必要があります: {r!r}")

    v, k, lam = params.v, params.k, params.lam
    linear_bound = v - 2 * params.n
    admissible = []
    for f in range(v % r, v + 1, r):
        if f > linear_bound:
            break
        within, equal = _within_ratio_bound(params, f)
        if not within:
            continue
        if r > 2 and (f == linear_bound or equal):
            # 等号は対合の場合に限られる
            continue
        if r == 2 and f != 0:
            if k % 2 == 0 and lam % 2 == 0:
                if f * lam < lam + k:
                    continue
            elif f * lam < lam + k - 1:
                continue
        admissible.append(f)

    logger.debug(f"{params} r={r}: 許容不動点数 {admissible}")
    return FixedPointProfile(prime=r, admissible=tuple(admissible))
