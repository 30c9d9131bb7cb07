"""
Step6-03: 群カタログ
位数ごとの抽象群を置換群として構成し、指紋が一意な場合に限り名前を付ける。
名前は指紋の類を表す（"PGL(3,2)" は PGL(3,2) と同じ指紋を持つ群の類）

位数 6, 24, 42 は全ての群を収録。位数 168 は部分的で、全ての群の中で指紋が一意と分かっている
PGL(3,2) と E8:Frob21 以外には名前を付けない
"""

import importlib
import logging
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from sympy.combinatorics import Permutation as SymPermutation
from sympy.combinatorics import PermutationGroup
from sympy.combinatorics.group_constructs import DirectProduct
from sympy.combinatorics.named_groups import (
    AlternatingGroup,
    CyclicGroup,
    DihedralGroup,
    SymmetricGroup,
)

_fingerprint_module = importlib.import_module('src.modules.step6.02_group_fingerprint')

GroupFingerprint = _fingerprint_module.GroupFingerprint
fingerprint_group = _fingerprint_module.fingerprint_group

logger = logging.getLogger(__name__)

# 全ての群を収録している位数
COMPLETE_ORDERS = (6, 24, 42)

# 収録が部分的な位数で、その位数の全ての群の中で指紋が一意な群。
# 位数 168 の完全群は PGL(3,2) のみ（非可解群はこれしかない）
UNIQUE_IN_ORDER: Dict[int, Tuple[str, ...]] = {
    168: ("PGL(3,2)", "E8:Frob21"),
}


# ---- 構成部品 ----

def regular_group(elements: Sequence, multiply: Callable, generators: Sequence) -> PermutationGroup:
    """乗積表から左正則表現の置換群を作る"""
    index = {e: i for i, e in enumerate(elements)}
    perms = [SymPermutation([index[multiply(g, x)] for x in elements]) for g in generators]
    return PermutationGroup(perms)


def semidirect_cyclic(m: int, n: int, r: int) -> PermutationGroup:
    """Z_m ⋊ Z_n（生成元 b が a ↦ a^r で作用、r^n ≡ 1 mod m）"""
    if pow(r, n, m) != 1 % m:
        raise ValueError(f"r={r} の位数が n={n} を割り切りません (mod {m})")
    elements = [(a, b) for a in range(m) for b in range(n)]

    def multiply(x, y):
        return ((x[0] + pow(r, x[1], m) * y[0]) % m, (x[1] + y[1]) % n)

    return regular_group(elements, multiply, [(1 % m, 0), (0, 1 % n)])


def dicyclic(n: int) -> PermutationGroup:
    """位数 4n の二巡回群（n=2 で四元数群 Q8）"""
    size = 2 * n
    elements = [(i, j) for i in range(size) for j in range(2)]

    def multiply(x, y):
        (i1, j1), (i2, j2) = x, y
        if j1 == 0:
            return ((i1 + i2) % size, j2)
        if j2 == 1:
            return ((i1 - i2 + n) % size, 0)
        return ((i1 - i2) % size, 1)

    return regular_group(elements, multiply, [(1, 0), (0, 1)])


def _z3_by_d8() -> PermutationGroup:
    """Z3 ⋊ D8（核がクライン四元群の作用）"""

    def d8_multiply(x, y):
        (i1, s1), (i2, s2) = x, y
        return ((i1 + (-1) ** s1 * i2) % 4, s1 ^ s2)

    elements = [(a, (i, s)) for a in range(3) for i in range(4) for s in range(2)]

    def multiply(x, y):
        (a1, d1), (a2, d2) = x, y
        chi = (-1) ** d1[0]
        return ((a1 + chi * a2) % 3, d8_multiply(d1, d2))

    return regular_group(elements, multiply, [(1, (0, 0)), (0, (1, 0)), (0, (0, 1))])


def _sl_2_3() -> PermutationGroup:
    """SL(2,3)（F3² の非零ベクトル8個への作用）"""
    vectors = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]
    index = {vec: i for i, vec in enumerate(vectors)}

    def matrix_perm(mat):
        (a, b), (c, d) = mat
        return SymPermutation([
            index[((a * x + b * y) % 3, (c * x + d * y) % 3)] for x, y in vectors
        ])

    return PermutationGroup([matrix_perm(((1, 1), (0, 1))), matrix_perm(((1, 0), (1, 1)))])


def _pgl_3_2() -> PermutationGroup:
    """PGL(3,2) ≅ PSL(2,7)（射影直線 F7 ∪ {∞} への作用、∞ = 7）"""
    inf = 7

    def mobius(f):
        return SymPermutation([f(x) for x in range(8)])

    def translate(x):
        return inf if x == inf else (x + 1) % 7

    def scale(x):
        return inf if x == inf else (2 * x) % 7

    def invert(x):
        if x == inf:
            return 0
        if x == 0:
            return inf
        return (-pow(x, -1, 7)) % 7

    return PermutationGroup([mobius(translate), mobius(scale), mobius(invert)])


def _gf8_mul(a: int, b: int) -> int:
    """F8 = F2[x]/(x³+x+1) の積"""
    result = 0
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & 0b1000:
            a ^= 0b1011
    return result


def _e8_frob21() -> PermutationGroup:
    """E8:Frob21 ≅ AΓL(1,8)"""
    translate = SymPermutation([x ^ 1 for x in range(8)])
    scale = SymPermutation([_gf8_mul(2, x) for x in range(8)])
    frobenius = SymPermutation([_gf8_mul(x, x) for x in range(8)])
    return PermutationGroup([translate, scale, frobenius])


def _frob21() -> PermutationGroup:
    return semidirect_cyclic(7, 3, 2)


def _z(n: int) -> PermutationGroup:
    return CyclicGroup(n)


# 二面体群の名前は位数で書く（D24 は位数24）
CATALOG: Dict[int, List[Tuple[str, Callable[[], PermutationGroup]]]] = {
    6: [
        ("Z6", lambda: _z(6)),
        ("S3", lambda: SymmetricGroup(3)),
    ],
    24: [
        ("Z3:Z8", lambda: semidirect_cyclic(3, 8, 2)),
        ("Z24", lambda: _z(24)),
        ("SL(2,3)", _sl_2_3),
        ("Dic6", lambda: dicyclic(6)),
        ("Z4 x S3", lambda: DirectProduct(_z(4), SymmetricGroup(3))),
        ("D24", lambda: DihedralGroup(12)),
        ("Z2 x Dic3", lambda: DirectProduct(_z(2), semidirect_cyclic(3, 4, 2))),
        ("Z3:D8", _z3_by_d8),
        ("Z12 x Z2", lambda: DirectProduct(_z(12), _z(2))),
        ("Z3 x D8", lambda: DirectProduct(_z(3), DihedralGroup(4))),
        ("Z3 x Q8", lambda: DirectProduct(_z(3), dicyclic(2))),
        ("S4", lambda: SymmetricGroup(4)),
        ("A4 x Z2", lambda: DirectProduct(AlternatingGroup(4), _z(2))),
        ("Z2 x Z2 x S3", lambda: DirectProduct(_z(2), _z(2), SymmetricGroup(3))),
        ("Z6 x Z2 x Z2", lambda: DirectProduct(_z(6), _z(2), _z(2))),
    ],
    42: [
        ("Z42", lambda: _z(42)),
        ("Frob21 x Z2", lambda: DirectProduct(_frob21(), _z(2))),
        ("Z3 x D14", lambda: DirectProduct(_z(3), DihedralGroup(7))),
        ("Z7 x S3", lambda: DirectProduct(_z(7), SymmetricGroup(3))),
        ("D42", lambda: DihedralGroup(21)),
        ("Frob42", lambda: semidirect_cyclic(7, 6, 3)),
    ],
    168: [
        ("PGL(3,2)", _pgl_3_2),
        ("E8:Frob21", _e8_frob21),
        ("Z168", lambda: _z(168)),
        ("D168", lambda: DihedralGroup(84)),
        ("Frob21 x Z8", lambda: DirectProduct(_frob21(), _z(8))),
        ("Frob21 x Z4 x Z2", lambda: DirectProduct(_frob21(), _z(4), _z(2))),
        ("Frob21 x Z2 x Z2 x Z2", lambda: DirectProduct(_frob21(), _z(2), _z(2), _z(2))),
        ("Frob42 x Z4", lambda: DirectProduct(semidirect_cyclic(7, 6, 3), _z(4))),
        ("S3 x Z28", lambda: DirectProduct(SymmetricGroup(3), _z(28))),
        ("A4 x Z14", lambda: DirectProduct(AlternatingGroup(4), _z(14))),
        ("SL(2,3) x Z7", lambda: DirectProduct(_sl_2_3(), _z(7))),
        ("S4 x Z7", lambda: DirectProduct(SymmetricGroup(4), _z(7))),
        ("Z7:Z24", lambda: semidirect_cyclic(7, 24, 3)),
    ],
}


@lru_cache(maxsize=None)
def catalog_fingerprints(order: int) -> Tuple[Tuple[str, GroupFingerprint], ...]:
    """
    カタログの群の指紋（位数ごとにキャッシュ）

    Raises:
        RuntimeError: 構成した群の位数がカタログの位数と一致しない場合
    """
    result = []
    for name, build in CATALOG.get(order, []):
        group = build()
        fp = fingerprint_group(group)
        if fp.order != order:
            raise RuntimeError(f"{name}: 構成した群の位数 {fp.order} が {order} と一致しません")
        result.append((name, fp.with_name(name)))
    logger.debug(f"位数 {order} のカタログ指紋 {len(result)}個を計算")
    return tuple(result)


def ambiguous_names(order: int) -> List[str]:
    """指紋が他の群と衝突して名前を付けられない群"""
    entries = catalog_fingerprints(order)
    keys = [fp.key for _, fp in entries]
    return [name for name, fp in entries if keys.count(fp.key) > 1]


def recognise(fp: GroupFingerprint) -> Optional[str]:
    """
    指紋から群の名前を決める

    巡回群はどの位数でも名前を付ける。それ以外はカタログ内で指紋が一意な場合のみ。
    収録が部分的な位数では UNIQUE_IN_ORDER の群に限る
    """
    if fp.element_order_histogram.get(fp.order):
        return f"Z{fp.order}"
    matches = [name for name, entry in catalog_fingerprints(fp.order) if entry.key == fp.key]
    if len(matches) != 1 or matches[0] in ambiguous_names(fp.order):
        return None
    if fp.order not in COMPLETE_ORDERS and matches[0] not in UNIQUE_IN_ORDER.get(fp.order, ()):
        logger.debug(f"位数 {fp.order} のカタログは部分的なため {matches[0]} の名前は付けません")
        return None
    return matches[0]


def name_fingerprint(fp: GroupFingerprint) -> GroupFingerprint:
    return fp.with_name(recognise(fp))
