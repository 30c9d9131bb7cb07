"""
Step7-02: 重み分布
グレイ符号順の全列挙（1ステップで基底を1本だけ加える）による重み w の符号語の数え上げ

上位の基底の組合せを固定して列挙を分割し、joblib で並列に数える
"""

import importlib
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from joblib import Parallel, delayed

_binary_code_module = importlib.import_module('src.modules.step7.01_binary_code')

BinaryCode = _binary_code_module.BinaryCode
CodeBudgetError = _binary_code_module.CodeBudgetError

logger = logging.getLogger(__name__)

# 分割に使う上位基底の本数の上限
_MAX_SPLIT_BITS = 6


@dataclass
class WeightClassReport:
    """
    Attributes:
        weight: 重み
        count: 重み weight の符号語数
        orbit_summary: 置換群による軌道の要約（orbits, orbit_lengths）
    """

    weight: int
    count: int
    orbit_summary: Optional[Dict] = None

    def to_dict(self) -> Dict:
        return {"weight": self.weight, "count": self.count, "orbit_summary": self.orbit_summary}


def _check_budget(code: BinaryCode, budget: Optional[int]) -> None:
    size = 1 << code.dimension
    if budget is not None and size > budget:
        raise CodeBudgetError(
            f"次元 {code.dimension} の符号語 {size}個は予算 {budget} を超えます"
        )


def _chunk_starts(code: BinaryCode, n_jobs: int):
    """上位基底の組合せごとの開始語と、グレイ符号で回す下位基底"""
    split = 0
    while (1 << split) < n_jobs and split < min(_MAX_SPLIT_BITS, code.dimension):
        split += 1
    low = list(code.basis[:code.dimension - split])
    high = code.basis[code.dimension - split:]
    starts = []
    for selector in range(1 << split):
        word = 0
        for i, row in enumerate(high):
            if (selector >> i) & 1:
                word ^= row
        starts.append(word)
    return starts, low


def _gray_walk(start: int, low: Sequence[int]):
    """start から始めて下位基底の全組合せを1本ずつ足しながら列挙"""
    word = start
    yield word
    for i in range(1, 1 << len(low)):
        word ^= low[(i & -i).bit_length() - 1]
        yield word


def _distribution_chunk(start: int, low: Sequence[int]) -> Counter:
    return Counter(word.bit_count() for word in _gray_walk(start, low))


def _words_chunk(start: int, low: Sequence[int], weight: int) -> List[int]:
    return [word for word in _gray_walk(start, low) if word.bit_count() == weight]


def weight_distribution(code: BinaryCode, budget: Optional[int] = None, n_jobs: int = 1) -> List[int]:
    """
    全重み分布 A_0..A_n

    Raises:
        CodeBudgetError: 2^次元 が予算を超える場合
    """
    _check_budget(code, budget)
    starts, low = _chunk_starts(code, n_jobs)
    if n_jobs > 1 and len(starts) > 1:
        parts = Parallel(n_jobs=n_jobs)(delayed(_distribution_chunk)(s, low) for s in starts)
    else:
        parts = [_distribution_chunk(s, low) for s in starts]
    total = sum(parts, Counter())
    return [total.get(w, 0) for w in range(code.length + 1)]


def codewords_of_weight(code: BinaryCode, weight: int, budget: Optional[int] = None,
                        n_jobs: int = 1) -> List[int]:
    """重み weight の符号語（昇順）"""
    _check_budget(code, budget)
    starts, low = _chunk_starts(code, n_jobs)
    if n_jobs > 1 and len(starts) > 1:
        parts = Parallel(n_jobs=n_jobs)(delayed(_words_chunk)(s, low, weight) for s in starts)
    else:
        parts = [_words_chunk(s, low, weight) for s in starts]
    return sorted(word for part in parts for word in part)


def word_orbits(words: Sequence[int], generators: Sequence) -> List[List[int]]:
    """
    語の集合の置換群による軌道（各軌道は昇順、軌道は最小元の昇順）

    Args:
        words: 置換群で閉じた語の集合
        generators: 点置換（step1 の Permutation）
    """
    remaining = set(words)
    orbits = []
    for word in sorted(words):
        if word not in remaining:
            continue
        remaining.discard(word)
        orbit = [word]
        frontier = [word]
        while frontier:
            x = frontier.pop()
            for g in generators:
                y = g.apply_to_mask(x)
                if y in remaining:
                    remaining.discard(y)
                    orbit.append(y)
                    frontier.append(y)
        orbits.append(sorted(orbit))
    return orbits


def weight_count(code: BinaryCode, weight: int, budget: Optional[int] = None,
                 n_jobs: int = 1, generators: Optional[Sequence] = None) -> WeightClassReport:
    """
    重み weight の符号語数

    Args:
        code: 二元符号
        weight: 重み
        budget: 列挙する符号語数の上限（None は無制限）
        n_jobs: 並列数
        generators: 指定した場合、その置換群による軌道の要約を付ける

    Raises:
        CodeBudgetError: 2^次元 が予算を超える場合
    """
    if generators:
        words = codewords_of_weight(code, weight, budget, n_jobs)
        orbits = word_orbits(words, generators)
        lengths = Counter(len(o) for o in orbits)
        summary = {
            "orbits": len(orbits),
            "orbit_lengths": {str(k): lengths[k] for k in sorted(lengths)},
        }
        report = WeightClassReport(weight, len(words), summary)
    else:
        distribution = weight_distribution(code, budget, n_jobs)
        count = distribution[weight] if 0 <= weight <= code.length else 0
        report = WeightClassReport(weight, count)
    logger.debug(f"重み {weight}: {report.count}個 (次元 {code.dimension})")
    return report
