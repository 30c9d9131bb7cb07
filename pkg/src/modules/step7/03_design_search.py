"""
Step7-03: 符号に含まれる設計の探索
置換群で不変な設計を、重み k の符号語の軌道を選ぶ完全被覆として探す

各点がちょうど k 個のブロックに含まれ、選んだ語どうしが λ 点で交わるように軌道を選ぶ。
まだ k 回覆われていない最小の点を含む軌道で分岐し、試し終えた軌道は兄弟の枝から除く
"""

import importlib
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

_step1 = importlib.import_module('src.modules.step1')
_binary_code_module = importlib.import_module('src.modules.step7.01_binary_code')
_weight_module = importlib.import_module('src.modules.step7.02_weight_enumeration')

IncidenceMatrix = _step1.IncidenceMatrix
DesignParams = _step1.DesignParams
validate_design = _step1.validate_design
BinaryCode = _binary_code_module.BinaryCode
CodeInvarianceError = _binary_code_module.CodeInvarianceError
codewords_of_weight = _weight_module.codewords_of_weight
word_orbits = _weight_module.word_orbits

logger = logging.getLogger(__name__)


@dataclass
class DesignSearchResult:
    designs: List[IncidenceMatrix] = field(default_factory=list)
    complete: bool = True
    nodes: int = 0
    orbits: int = 0


class _BudgetExhausted(Exception):
    pass


def _orbit_usable(orbit: Sequence[int], params: DesignParams) -> bool:
    """軌道内の語どうしが λ 点で交わり、どの点も k 回を超えて覆わないか"""
    if len(orbit) > params.v:
        return False
    for j in range(params.v):
        if sum((w >> j) & 1 for w in orbit) > params.k:
            return False
    lam = params.lam
    return all(
        (orbit[i] & orbit[j]).bit_count() == lam
        for i in range(len(orbit)) for j in range(i + 1, len(orbit))
    )


def _compatible(orbit: Sequence[int], chosen: Sequence[int], lam: int) -> bool:
    return all((a & b).bit_count() == lam for a in orbit for b in chosen)


class _OrbitCoverSearch:
    def __init__(self, orbits: List[Tuple[int, ...]], params: DesignParams, budget: Optional[int]):
        self.orbits = orbits
        self.params = params
        self.budget = budget
        self.nodes = 0
        self.found: List[Tuple[int, ...]] = []
        # 軌道ごとの点の出現回数
        v = params.v
        self.point_counts = [
            [sum((w >> j) & 1 for w in orbit) for j in range(v)] for orbit in orbits
        ]

    def _tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _BudgetExhausted()

    def _fits(self, index: int, counts: List[int], total: int) -> bool:
        if total + len(self.orbits[index]) > self.params.v:
            return False
        k = self.params.k
        return all(c + d <= k for c, d in zip(counts, self.point_counts[index]))

    def _add(self, index: int, counts: List[int]) -> List[int]:
        return [c + d for c, d in zip(counts, self.point_counts[index])]

    def branches(self, candidates: List[int], counts: List[int], total: int) -> Tuple[int, List[int]]:
        """分岐に使う点と、その点を含む候補軌道"""
        k = self.params.k
        point = next(j for j, c in enumerate(counts) if c < k)
        return point, [i for i in candidates if self.point_counts[i][point] > 0]

    def search(self, candidates: List[int], chosen: List[int], counts: List[int], total: int):
        self._tick()
        lam = self.params.lam
        if total == self.params.v:
            if all(c == self.params.k for c in counts):
                self.found.append(tuple(sorted(chosen)))
            return
        candidates = [i for i in candidates if self._fits(i, counts, total)]
        point, options = self.branches(candidates, counts, total)
        excluded = set()
        for index in options:
            excluded.add(index)
            orbit = self.orbits[index]
            next_candidates = [
                i for i in candidates
                if i not in excluded and _compatible(self.orbits[i], orbit, lam)
            ]
            self.search(
                next_candidates,
                chosen + list(orbit),
                self._add(index, counts),
                total + len(orbit),
            )

    def run_branch(self, position: int) -> bool:
        """最上位の position 番目の枝だけを探索（予算内で完了したか）"""
        v = self.params.v
        counts = [0] * v
        candidates = list(range(len(self.orbits)))
        _, options = self.branches(candidates, counts, 0)
        index = options[position]
        orbit = self.orbits[index]
        rest = [
            i for i in candidates
            if i not in options[:position + 1] and _compatible(self.orbits[i], orbit, self.params.lam)
        ]
        try:
            self.search(rest, list(orbit), self._add(index, counts), len(orbit))
            return True
        except _BudgetExhausted:
            return False


def _search_branch(orbits, params, budget, position):
    """ワーカー処理: 最上位の1つの枝"""
    search = _OrbitCoverSearch(orbits, params, budget)
    complete = search.run_branch(position)
    return search.found, complete, search.nodes


def designs_in_code(code: BinaryCode, params: DesignParams, generators: Sequence = (),
                    budget: Optional[int] = None, n_jobs: int = 1,
                    enumeration_budget: Optional[int] = None) -> DesignSearchResult:
    """
    符号に含まれ、置換群で不変な対称設計を全て求める

    Args:
        code: 二元符号（長さ v）
        params: 設計パラメータ（語の重みは k）
        generators: 部分群の生成元（step1 の Permutation）
        budget: 最上位の枝ごとの探索ノード数の上限（None は無制限）
        n_jobs: 最上位の枝の並列数
        enumeration_budget: 重み k の語の列挙に使う符号語数の上限

    Raises:
        ValueError: 符号長が v と一致しない場合
        CodeInvarianceError: 生成元が符号を保たない場合
    """
    if code.length != params.v:
        raise ValueError(f"符号長 {code.length} が v={params.v} と一致しません")
    for g in generators:
        if len(g) != code.length:
            raise ValueError(f"置換の長さ {len(g)} が符号長 {code.length} と一致しません")
        if not code.is_invariant_under(g):
            raise CodeInvarianceError("生成元が符号を保ちません")

    words = codewords_of_weight(code, params.k, enumeration_budget, n_jobs)
    orbits = [
        tuple(orbit) for orbit in word_orbits(words, list(generators))
        if _orbit_usable(orbit, params)
    ]
    logger.debug(f"重み {params.k} の語 {len(words)}個 → 使える軌道 {len(orbits)}個")
    result = DesignSearchResult(orbits=len(orbits))
    if not orbits:
        return result

    root_search = _OrbitCoverSearch(orbits, params, budget)
    _, options = root_search.branches(list(range(len(orbits))), [0] * params.v, 0)
    positions = range(len(options))
    if n_jobs > 1 and len(options) > 1:
        outcomes = Parallel(n_jobs=n_jobs)(
            delayed(_search_branch)(orbits, params, budget, pos) for pos in positions
        )
    else:
        outcomes = [_search_branch(orbits, params, budget, pos) for pos in positions]

    found = sorted({design for part, _, _ in outcomes for design in part})
    for rows in found:
        m = IncidenceMatrix(params, rows)
        report = validate_design(m)
        if not report["valid"] or not all(code.contains(r) for r in rows):
            raise RuntimeError(f"探索結果が符号内の設計になっていません: {report['error']}")
        result.designs.append(m)
    result.complete = all(complete for _, complete, _ in outcomes)
    result.nodes = sum(nodes for _, _, nodes in outcomes)
    if not result.complete:
        logger.warning(f"⚠️ 符号内の設計探索が予算で打ち切られました (ノード {result.nodes})")
    return result
