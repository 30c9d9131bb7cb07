"""
Step3-04: 軌道行列生成
行プロトタイプを固定ブロック側から順に置くバックトラック探索（同型除去付き）
"""

import importlib
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

_step1 = importlib.import_module('src.modules.step1')
_orbit_structure = importlib.import_module('src.modules.step3.01_orbit_structure')
_row_prototypes = importlib.import_module('src.modules.step3.02_row_prototypes')
_canonical_form = importlib.import_module('src.modules.step3.03_canonical_form')

DesignParams = _step1.DesignParams
OrbitStructure = _orbit_structure.OrbitStructure
OrbitMatrix = _orbit_structure.OrbitMatrix
OrbitStructureError = _orbit_structure.OrbitStructureError
check_orbit_matrix = _orbit_structure.check_orbit_matrix
prototypes_for_size = _row_prototypes.prototypes_for_size
entry_upper_bounds = _row_prototypes.entry_upper_bounds
canonical_entries = _canonical_form.canonical_entries
EQUIVALENCE_FULL = _canonical_form.EQUIVALENCE_FULL
EQUIVALENCE_ROWS = _canonical_form.EQUIVALENCE_ROWS

logger = logging.getLogger(__name__)


@dataclass
class GenerationResult:
    """軌道行列生成の結果"""

    matrices: List[OrbitMatrix] = field(default_factory=list)
    complete: bool = True
    nodes: int = 0
    partitions_total: int = 0
    partitions_explored: int = 0


def split_budget(budget: Optional[int], parts: int) -> List[Optional[int]]:
    """ノード予算を分割（先頭から余りを1ずつ配分）"""
    if budget is None:
        return [None] * parts
    if parts == 0:
        return []
    base, extra = divmod(budget, parts)
    return [base + (1 if i < extra else 0) for i in range(parts)]


class OrbitMatrixSearch:
    """
    1つの軌道構造に対する軌道行列の探索器

    行 t には長さ Ω_t のプロトタイプを置く。同じ長さの行は辞書式非減少、
    それまでの行で区別できない列（セル）内では値が非減少。葉で標準形と一致するもののみ出力
    """

    def __init__(
        self,
        params: DesignParams,
        structure: OrbitStructure,
        mode: str = EQUIVALENCE_FULL,
        stabilizer_divisibility: bool = False,
    ):
        if structure.v != params.v:
            raise OrbitStructureError(f"軌道長の総和 {structure.v} が v={params.v} と一致しません")
        if not structure.is_sorted():
            raise OrbitStructureError("軌道行列生成には昇順の軌道構造が必要です")

        self.params = params
        self.structure = structure
        self.mode = mode
        self.size = structure.n
        group_order = structure.group_order

        omega = np.array(structure.point_sizes, dtype=np.int64)
        self.block_sizes = list(structure.block_sizes)
        self.weights = group_order // omega
        self.ortho_target = group_order * params.lam
        self.col_target = params.k * omega

        by_size: Dict[int, np.ndarray] = {}
        for block_size in sorted(set(self.block_sizes)):
            protos = prototypes_for_size(params, structure, block_size, stabilizer_divisibility)
            by_size[block_size] = np.array(protos, dtype=np.int64).reshape(len(protos), self.size)
        self.row_protos = [by_size[b] for b in self.block_sizes]

        # 行 t より後の行で埋められる列ごとの最大量
        upper = {b: np.array(entry_upper_bounds(params, structure, b), dtype=np.int64) for b in by_size}
        self.capacity_after = [np.zeros(self.size, dtype=np.int64) for _ in range(self.size)]
        running = np.zeros(self.size, dtype=np.int64)
        for t in range(self.size - 1, -1, -1):
            self.capacity_after[t] = running.copy()
            running = running + self.block_sizes[t] * upper[self.block_sizes[t]]

        self.same_class_as_prev = [
            t > 0 and self.block_sizes[t] == self.block_sizes[t - 1] for t in range(self.size)
        ]
        if mode == EQUIVALENCE_ROWS:
            self.initial_cells: List[Tuple[int, int]] = []
        else:
            self.initial_cells = []
            start = 0
            for j in range(1, self.size + 1):
                if j == self.size or structure.point_sizes[j] != structure.point_sizes[start]:
                    self.initial_cells.append((start, j))
                    start = j

        self.nodes = 0
        self.budget: Optional[int] = None
        self.truncated = False
        self.found: List[Tuple[Tuple[int, ...], ...]] = []

    def candidates(self, t: int, rows: List[np.ndarray], proto_idx: List[int],
                   colsum: np.ndarray, cells: List[Tuple[int, int]]) -> List[int]:
        """行 t に置けるプロトタイプの添字（昇順）"""
        protos = self.row_protos[t]
        lo = proto_idx[t - 1] if self.same_class_as_prev[t] else 0
        sub = protos[lo:]
        if sub.shape[0] == 0:
            return []
        new_colsum = colsum + self.block_sizes[t] * sub
        ok = (new_colsum <= self.col_target).all(axis=1)
        ok &= ((self.col_target - new_colsum) <= self.capacity_after[t]).all(axis=1)
        for row in rows:
            ok &= (sub @ (self.weights * row)) == self.ortho_target
        for a, b in cells:
            if b - a >= 2:
                ok &= (np.diff(sub[:, a:b], axis=1) >= 0).all(axis=1)
        return [lo + int(i) for i in np.flatnonzero(ok)]

    @staticmethod
    def refine_cells(cells: List[Tuple[int, int]], row: np.ndarray) -> List[Tuple[int, int]]:
        new_cells = []
        for a, b in cells:
            start = a
            for j in range(a + 1, b + 1):
                if j == b or row[j] != row[start]:
                    if j - start >= 2:
                        new_cells.append((start, j))
                    start = j
        return new_cells

    def _consume_node(self) -> bool:
        """ノード予算を1つ消費（使い切っていれば打ち切り）"""
        if self.budget is not None and self.nodes >= self.budget:
            self.truncated = True
            return False
        self.nodes += 1
        return True

    def _extend(self, t: int, rows, proto_idx, colsum, cells):
        if self.truncated:
            return
        if t == self.size:
            self._emit(rows)
            return
        for index in self.candidates(t, rows, proto_idx, colsum, cells):
            if not self._consume_node():
                return
            row = self.row_protos[t][index]
            rows.append(row)
            proto_idx.append(index)
            self._extend(
                t + 1, rows, proto_idx,
                colsum + self.block_sizes[t] * row,
                self.refine_cells(cells, row),
            )
            rows.pop()
            proto_idx.pop()
            if self.truncated:
                return

    def _emit(self, rows: List[np.ndarray]):
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        structure = self.structure
        if canonical_entries(entries, structure.point_sizes, structure.block_sizes, self.mode) != entries:
            return
        om = OrbitMatrix(structure, entries)
        if not check_orbit_matrix(om, self.params):
            raise RuntimeError(f"生成した軌道行列が条件を満たしません: {entries}")
        self.found.append(entries)

    def first_row_candidates(self) -> List[int]:
        colsum = np.zeros(self.size, dtype=np.int64)
        return self.candidates(0, [], [], colsum, list(self.initial_cells))

    def run_partition(self, first_index: int, budget: Optional[int]) -> Dict:
        """
        先頭行を固定した部分木を探索

        Returns:
            Dict: {"first_index", "matrices", "complete", "nodes"}
        """
        self.nodes = 0
        self.budget = budget
        self.truncated = False
        self.found = []
        if self._consume_node():
            row = self.row_protos[0][first_index]
            self._extend(
                1, [row], [first_index],
                self.block_sizes[0] * row,
                self.refine_cells(list(self.initial_cells), row),
            )
        return {
            "first_index": first_index,
            "matrices": list(self.found),
            "complete": not self.truncated,
            "nodes": self.nodes,
        }


def _explore_partitions(params, structure, mode, stabilizer_divisibility, tasks) -> List[Dict]:
    """ワーカー処理: (先頭行, 予算) の組をまとめて探索"""
    search = OrbitMatrixSearch(params, structure, mode, stabilizer_divisibility)
    return [search.run_partition(index, budget) for index, budget in tasks]


def shard_partitions(count: int, percent: Optional[float]) -> Optional[List[int]]:
    """先頭行候補の先頭 percent% の添字（最低1つ、None は全部）"""
    if percent is None:
        return None
    if not 0 < percent <= 100:
        raise ValueError(f"シャードの割合は (0, 100] で指定してください: {percent}")
    return list(range(min(count, max(1, math.ceil(count * percent / 100)))))


def redistribute_budget(budget: int, results: Sequence[Dict]) -> Dict[int, int]:
    """
    完了した分割が使い残した予算を打ち切られた分割へ配分

    Returns:
        Dict[int, int]: 打ち切られた分割の位置 → 再探索の予算
    """
    leftover = budget - sum(r["nodes"] for r in results)
    truncated = [i for i, r in enumerate(results) if not r["complete"]]
    if leftover <= 0 or not truncated:
        return {}
    extra = split_budget(leftover, len(truncated))
    return {i: results[i]["nodes"] + e for i, e in zip(truncated, extra) if e > 0}


def generate_orbit_matrices(
    params: DesignParams,
    structure: OrbitStructure,
    budget: Optional[int] = None,
    n_jobs: int = 1,
    mode: str = EQUIVALENCE_FULL,
    stabilizer_divisibility: bool = False,
    partitions: Optional[Sequence[int]] = None,
    progress: bool = False,
    shard_percent: Optional[float] = None,
) -> GenerationResult:
    """
    軌道構造に対する軌道行列を同値類ごとに1つずつ生成

    予算は分割ごとに均等に配り、完了した分割の使い残しは打ち切られた分割に回して
    最初から探索し直す。ワーカー数によらず同じ結果になる

    Args:
        params: 設計パラメータ
        structure: 昇順の軌道構造
        budget: ノード予算（置いた行の数、None は無制限）
        n_jobs: 並列ワーカー数
        mode: 同値の取り方（"full" / "rows"）
        stabilizer_divisibility: 成分を安定化群の軌道長の倍数に制限する
        partitions: 探索する先頭行候補の添字（None は全部）
        progress: 進捗バーを表示する
        shard_percent: 先頭行候補の先頭から探索する割合（partitions より優先）

    Returns:
        GenerationResult: 辞書式順の軌道行列と完了フラグ

    Raises:
        OrbitStructureError: 構造がパラメータと整合しない場合
    """
    search = OrbitMatrixSearch(params, structure, mode, stabilizer_divisibility)
    first_rows = search.first_row_candidates()
    if shard_percent is not None:
        partitions = shard_partitions(len(first_rows), shard_percent)
    selected = list(range(len(first_rows))) if partitions is None else [
        i for i in partitions if 0 <= i < len(first_rows)
    ]
    budgets = split_budget(budget, len(selected))
    tasks = [(first_rows[i], b) for i, b in zip(selected, budgets)]
    logger.debug(f"軌道行列生成: 先頭行候補 {len(first_rows)}個中 {len(tasks)}個を探索")

    n_jobs = max(1, int(n_jobs or 1))

    def explore(batch: List[Tuple[int, Optional[int]]]) -> List[Dict]:
        if n_jobs == 1:
            return [search.run_partition(*task)
                    for task in tqdm(batch, desc="軌道行列生成", disable=not progress)]
        chunk_count = min(len(batch), n_jobs * 4) or 1
        chunks = [batch[i::chunk_count] for i in range(chunk_count)]
        chunk_results = Parallel(n_jobs=n_jobs)(
            delayed(_explore_partitions)(params, structure, mode, stabilizer_divisibility, chunk)
            for chunk in chunks
        )
        by_index = {r["first_index"]: r for chunk in chunk_results for r in chunk}
        return [by_index[index] for index, _ in batch]

    partition_results = explore(tasks)
    while budget is not None:
        retry = redistribute_budget(budget, partition_results)
        if not retry:
            break
        logger.debug(f"軌道行列生成: 残り予算を打ち切られた分割 {len(retry)}個に配分")
        rerun = explore([(tasks[i][0], b) for i, b in retry.items()])
        for i, part in zip(retry, rerun):
            partition_results[i] = part

    result = GenerationResult(partitions_total=len(first_rows), partitions_explored=len(tasks))
    found = []
    for part in partition_results:
        found.extend(part["matrices"])
        result.nodes += part["nodes"]
        if not part["complete"]:
            result.complete = False
    if partitions is not None and len(selected) < len(first_rows):
        # 一部の先頭行のみの探索は完全探索ではない
        result.complete = False
    result.matrices = [OrbitMatrix(structure, entries) for entries in sorted(found)]
    logger.debug(
        f"軌道行列生成: {len(result.matrices)}個, ノード {result.nodes}, "
        f"{'完了' if result.complete else '打ち切り'}"
    )
    return result
