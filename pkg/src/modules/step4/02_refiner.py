"""
Step4-02: 軌道行列の細分化
親軌道行列（位数 pq）から位数 p の部分群に関する子軌道行列を探索する

分割された親行は代表子行 R で決まり、子 u の行は R の各区間を u だけ回転したもの。
子行列の同値は分割群ごとの独立な Z_q 回転（行群・列群）で、
代表行の区間列が辞書式最小となるものだけを出力する
"""

import importlib
import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import isprime

_step1 = importlib.import_module('src.modules.step1')
_step3 = importlib.import_module('src.modules.step3')
_refinement_map = importlib.import_module('src.modules.step4.01_refinement_map')

DesignParams = _step1.DesignParams
OrbitMatrix = _step3.OrbitMatrix
check_orbit_matrix = _step3.check_orbit_matrix
RefinementError = _refinement_map.RefinementError
RefinedOrbitMatrix = _refinement_map.RefinedOrbitMatrix
build_refinement_map = _refinement_map.build_refinement_map
identity_refinement = _refinement_map.identity_refinement
expand_representatives = _refinement_map.expand_representatives
check_refinement = _refinement_map.check_refinement
rotate = _refinement_map.rotate

logger = logging.getLogger(__name__)

Segment = Tuple[int, ...]


@dataclass
class RefinementResult:
    """1つの親に対する細分化結果"""

    children: List[RefinedOrbitMatrix] = field(default_factory=list)
    complete: bool = True
    nodes: int = 0


@lru_cache(maxsize=None)
def compositions(total: int, parts: int, cap: int) -> Tuple[Segment, ...]:
    """total を各 cap 以下の parts 個の非負整数に分ける方法（辞書式昇順）"""
    return tuple(
        c for c in itertools.product(range(min(cap, total) + 1), repeat=parts) if sum(c) == total
    )


def is_min_rotation(segment: Segment) -> bool:
    return all(segment <= rotate(segment, d) for d in range(1, len(segment)))


def is_constant(segment: Segment) -> bool:
    return len(set(segment)) <= 1


class _RollbackUnionFind:
    """巻き戻し可能な Union-Find（経路圧縮なし）"""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size
        self.history: List[Optional[Tuple[int, int, bool]]] = []

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            self.history.append(None)
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        bumped = self.rank[ra] == self.rank[rb]
        self.parent[rb] = ra
        if bumped:
            self.rank[ra] += 1
        self.history.append((ra, rb, bumped))
        return True

    def undo(self):
        entry = self.history.pop()
        if entry is None:
            return
        ra, rb, bumped = entry
        self.parent[rb] = rb
        if bumped:
            self.rank[ra] -= 1


def _dot(x: Segment, y: Segment) -> int:
    return sum(a * b for a, b in zip(x, y))


def _greedy_dot_bounds(total: int, cap: int, y: Segment) -> Tuple[int, int]:
    """x が total の cap 以下の分割を動くときの <x, y> の最小・最大"""
    def fill(order: Sequence[int]) -> int:
        remaining, value = total, 0
        for yv in order:
            take = min(cap, remaining)
            value += take * yv
            remaining -= take
        return value
    ordered = sorted(y)
    return fill(ordered), fill(ordered[::-1])


def canonical_representatives(r: RefinedOrbitMatrix) -> Tuple[Tuple[Segment, ...], ...]:
    """
    行群・列群の独立な回転に関する代表行の辞書式最小形

    回転の組は区間ごとの差 t_I - w_J でのみ効く。区間を順に見て、
    まだ結ばれていない変数どうしを最小の回転で結ぶ貪欲法で求まる（q は素数）
    """
    ref_map = r.map
    rows = r.representative_rows()
    split_rows = [i for i in range(len(rows)) if ref_map.is_split_row(i)]
    split_cols = [j for j in range(len(ref_map.column_split)) if ref_map.is_split_column(j)]
    row_var = {i: n for n, i in enumerate(split_rows)}
    col_var = {j: len(split_rows) + n for n, j in enumerate(split_cols)}

    # 変数ごとの (代表, 代表からのずれ)
    parent = list(range(len(split_rows) + len(split_cols)))
    offset = [0] * len(parent)
    q = ref_map.q

    def find(x: int) -> Tuple[int, int]:
        shift = 0
        while parent[x] != x:
            shift += offset[x]
            x = parent[x]
        return x, shift % q

    result = [list(row) for row in rows]
    for i in split_rows:
        for j in split_cols:
            segment = rows[i][j]
            if is_constant(segment):
                continue
            (ra, ta), (rb, tb) = find(row_var[i]), find(col_var[j])
            if ra == rb:
                result[i][j] = rotate(segment, ta - tb)
                continue
            best = min(range(q), key=lambda d: rotate(segment, d))
            # t_I - w_J = best となるよう rb の成分をずらして結合
            parent[rb] = ra
            offset[rb] = (ta - tb - best) % q
            result[i][j] = rotate(segment, best)
    return tuple(tuple(row) for row in result)


def is_canonical_refinement(r: RefinedOrbitMatrix) -> bool:
    return canonical_representatives(r) == r.representative_rows()


class RefinementSearch:
    """1つの親軌道行列に対する子軌道行列の探索器"""

    def __init__(self, parent: OrbitMatrix, params: DesignParams, p: int, q: int):
        self.map = build_refinement_map(parent, params, p, q)
        self.params = params
        self.p, self.q = p, q
        s = parent.entries
        self.s = s
        n = parent.structure.n
        child = self.map.child_structure

        self.split_rows = [i for i in range(n) if self.map.is_split_row(i)]
        self.unsplit_rows = [i for i in range(n) if not self.map.is_split_row(i)]
        self.split_cols = [j for j in range(n) if self.map.is_split_column(j)]
        self.col_cap = [child.point_sizes[self.map.column_split[j][0]] for j in range(n)]
        self.col_weight = [p // cap for cap in self.col_cap]
        self.off_target = p * params.lam
        self.diag_target = [
            p * params.lam + (p // child.block_sizes[self.map.row_split[i][0]]) * params.n
            for i in range(n)
        ]

        self.row_var = {i: t for t, i in enumerate(self.split_rows)}
        self.col_var = {j: len(self.split_rows) + t for t, j in enumerate(self.split_cols)}
        self.uf = _RollbackUnionFind(len(self.split_rows) + len(self.split_cols))

        self.rows: Dict[int, List[Segment]] = {}
        self.nodes = 0
        self.budget: Optional[int] = None
        self.truncated = False
        self.found: List[Tuple[Tuple[Segment, ...], ...]] = []

    # ---- 内積 ----

    def inner(self, x: Sequence[Segment], y: Sequence[Segment], shift: int = 0) -> int:
        """代表行 x と、代表行 y の子を shift だけ回転したものの重み付き内積"""
        total = 0
        for j, (xs, ys) in enumerate(zip(x, y)):
            if len(ys) > 1 and shift:
                ys = rotate(ys, -shift)
            total += self.col_weight[j] * _dot(xs, ys)
        return total

    def _forced_row(self, i: int) -> Optional[List[Segment]]:
        """分割されない親行の代表行（分割列では一定値）"""
        row: List[Segment] = []
        for j, value in enumerate(self.s[i]):
            if self.map.is_split_column(j):
                if value % self.q or value // self.q > self.col_cap[j]:
                    return None
                row.append((value // self.q,) * self.q)
            else:
                row.append((value,))
        return row

    def _prepare_unsplit(self) -> bool:
        for i in self.unsplit_rows:
            row = self._forced_row(i)
            if row is None:
                logger.debug(f"親行 {i} は分割列で q の倍数でないため子を持ちません")
                return False
            if self.inner(row, row) != self.diag_target[i]:
                return False
            for prev, prev_row in self.rows.items():
                if self.inner(row, prev_row) != self.off_target:
                    return False
            self.rows[i] = row
        return True

    # ---- 分割行の探索 ----

    def _row_context(self, i: int) -> Dict:
        """分割行 i の探索に使う制約（既存行との内積と残り区間の上下界）"""
        base: List[Segment] = []
        for j, value in enumerate(self.s[i]):
            base.append(None if self.map.is_split_column(j) else (value,))  # type: ignore[arg-type]

        targets = []
        for prev, prev_row in self.rows.items():
            shifts = range(self.q) if self.map.is_split_row(prev) else range(1)
            for u in shifts:
                known = sum(
                    self.col_weight[j] * base[j][0] * prev_row[j][0]
                    for j in range(len(base)) if base[j] is not None
                )
                bounds = []
                for j in self.split_cols:
                    y = rotate(prev_row[j], -u)
                    lo, hi = _greedy_dot_bounds(self.s[i][j], self.col_cap[j], y)
                    bounds.append((self.col_weight[j] * lo, self.col_weight[j] * hi))
                targets.append({"row": prev_row, "shift": u, "value": known, "bounds": bounds})

        self_known = sum(
            self.col_weight[j] * base[j][0] ** 2 for j in range(len(base)) if base[j] is not None
        )
        self_bounds = []
        for j in self.split_cols:
            total, cap, w = self.s[i][j], self.col_cap[j], self.col_weight[j]
            low, extra = divmod(total, self.q)
            diag_lo = (self.q - extra) * low * low + extra * (low + 1) ** 2
            full, rest = divmod(total, cap) if cap else (0, 0)
            diag_hi = full * cap * cap + rest * rest
            self_bounds.append(((w * diag_lo, w * diag_hi), (0, w * total * min(cap, total))))

        return {"base": base, "targets": targets, "self_known": self_known, "self_bounds": self_bounds}

    def _suffix_ok(self, value: int, bounds: Sequence[Tuple[int, int]], m: int, target: int) -> bool:
        lo = sum(b[0] for b in bounds[m:])
        hi = sum(b[1] for b in bounds[m:])
        return value + lo <= target <= value + hi

    def _consume_node(self) -> bool:
        if self.budget is not None and self.nodes >= self.budget:
            self.truncated = True
            return False
        self.nodes += 1
        return True

    def _place(self, row_pos: int, m: int, context: Dict, chosen: List[Segment],
               self_partial: List[int]):
        if self.truncated:
            return
        i = self.split_rows[row_pos]
        if m == len(self.split_cols):
            self._complete_row(row_pos, context, chosen)
            return

        j = self.split_cols[m]
        must_be_minimal = self.uf.find(self.row_var[i]) != self.uf.find(self.col_var[j])
        for segment in compositions(self.s[i][j], self.q, self.col_cap[j]):
            constant = is_constant(segment)
            if must_be_minimal and not constant and not is_min_rotation(segment):
                continue

            # 既存行との部分内積
            w = self.col_weight[j]
            feasible = True
            gains = []
            for target in context["targets"]:
                y = rotate(target["row"][j], -target["shift"])
                gain = w * _dot(segment, y)
                if not self._suffix_ok(target["value"] + gain, target["bounds"], m + 1, self.off_target):
                    feasible = False
                    break
                gains.append(gain)
            if not feasible:
                continue

            new_self = []
            for u in range(self.q):
                value = self_partial[u] + w * _dot(segment, rotate(segment, -u))
                target = self.diag_target[i] if u == 0 else self.off_target
                bounds = [b[0] if u == 0 else b[1] for b in context["self_bounds"]]
                if not self._suffix_ok(value, bounds, m + 1, target):
                    feasible = False
                    break
                new_self.append(value)
            if not feasible:
                continue

            if not self._consume_node():
                return
            for target, gain in zip(context["targets"], gains):
                target["value"] += gain
            joined = not constant
            if joined:
                self.uf.union(self.row_var[i], self.col_var[j])
            chosen.append(segment)

            self._place(row_pos, m + 1, context, chosen, new_self)

            chosen.pop()
            if joined:
                self.uf.undo()
            for target, gain in zip(context["targets"], gains):
                target["value"] -= gain
            if self.truncated:
                return

    def _complete_row(self, row_pos: int, context: Dict, chosen: List[Segment]):
        i = self.split_rows[row_pos]
        row: List[Segment] = []
        it = iter(chosen)
        for segment in context["base"]:
            row.append(next(it) if segment is None else segment)

        # 区間ごとの上下界が厳密でないので最後に全制約を確認
        for prev, prev_row in self.rows.items():
            shifts = range(self.q) if self.map.is_split_row(prev) else range(1)
            if any(self.inner(row, prev_row, u) != self.off_target for u in shifts):
                return
        if self.inner(row, row) != self.diag_target[i]:
            return
        if any(self.inner(row, row, u) != self.off_target for u in range(1, self.q)):
            return

        self.rows[i] = row
        self._next_row(row_pos + 1)
        del self.rows[i]

    def _next_row(self, row_pos: int):
        if row_pos == len(self.split_rows):
            self._emit()
            return
        i = self.split_rows[row_pos]
        context = self._row_context(i)
        self._place(row_pos, 0, context, [], [context["self_known"]] * self.q)

    def _emit(self):
        ordered = tuple(tuple(self.rows[i]) for i in range(len(self.s)))
        self.found.append(ordered)

    def run(self, budget: Optional[int] = None) -> RefinementResult:
        self.nodes = 0
        self.budget = budget
        self.truncated = False
        self.found = []
        self.rows = {}
        if self._prepare_unsplit():
            self._next_row(0)

        result = RefinementResult(complete=not self.truncated, nodes=self.nodes)
        for rows in self.found:
            child = RefinedOrbitMatrix(matrix=expand_representatives(self.map, rows), map=self.map)
            if not check_refinement(child):
                raise RuntimeError(f"生成した子軌道行列が条件を満たしません: {child.matrix.entries}")
            result.children.append(child)
        return result


def refine(
    parent: OrbitMatrix,
    params: DesignParams,
    p: int,
    q: int,
    budget: Optional[int] = None,
) -> RefinementResult:
    """
    親軌道行列の細分化をすべて列挙

    Args:
        parent: 位数 pq（または 1）の群に関する軌道行列
        params: 設計パラメータ
        p: 子群 ⟨ρ^q⟩ の位数
        q: 分割数
        budget: ノード予算（置いた区間の数）

    Returns:
        RefinementResult: 代表行の辞書式順の子と完了フラグ

    Raises:
        RefinementError: 親が軌道行列でない、p・q が相異なる素数でない、群の位数が合わない場合
    """
    if not check_orbit_matrix(parent, params):
        raise RefinementError("親が軌道行列の条件を満たしません")
    if parent.structure.group_order == 1:
        # 自明群はそのまま1つの子
        return RefinementResult(children=[identity_refinement(parent, params)])
    if not (isprime(p) and isprime(q)) or p == q:
        raise RefinementError(f"p={p}, q={q} は相異なる素数である必要があります")
    if isprime(parent.structure.group_order):
        raise RefinementError(
            f"群の位数 {parent.structure.group_order} は素数のため細分化できません"
        )
    search = RefinementSearch(parent, params, p, q)
    result = search.run(budget)
    logger.debug(
        f"細分化: 子 {len(result.children)}個, ノード {result.nodes}, "
        f"{'完了' if result.complete else '打ち切り'}"
    )
    return result
