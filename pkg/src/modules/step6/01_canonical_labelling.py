"""
Step6-01: 標準ラベル付け
点とブロックからなる二部接続グラフの個別化・細分化探索による標準形と自己同型の生成元

頂点 0..v-1 が点、v..2v-1 がブロック。順序付き分割を隣接数で等正則になるまで細分化し、
非単元セルの頂点を1つずつ個別化する。葉のうち (細分化の痕跡, 証明書) が最大のものを標準形とし、
証明書が一致する葉どうしから自己同型を得て同値な枝を刈る
"""

import importlib
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

_step1 = importlib.import_module('src.modules.step1')

IncidenceMatrix = _step1.IncidenceMatrix
Permutation = _step1.Permutation
AutomorphismPair = _step1.AutomorphismPair

logger = logging.getLogger(__name__)

Cells = List[List[int]]


@dataclass(frozen=True)
class CanonicalCertificate:
    """点・ブロックの同時付け替えで不変な接続行列のバイト列"""

    data: bytes

    def hex(self) -> str:
        return self.data.hex()


def _mask(vertices: Sequence[int]) -> int:
    mask = 0
    for x in vertices:
        mask |= 1 << x
    return mask


class CanonicalLabeller:
    """1つの設計に対する標準ラベル付け探索"""

    def __init__(self, m: IncidenceMatrix):
        self.m = m
        v = m.v
        self.v = v
        # 頂点ごとの隣接集合（点 j の隣接はブロック v+i）
        neighbours = [0] * (2 * v)
        for i, row in enumerate(m.rows):
            neighbours[v + i] = row
            for j in range(v):
                if (row >> j) & 1:
                    neighbours[j] |= 1 << (v + i)
        self.neighbours = neighbours

        self.best_path: Optional[List] = None
        self.best_cert: Optional[Tuple[int, ...]] = None
        self.best_order: Optional[List[int]] = None
        self.first_path: Optional[List] = None
        self.first_cert: Optional[Tuple[int, ...]] = None
        self.first_order: Optional[List[int]] = None
        self.generators: List[Tuple[int, ...]] = []
        self.leaves = 0

    # ---- 細分化 ----

    def refine(self, cells: Cells, queue: List[int]) -> Tuple[Cells, Tuple]:
        """
        分割を splitter の隣接数で等正則になるまで細分化

        Returns:
            (細分化後の分割, ラベルに依存しない痕跡)
        """
        trace = []
        neighbours = self.neighbours
        while queue:
            splitter = queue.pop(0)
            new_cells: Cells = []
            for cell in cells:
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                groups: Dict[int, List[int]] = {}
                for x in cell:
                    groups.setdefault((neighbours[x] & splitter).bit_count(), []).append(x)
                if len(groups) == 1:
                    new_cells.append(cell)
                    continue
                keys = sorted(groups)
                trace.append((len(new_cells), tuple((k, len(groups[k])) for k in keys)))
                for k in keys:
                    new_cells.append(groups[k])
                    queue.append(_mask(groups[k]))
            cells = new_cells
        return cells, tuple(trace)

    def initial_partition(self) -> Tuple[Cells, Tuple]:
        cells = [list(range(self.v)), list(range(self.v, 2 * self.v))]
        return self.refine(cells, [_mask(c) for c in cells])

    @staticmethod
    def target_cell(cells: Cells) -> int:
        """最小の非単元セル（同じ大きさなら先頭）"""
        best = -1
        for index, cell in enumerate(cells):
            if len(cell) > 1 and (best < 0 or len(cell) < len(cells[best])):
                best = index
        return best

    # ---- 葉 ----

    def certificate(self, order: List[int]) -> Tuple[int, ...]:
        """位置 → 頂点の順序で付け替えたブロック行（点位置のビット集合）"""
        v = self.v
        position = [0] * (2 * v)
        for pos, vertex in enumerate(order):
            position[vertex] = pos
        rows = []
        for pos in range(v, 2 * v):
            row = self.m.rows[order[pos] - v]
            mask = 0
            for j in range(v):
                if (row >> j) & 1:
                    mask |= 1 << position[j]
            rows.append(mask)
        return tuple(rows)

    def _automorphism(self, reference: List[int], order: List[int]) -> Tuple[int, ...]:
        """order の葉を reference の葉に重ねる頂点置換"""
        images = [0] * (2 * self.v)
        for pos, vertex in enumerate(order):
            images[vertex] = reference[pos]
        return tuple(images)

    def _leaf(self, cells: Cells, path: List):
        self.leaves += 1
        order = [cell[0] for cell in cells]
        cert = self.certificate(order)
        if self.first_path is None:
            self.first_path, self.first_cert, self.first_order = list(path), cert, order
            self.best_path, self.best_cert, self.best_order = list(path), cert, order
            return
        if path == self.first_path and cert == self.first_cert:
            self._add_generator(self._automorphism(self.first_order, order))
            return
        key = (path, cert)
        best_key = (self.best_path, self.best_cert)
        if key > best_key:
            self.best_path, self.best_cert, self.best_order = list(path), cert, order
        elif key == best_key:
            self._add_generator(self._automorphism(self.best_order, order))

    def _add_generator(self, images: Tuple[int, ...]):
        if any(images[x] != x for x in range(len(images))) and images not in self.generators:
            self.generators.append(images)

    # ---- 探索 ----

    def _orbit_representatives(self, candidates: List[int], fixed: List[int]) -> Dict[int, int]:
        """個別化済みの頂点を固定する既知の自己同型による候補の軌道代表"""
        parent = {x: x for x in candidates}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for g in self.generators:
            if any(g[x] != x for x in fixed):
                continue
            for x in candidates:
                y = g[x]
                if y in parent:
                    rx, ry = find(x), find(y)
                    if rx != ry:
                        parent[max(rx, ry)] = min(rx, ry)
        return {x: find(x) for x in candidates}

    def _compare_prefix(self, path: List, reference: Optional[List]) -> int:
        if reference is None:
            return 1
        prefix = reference[:len(path)]
        return (path > prefix) - (path < prefix)

    def search(self, cells: Cells, path: List, fixed: List[int]):
        c = self.target_cell(cells)
        if c < 0:
            self._leaf(cells, path)
            return
        explored: List[int] = []
        for x in sorted(cells[c]):
            if explored:
                reps = self._orbit_representatives(sorted(cells[c]), fixed)
                if any(reps[x] == reps[y] for y in explored):
                    continue
            explored.append(x)
            rest = [y for y in cells[c] if y != x]
            split = cells[:c] + [[x], rest] + cells[c + 1:]
            new_cells, trace = self.refine(split, [1 << x])
            path.append((c, trace))
            on_first = self.first_path is not None and path == self.first_path[:len(path)]
            if on_first or self._compare_prefix(path, self.best_path) >= 0:
                fixed.append(x)
                self.search(new_cells, path, fixed)
                fixed.pop()
            path.pop()

    def run(self) -> "CanonicalLabeller":
        cells, trace = self.initial_partition()
        self.search(cells, [(-1, trace)], [])
        return self

    # ---- 結果 ----

    def canonical_order(self) -> List[int]:
        assert self.best_order is not None
        return self.best_order

    def certificate_bytes(self) -> bytes:
        assert self.best_cert is not None
        params = self.m.params
        width = (self.v + 7) // 8
        header = f"{params.v},{params.k},{params.lam};".encode("ascii")
        return header + b"".join(row.to_bytes(width, "big") for row in self.best_cert)

    def automorphism_pairs(self) -> List[AutomorphismPair]:
        """頂点置換の生成元を (点置換, ブロック置換) に分解"""
        v = self.v
        pairs = []
        for g in self.generators:
            points = Permutation(tuple(g[j] for j in range(v)))
            blocks = Permutation(tuple(g[v + i] - v for i in range(v)))
            pairs.append(AutomorphismPair(points, blocks))
        return pairs


def canonical_labelling(m: IncidenceMatrix) -> Tuple[Permutation, Permutation]:
    """
    標準ラベル付け（点置換, ブロック置換）

    m.permute(points, blocks) が標準形の接続行列になる
    """
    order = CanonicalLabeller(m).run().canonical_order()
    v = m.v
    point_images = [0] * v
    block_images = [0] * v
    for pos, vertex in enumerate(order):
        if vertex < v:
            point_images[vertex] = pos
        else:
            block_images[vertex - v] = pos - v
    return Permutation(tuple(point_images)), Permutation(tuple(block_images))


def canonical_form(m: IncidenceMatrix) -> CanonicalCertificate:
    """
    同型な設計で一致し、非同型な設計で異なる証明書

    Args:
        m: 接続行列

    Returns:
        CanonicalCertificate: ヘッダー (v,k,λ) と標準形の行をパックしたバイト列
    """
    return CanonicalCertificate(CanonicalLabeller(m).run().certificate_bytes())


def automorphism_generators(m: IncidenceMatrix) -> List[AutomorphismPair]:
    """探索中に見つかった自己同型（全自己同型群の生成系）"""
    return CanonicalLabeller(m).run().automorphism_pairs()
