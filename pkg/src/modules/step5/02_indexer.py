"""
Step5-02: インデックス化
細分化軌道行列から ρ を自己同型に持つ 0/1 接続行列をすべて構成する

各ブロック軌道の基底ブロックを点軌道ごとの断片（ρ^{Ω_I} 不変な部分集合）の和として選ぶ。
断片は子軌道との共通部分の大きさが代表子行と一致するものに限る
"""

import hashlib
import importlib
import itertools
import json
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

_step1 = importlib.import_module('src.modules.step1')
_step4 = importlib.import_module('src.modules.step4')
_group_action = importlib.import_module('src.modules.step5.01_group_action')

IncidenceMatrix = _step1.IncidenceMatrix
validate_design = _step1.validate_design
is_automorphism = _step1.is_automorphism
fixed_point_count = _step1.fixed_point_count
RefinedOrbitMatrix = _step4.RefinedOrbitMatrix
GroupAction = _group_action.GroupAction
IndexingError = _group_action.IndexingError
collapse = _group_action.collapse

logger = logging.getLogger(__name__)


@dataclass
class IndexedDesign:
    """インデックス化で得た設計と由来"""

    design: IncidenceMatrix
    parent_id: Optional[str] = None
    child_id: Optional[str] = None

    @property
    def comments(self) -> List[str]:
        if self.parent_id is None or self.child_id is None:
            return []
        return [f"parent {self.parent_id} child {self.child_id}"]


@dataclass
class IndexResult:
    designs: List[IndexedDesign] = field(default_factory=list)
    complete: bool = True
    nodes: int = 0
    resumed: bool = False


def rotate_mask(mask: int, shift: int, size: int) -> int:
    """Z_size 上の部分集合 mask を shift だけ平行移動（x → x + shift）"""
    shift %= size
    if shift == 0:
        return mask
    full = (1 << size) - 1
    return ((mask << shift) | (mask >> (size - shift))) & full


def lex_less(a: int, b: int) -> bool:
    """同じ大きさの点集合を昇順タプルとして比較したとき a < b か"""
    diff = a ^ b
    if diff == 0:
        return False
    return bool(a & (diff & -diff))


def rom_digest(rom: RefinedOrbitMatrix) -> str:
    """細分化軌道行列の内容（親・子の成分と分割）の SHA-256"""
    ref_map = rom.map
    content = {
        "parent": [list(row) for row in ref_map.parent.entries],
        "point_sizes": list(ref_map.parent.structure.point_sizes),
        "block_sizes": list(ref_map.parent.structure.block_sizes),
        "child": [list(row) for row in rom.matrix.entries],
        "row_split": [list(g) for g in ref_map.row_split],
        "column_split": [list(g) for g in ref_map.column_split],
        "p": ref_map.p,
        "q": ref_map.q,
    }
    return hashlib.sha256(json.dumps(content, sort_keys=True).encode("utf-8")).hexdigest()


class _Checkpoint:
    """探索位置（候補添字の列）と見つかった設計の JSON 保存"""

    def __init__(self, path: Optional[str], every: Optional[int], digest: Optional[str] = None):
        self.path = path
        self.every = every if every and every > 0 else None
        self.digest = digest

    def load(self, rom_id: Optional[str] = None) -> Optional[Dict]:
        """保存された状態（別の行列のものなら None で最初から探索）"""
        if not self.path or not os.path.exists(self.path):
            return None
        with open(self.path, "r", encoding="utf-8") as f:
            state = json.load(f)
        if state.get("rom_id") != rom_id or state.get("digest") != self.digest:
            logger.warning(
                f"⚠️ チェックポイントが別の細分化軌道行列のものです。最初から探索します: {self.path}"
            )
            return None
        logger.info(f"⚡ チェックポイントから再開: {self.path} (ノード {state.get('nodes', 0)})")
        return state

    def save(self, rom_id: Optional[str], path: Sequence[int], nodes: int,
             designs: Sequence[Tuple[int, ...]], complete: bool):
        if not self.path:
            return
        state = {
            "rom_id": rom_id,
            "digest": self.digest,
            "path": list(path),
            "nodes": nodes,
            "designs": [list(rows) for rows in designs],
            "complete": complete,
        }
        directory = os.path.dirname(self.path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        tmp_path = self.path + ".tmp"
        with open(tmp_path, "w", encoding="utf-8") as f:
            json.dump(state, f)
        os.replace(tmp_path, self.path)


class DesignIndexer:
    """1つの細分化軌道行列に対するインデックス化の探索器"""

    def __init__(self, rom: RefinedOrbitMatrix, action: GroupAction):
        ref_map = rom.map
        parent = ref_map.parent
        structure = parent.structure
        if (action.point_sizes != structure.point_sizes
                or action.block_sizes != structure.block_sizes
                or action.order != structure.group_order):
            raise IndexingError("作用の軌道構造が親軌道行列と一致しません")

        self.rom = rom
        self.action = action
        self.params = ref_map.params
        self.s = parent.entries
        self.n = structure.n
        self.omega = structure.point_sizes
        self.big_omega = structure.block_sizes
        self.point_offsets = action.point_offsets
        self.q = ref_map.q
        self.p = ref_map.p
        self.rep_rows = rom.representative_rows()
        self.split_rows = [ref_map.is_split_row(i) for i in range(self.n)]
        self.split_cols = [ref_map.is_split_column(j) for j in range(self.n)]

        self.pieces = [[self._pieces(i, j) for j in range(self.n)] for i in range(self.n)]
        self.positions = [(i, j) for i in range(self.n) for j in range(self.n)]
        self.rotations = [self._base_rotations(i) for i in range(self.n)]
        self.twin_of = self._twins()

        self.chosen: List[List[int]] = [[0] * self.n for _ in range(self.n)]
        self.path: List[int] = []
        self.stop_path: List[int] = []
        self.nodes = 0
        self.budget: Optional[int] = None
        self.truncated = False
        self.found: List[Tuple[int, ...]] = []
        self.resume: Optional[List[int]] = None
        self.checkpoint: Optional[_Checkpoint] = None
        self.rom_id: Optional[str] = None

    # ---- 準備 ----

    def _child_index(self, j: int, x: int) -> int:
        """分割された点軌道 j の点 x が属する子軌道（x ≡ v·p mod q となる v）"""
        return (x % self.q) * pow(self.p, -1, self.q) % self.q

    def _pieces(self, i: int, j: int) -> List[int]:
        """ブロック軌道 i の基底ブロックと点軌道 j の共通部分の候補（昇順）"""
        omega, target = self.omega[j], self.s[i][j]
        g = math.gcd(self.big_omega[i], omega)
        repeat = omega // g
        if target % repeat:
            return []
        counts = self.rep_rows[i][j]
        candidates = []
        for residues in itertools.combinations(range(g), target // repeat):
            mask = 0
            for x in range(omega):
                if x % g in residues:
                    mask |= 1 << x
            if self.split_cols[j]:
                per_child = [0] * self.q
                for x in range(omega):
                    if (mask >> x) & 1:
                        per_child[self._child_index(j, x)] += 1
                if tuple(per_child) != tuple(counts):
                    continue
            candidates.append(mask)
        candidates.sort(key=lambda m: [x for x in range(omega) if (m >> x) & 1])
        return candidates

    def _base_rotations(self, i: int) -> List[int]:
        """基底ブロックの取り替えに使える ρ の冪（代表子行を保つもの）"""
        step = self.q if self.split_rows[i] else 1
        return list(range(step, self.big_omega[i], step))

    def _twins(self) -> List[Optional[int]]:
        """直前の、入れ替え可能なブロック軌道（長さ・親行・代表子行が同じ）"""
        twins: List[Optional[int]] = [None] * self.n
        for i in range(1, self.n):
            for prev in range(i - 1, -1, -1):
                if (self.big_omega[prev] == self.big_omega[i]
                        and self.s[prev] == self.s[i]
                        and self.rep_rows[prev] == self.rep_rows[i]):
                    twins[i] = prev
                    break
        return twins

    # ---- 基底ブロック ----

    def _global_mask(self, pieces: Sequence[int], shift: int = 0) -> int:
        mask = 0
        for j, piece in enumerate(pieces):
            mask |= rotate_mask(piece, shift, self.omega[j]) << self.point_offsets[j]
        return mask

    def _row_context(self, i: int) -> Dict:
        targets = []
        for prev in range(i):
            for d in range(self.big_omega[prev]):
                bounds = []
                for j in range(self.n):
                    a, b, omega = self.s[i][j], self.s[prev][j], self.omega[j]
                    bounds.append((max(0, a + b - omega), min(a, b)))
                targets.append({"prev": prev, "shift": d, "value": 0, "bounds": bounds})
        for d in range(1, self.big_omega[i]):
            bounds = []
            for j in range(self.n):
                a, omega = self.s[i][j], self.omega[j]
                bounds.append((max(0, 2 * a - omega), a))
            targets.append({"prev": None, "shift": d, "value": 0, "bounds": bounds})
        return {"targets": targets}

    def _contribution(self, target: Dict, i: int, j: int, piece: int) -> int:
        omega = self.omega[j]
        other = piece if target["prev"] is None else self.chosen[target["prev"]][j]
        return (piece & rotate_mask(other, target["shift"], omega)).bit_count()

    def _feasible(self, target: Dict, value: int, j: int) -> bool:
        lo = sum(b[0] for b in target["bounds"][j + 1:])
        hi = sum(b[1] for b in target["bounds"][j + 1:])
        lam = self.params.lam
        return value + lo <= lam <= value + hi

    def _base_block_ok(self, i: int) -> bool:
        pieces = self.chosen[i]
        base = self._global_mask(pieces)
        for t in self.rotations[i]:
            if lex_less(self._global_mask(pieces, t), base):
                return False
        twin = self.twin_of[i]
        if twin is not None and not lex_less(self._global_mask(self.chosen[twin]), base):
            return False
        return True

    # ---- 探索 ----

    def _consume_node(self) -> bool:
        if self.budget is not None and self.nodes >= self.budget:
            self.truncated = True
            # 打ち切った候補から再開する
            self.stop_path = list(self.path)
            return False
        self.nodes += 1
        if self.checkpoint and self.checkpoint.every and self.nodes % self.checkpoint.every == 0:
            self.checkpoint.save(self.rom_id, self.path, self.nodes, self.found, False)
        return True

    def _search(self, depth: int, contexts: List[Dict], on_path: bool):
        if self.truncated:
            return
        if depth == len(self.positions):
            self._emit()
            return
        i, j = self.positions[depth]
        if j == 0:
            contexts.append(self._row_context(i))
        context = contexts[-1]

        resuming = on_path and self.resume is not None and depth < len(self.resume)
        start = self.resume[depth] if resuming else 0
        candidates = self.pieces[i][j]
        for index in range(start, len(candidates)):
            piece = candidates[index]
            gains = []
            ok = True
            for target in context["targets"]:
                gain = self._contribution(target, i, j, piece)
                if not self._feasible(target, target["value"] + gain, j):
                    ok = False
                    break
                gains.append(gain)
            if not ok:
                continue

            self.chosen[i][j] = piece
            self.path.append(index)
            if not (resuming and index == start) and not self._consume_node():
                self.path.pop()
                break
            for target, gain in zip(context["targets"], gains):
                target["value"] += gain

            if j < self.n - 1 or self._base_block_ok(i):
                self._search(depth + 1, contexts, resuming and index == start)

            for target, gain in zip(context["targets"], gains):
                target["value"] -= gain
            self.path.pop()
            self.chosen[i][j] = 0
            if self.truncated:
                break

        if j == 0:
            contexts.pop()

    def _emit(self):
        rows = []
        for i in range(self.n):
            for y in range(self.big_omega[i]):
                rows.append(self._global_mask(self.chosen[i], y))
        self.found.append(tuple(rows))

    def _verify(self, rows: Tuple[int, ...]) -> IncidenceMatrix:
        design = IncidenceMatrix(self.params, rows)
        report = validate_design(design)
        if not report["valid"]:
            raise RuntimeError(f"構成した設計が公理を満たしません: {report['error']}")
        if not is_automorphism(design, self.action.pair):
            raise RuntimeError("構成した設計で ρ が自己同型になっていません")
        action = self.action
        if action.p and action.q:
            for power in (action.q, action.p):
                if (fixed_point_count(action.point_rho.power(power))
                        != fixed_point_count(action.block_rho.power(power))):
                    raise RuntimeError("点とブロックの不動点数が一致しません")
        if collapse(design, action).entries != self.s:
            raise RuntimeError("構成した設計の集約が親軌道行列と一致しません")
        return design

    def run(self, budget: Optional[int] = None, checkpoint_path: Optional[str] = None,
            checkpoint_every: Optional[int] = None, rom_id: Optional[str] = None,
            parent_id: Optional[str] = None) -> IndexResult:
        self.budget = budget
        self.truncated = False
        self.nodes = 0
        self.found = []
        self.path = []
        self.stop_path = []
        self.resume = None
        self.rom_id = rom_id
        self.checkpoint = _Checkpoint(checkpoint_path, checkpoint_every, rom_digest(self.rom))

        state = self.checkpoint.load(rom_id)
        resumed = state is not None
        if state is not None:
            self.found = [tuple(rows) for rows in state.get("designs", [])]
            self.nodes = int(state.get("nodes", 0))
            if not state.get("complete"):
                self.resume = [int(x) for x in state.get("path", [])]

        if state is None or not state.get("complete"):
            self._search(0, [], True)
            self.checkpoint.save(rom_id, self.stop_path, self.nodes, self.found, not self.truncated)

        result = IndexResult(complete=not self.truncated, nodes=self.nodes, resumed=resumed)
        for rows in self.found:
            result.designs.append(IndexedDesign(self._verify(rows), parent_id, rom_id))
        return result


def index(
    rom: RefinedOrbitMatrix,
    action: GroupAction,
    budget: Optional[int] = None,
    checkpoint_path: Optional[str] = None,
    checkpoint_every: Optional[int] = None,
    rom_id: Optional[str] = None,
    parent_id: Optional[str] = None,
) -> IndexResult:
    """
    細分化軌道行列を実現する接続行列をすべて構成

    Args:
        rom: 細分化軌道行列
        action: 親の軌道構造に対応する巡回群の作用
        budget: ノード予算（置いた断片の数）
        checkpoint_path: チェックポイントファイル（既存なら再開）
        checkpoint_every: チェックポイントを書くノード間隔
        rom_id: 子の ID（由来の記録用）
        parent_id: 親の ID（由来の記録用）

    Returns:
        IndexResult: 検証済みの設計と完了フラグ

    Raises:
        IndexingError: 作用と軌道構造が一致しない場合
    """
    indexer = DesignIndexer(rom, action)
    result = indexer.run(budget, checkpoint_path, checkpoint_every, rom_id, parent_id)
    logger.debug(
        f"インデックス化: 設計 {len(result.designs)}個, ノード {result.nodes}, "
        f"{'完了' if result.complete else '打ち切り'}"
    )
    return result
