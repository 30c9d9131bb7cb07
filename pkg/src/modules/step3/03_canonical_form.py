"""
Step3-03: 軌道行列の標準形
同じ長さのブロック軌道の行置換と、同じ長さの点軌道の列置換による辞書式最小形
"""

import importlib
import logging
from typing import Dict, List, Sequence, Tuple

_orbit_structure = importlib.import_module('src.modules.step3.01_orbit_structure')
OrbitMatrix = _orbit_structure.OrbitMatrix

logger = logging.getLogger(__name__)

# 同値の取り方
EQUIVALENCE_FULL = "full"   # 行・列とも同じ長さのクラス内で置換
EQUIVALENCE_ROWS = "rows"   # 行のみ置換（列はラベル付き）
EQUIVALENCE_MODES = (EQUIVALENCE_FULL, EQUIVALENCE_ROWS)

Cell = Tuple[Tuple[int, ...], Tuple[int, ...]]  # (位置, 列)


def _initial_cells(point_sizes: Sequence[int], mode: str) -> Tuple[Cell, ...]:
    if mode not in EQUIVALENCE_MODES:
        raise ValueError(f"未知の同値モード: {mode!r}")
    if mode == EQUIVALENCE_ROWS:
        return tuple(((j,), (j,)) for j in range(len(point_sizes)))
    classes: Dict[int, List[int]] = {}
    for j, size in enumerate(point_sizes):
        classes.setdefault(size, []).append(j)
    return tuple((tuple(cols), tuple(cols)) for cols in classes.values())


def _place_row(row: Sequence[int], cells: Tuple[Cell, ...], size: int):
    """
    セル内で値を昇順に並べた行と、値で分割した新しいセル列

    Returns:
        (key, new_cells)
    """
    key = [0] * size
    new_cells = []
    for positions, columns in cells:
        ordered = sorted(columns, key=lambda c: (row[c], c))
        for pos, col in zip(positions, ordered):
            key[pos] = row[col]
        start = 0
        while start < len(ordered):
            value = row[ordered[start]]
            end = start
            while end < len(ordered) and row[ordered[end]] == value:
                end += 1
            new_cells.append((positions[start:end], tuple(sorted(ordered[start:end]))))
            start = end
    return tuple(key), tuple(new_cells)


def canonical_entries(
    entries: Sequence[Sequence[int]],
    point_sizes: Sequence[int],
    block_sizes: Sequence[int],
    mode: str = EQUIVALENCE_FULL,
) -> Tuple[Tuple[int, ...], ...]:
    """
    行優先の辞書式最小形を計算

    各段で未使用の行から辞書式最小となるものを選び、それまでの行で区別できない
    列の組（セル）だけを並べ替える。最小を与える状態はすべて保持する

    Args:
        entries: 行列の成分
        point_sizes: 点軌道長（列クラス）
        block_sizes: ブロック軌道長（行クラス）
        mode: "full" または "rows"

    Returns:
        Tuple[Tuple[int, ...], ...]: 標準形の成分
    """
    size = len(entries)
    rows = [tuple(r) for r in entries]
    rows_by_class: Dict[int, List[int]] = {}
    for i, block_size in enumerate(block_sizes):
        rows_by_class.setdefault(block_size, []).append(i)

    # 状態キー: (使用済み行の内容の多重集合, セル)
    states = {((), _initial_cells(point_sizes, mode)): frozenset()}
    result = []
    for t in range(size):
        candidates = rows_by_class[block_sizes[t]]
        best = None
        next_states: Dict = {}
        for (used_rows, cells), used in states.items():
            tried = set()
            for r in candidates:
                if r in used or rows[r] in tried:
                    continue
                tried.add(rows[r])
                key, new_cells = _place_row(rows[r], cells, size)
                if best is not None and key > best:
                    continue
                if best is None or key < best:
                    best = key
                    next_states = {}
                state_key = (tuple(sorted(used_rows + (rows[r],))), new_cells)
                if state_key not in next_states:
                    next_states[state_key] = used | {r}
        result.append(best)
        states = next_states
    return tuple(result)


def canonical_form(om: OrbitMatrix, mode: str = EQUIVALENCE_FULL) -> OrbitMatrix:
    """軌道行列の標準形"""
    structure = om.structure
    entries = canonical_entries(om.entries, structure.point_sizes, structure.block_sizes, mode)
    return OrbitMatrix(structure, entries)


def is_canonical(om: OrbitMatrix, mode: str = EQUIVALENCE_FULL) -> bool:
    structure = om.structure
    return canonical_entries(om.entries, structure.point_sizes, structure.block_sizes, mode) == om.entries
