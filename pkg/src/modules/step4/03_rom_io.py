"""
Step4-03: 細分化軌道行列ファイル入出力
`rom <parent_id> <child_id> p q` ヘッダー、親の om ブロック、子の om ブロック、map セクション
"""

import importlib
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

_step1 = importlib.import_module('src.modules.step1')
_step3 = importlib.import_module('src.modules.step3')
_refinement_map = importlib.import_module('src.modules.step4.01_refinement_map')

DesignParams = _step1.DesignParams
format_om_block = _step3.format_om_block
parse_om_block = _step3.parse_om_block
RefinementError = _refinement_map.RefinementError
RefinementMap = _refinement_map.RefinementMap
RefinedOrbitMatrix = _refinement_map.RefinedOrbitMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RomRecord:
    """ファイル上の細分化軌道行列"""

    refined: RefinedOrbitMatrix
    parent_id: str
    child_id: str


def _format_groups(groups: Sequence[Sequence[int]]) -> str:
    return " | ".join(" ".join(str(x) for x in group) for group in groups)


def _parse_groups(text: str) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in part.split()) for part in text.split("|"))


def format_rom(record: RomRecord) -> str:
    r = record.refined
    ref_map = r.map
    lines = [f"rom {record.parent_id} {record.child_id} {ref_map.p} {ref_map.q}"]
    lines.extend(format_om_block(ref_map.parent, ref_map.params))
    lines.extend(format_om_block(r.matrix, ref_map.params))
    lines.append("map")
    lines.append(f"row_split {_format_groups(ref_map.row_split)}")
    lines.append(f"column_split {_format_groups(ref_map.column_split)}")
    lines.append("q_action " + " ".join(str(x) for x in ref_map.q_action))
    lines.append("q_action_blocks " + " ".join(str(x) for x in ref_map.q_action_blocks))
    return "\n".join(lines) + "\n"


def format_roms(records: Sequence[RomRecord]) -> str:
    return "\n".join(format_rom(record) for record in records)


def _keyed(line: str, key: str, lineno: int) -> str:
    if not line.startswith(key + " ") and line != key:
        raise RefinementError(f"{lineno}行目: '{key}' 行が必要です: {line!r}")
    return line[len(key):].strip()


def parse_roms(text: str) -> List[RomRecord]:
    """
    細分化軌道行列ファイルを読む

    Raises:
        RefinementError: 形式が不正な場合
    """
    lines = [line.strip() for line in text.splitlines()]
    records = []
    i = 0
    while i < len(lines):
        line = lines[i]
        if not line or line.startswith("#"):
            i += 1
            continue
        header = line.split()
        if len(header) != 5 or header[0] != "rom":
            raise RefinementError(f"{i + 1}行目: rom ヘッダーではありません: {line!r}")
        parent_id, child_id = header[1], header[2]
        p, q = int(header[3]), int(header[4])
        parent, params, i = parse_om_block(lines, i + 1)
        child, _, i = parse_om_block(lines, i)
        if i + 5 > len(lines):
            raise RefinementError(f"{i + 1}行目: map セクションが不完全です")
        _keyed(lines[i], "map", i + 1)
        row_split = _parse_groups(_keyed(lines[i + 1], "row_split", i + 2))
        column_split = _parse_groups(_keyed(lines[i + 2], "column_split", i + 3))
        q_action = tuple(int(x) for x in _keyed(lines[i + 3], "q_action", i + 4).split())
        q_action_blocks = tuple(int(x) for x in _keyed(lines[i + 4], "q_action_blocks", i + 5).split())
        i += 5
        ref_map = RefinementMap(
            parent=parent,
            params=params,
            p=p,
            q=q,
            child_structure=child.structure,
            row_split=row_split,
            column_split=column_split,
            q_action=q_action,
            q_action_blocks=q_action_blocks,
        )
        records.append(RomRecord(RefinedOrbitMatrix(child, ref_map), parent_id, child_id))
    return records


def write_roms(path: str, records: Sequence[RomRecord]) -> int:
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_roms(records))
    logger.debug(f"細分化軌道行列ファイル書き出し: {path} ({len(records)}件)")
    return len(records)


def read_roms(path: str) -> List[RomRecord]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_roms(f.read())
