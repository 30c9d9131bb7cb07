"""
Step1-04: 設計ファイル入出力
`design v k lambda` ヘッダー + v 行の 0/1 文字列、空行区切りの複数設計ファイル
"""

import importlib
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

_design_params = importlib.import_module('src.modules.step1.01_design_params')
_incidence_matrix = importlib.import_module('src.modules.step1.02_incidence_matrix')
_permutation = importlib.import_module('src.modules.step1.03_permutation')

DesignParams = _design_params.DesignParams
IncidenceMatrix = _incidence_matrix.IncidenceMatrix
DesignStructureError = _incidence_matrix.DesignStructureError
Permutation = _permutation.Permutation
AutomorphismPair = _permutation.AutomorphismPair

logger = logging.getLogger(__name__)


@dataclass
class DesignRecord:
    """ファイルから読み込んだ設計とコメント行"""

    design: IncidenceMatrix
    comments: List[str] = field(default_factory=list)

    @property
    def provenance(self) -> Optional[Dict[str, str]]:
        """`# parent <id> child <id>` 行があれば {"parent": .., "child": ..}"""
        for comment in self.comments:
            parts = comment.split()
            if len(parts) == 4 and parts[0] == "parent" and parts[2] == "child":
                return {"parent": parts[1], "child": parts[3]}
        return None


def format_design(m: IncidenceMatrix, comments: Optional[Sequence[str]] = None) -> str:
    """1設計分のテキスト（末尾改行付き）"""
    lines = [f"# {c}" for c in (comments or [])]
    lines.append(m.params.header)
    lines.extend(m.to_text())
    return "\n".join(lines) + "\n"


def format_designs(records: Iterable) -> str:
    """
    複数設計を空行区切りで整形

    Args:
        records: IncidenceMatrix または DesignRecord の列
    """
    chunks = []
    for record in records:
        if isinstance(record, DesignRecord):
            chunks.append(format_design(record.design, record.comments))
        else:
            chunks.append(format_design(record))
    return "\n".join(chunks)


def parse_designs(text: str) -> List[DesignRecord]:
    """
    設計ファイルのテキストを解析

    Raises:
        DesignStructureError: ヘッダーや行の形式が不正な場合
    """
    records = []
    comments: List[str] = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] != "design":
            raise DesignStructureError(f"{i}行目: 設計ヘッダーではありません: {line!r}")
        try:
            params = DesignParams(int(parts[1]), int(parts[2]), int(parts[3]))
        except ValueError as e:
            raise DesignStructureError(f"{i}行目: パラメータ不正: {e}")
        rows = []
        for _ in range(params.v):
            if i >= len(lines):
                raise DesignStructureError(f"設計 {params} の行数が不足しています")
            row_text = lines[i].strip()
            i += 1
            if len(row_text) != params.v or set(row_text) - {"0", "1"}:
                raise DesignStructureError(f"{i}行目: 長さ {params.v} の 0/1 行ではありません")
            mask = 0
            for j, ch in enumerate(row_text):
                if ch == "1":
                    mask |= 1 << j
            rows.append(mask)
        records.append(DesignRecord(IncidenceMatrix(params, tuple(rows)), comments))
        comments = []
    return records


def write_designs(path: str, records: Iterable) -> int:
    """設計ファイルを書き出し、書き出した個数を返す"""
    records = list(records)
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_designs(records))
    logger.debug(f"設計ファイル書き出し: {path} ({len(records)}件)")
    return len(records)


def read_designs(path: str) -> List[DesignRecord]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_designs(f.read())


def from_difference_set(v: int, base: Sequence[int]) -> IncidenceMatrix:
    """
    Z_v の差集合から巡回設計を生成（ブロック i = base + i mod v）

    Raises:
        ValueError: パラメータが許容されない場合
    """
    k = len(set(base))
    lam = k * (k - 1) // (v - 1) if v > 1 else 0
    params = DesignParams(v, k, lam)
    blocks = [[(d + i) % v for d in base] for i in range(v)]
    return IncidenceMatrix.from_blocks(params, blocks)


def cyclic_shift_pair(v: int) -> AutomorphismPair:
    """点・ブロックともに i → i+1 mod v"""
    shift = Permutation(tuple((i + 1) % v for i in range(v)))
    return AutomorphismPair(shift, shift)


def fano_plane() -> IncidenceMatrix:
    """差集合 {1,2,4} mod 7 による 2-(7,3,1) 設計"""
    return from_difference_set(7, (1, 2, 4))


def biplane_11() -> IncidenceMatrix:
    """平方剰余 {1,3,4,5,9} mod 11 による 2-(11,5,2) 設計"""
    return from_difference_set(11, (1, 3, 4, 5, 9))
