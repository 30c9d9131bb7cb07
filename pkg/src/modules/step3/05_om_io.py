"""
Step3-05: 軌道行列ファイル入出力
`om n v k lambda group_order` ヘッダー、点軌道長・ブロック軌道長の行、n 行の成分
"""

import importlib
import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

_step1 = importlib.import_module('src.modules.step1')
_orbit_structure = importlib.import_module('src.modules.step3.01_orbit_structure')

DesignParams = _step1.DesignParams
OrbitStructure = _orbit_structure.OrbitStructure
OrbitMatrix = _orbit_structure.OrbitMatrix
OrbitStructureError = _orbit_structure.OrbitStructureError

logger = logging.getLogger(__name__)


@dataclass
class OrbitMatrixRecord:
    """ファイル上の軌道行列（ID とコメント付き）"""

    matrix: OrbitMatrix
    params: DesignParams
    comments: List[str] = field(default_factory=list)

    @property
    def record_id(self) -> Optional[str]:
        for comment in self.comments:
            parts = comment.split()
            if len(parts) == 2 and parts[0] == "id":
                return parts[1]
        return None


def _ints(text: str) -> List[int]:
    return [int(x) for x in text.split()]


def format_om_block(om: OrbitMatrix, params: DesignParams) -> List[str]:
    """ヘッダーから成分までの行（コメントなし）"""
    structure = om.structure
    lines = [
        f"om {structure.n} {params.v} {params.k} {params.lam} {structure.group_order}",
        " ".join(str(x) for x in structure.point_sizes),
        " ".join(str(x) for x in structure.block_sizes),
    ]
    lines.extend(" ".join(str(x) for x in row) for row in om.entries)
    return lines


def format_orbit_matrices(
    matrices: Iterable[OrbitMatrix],
    params: DesignParams,
    ids: Optional[Sequence[str]] = None,
) -> str:
    """複数の軌道行列を空行区切りで整形（ids があれば `# id` 行を付ける）"""
    chunks = []
    for index, om in enumerate(matrices):
        lines = []
        if ids is not None:
            lines.append(f"# id {ids[index]}")
        lines.extend(format_om_block(om, params))
        chunks.append("\n".join(lines) + "\n")
    return "\n".join(chunks)


def parse_om_block(lines: List[str], start: int) -> Tuple[OrbitMatrix, DesignParams, int]:
    """
    start 行目から1つの軌道行列を読む

    Returns:
        (軌道行列, パラメータ, 次の行番号)

    Raises:
        OrbitStructureError: 形式が不正な場合
    """
    header = lines[start].split()
    if len(header) != 6 or header[0] != "om":
        raise OrbitStructureError(f"{start + 1}行目: 軌道行列ヘッダーではありません: {lines[start]!r}")
    n, v, k, lam, group_order = (int(x) for x in header[1:])
    if start + 3 + n > len(lines):
        raise OrbitStructureError(f"{start + 1}行目: 軌道行列の行数が不足しています")
    params = DesignParams(v, k, lam)
    structure = OrbitStructure(
        tuple(_ints(lines[start + 1])), tuple(_ints(lines[start + 2])), group_order
    )
    if structure.n != n:
        raise OrbitStructureError(f"{start + 1}行目: 軌道数 {structure.n} がヘッダーの n={n} と一致しません")
    rows = [_ints(lines[start + 3 + i]) for i in range(n)]
    return OrbitMatrix.from_lists(structure, rows), params, start + 3 + n


def parse_orbit_matrices(text: str) -> List[OrbitMatrixRecord]:
    lines = [line.strip() for line in text.splitlines()]
    records = []
    comments: List[str] = []
    i = 0
    while i < len(lines):
        line = lines[i]
        if not line:
            i += 1
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            i += 1
            continue
        om, params, i = parse_om_block(lines, i)
        records.append(OrbitMatrixRecord(om, params, comments))
        comments = []
    return records


def write_orbit_matrices(path: str, matrices: Sequence[OrbitMatrix], params: DesignParams,
                         ids: Optional[Sequence[str]] = None) -> int:
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_orbit_matrices(matrices, params, ids))
    logger.debug(f"軌道行列ファイル書き出し: {path} ({len(matrices)}件)")
    return len(matrices)


def read_orbit_matrices(path: str) -> List[OrbitMatrixRecord]:
    with open(path, "r", encoding="utf-8") as f:
        return parse_orbit_matrices(f.read())
