#!/usr/bin/env python3
"""
Step4テスト
細分化マップ・子軌道行列の探索（全探索との照合）・回転に関する標準形・.rom 入出力
"""

import itertools
import sys
from pathlib import Path

import pytest

# プロジェクトルートをパスに追加
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.modules.step1 import DesignParams  # noqa: E402
from src.modules.step3 import OrbitMatrix, OrbitStructure  # noqa: E402
from src.modules.step4 import (  # noqa: E402
    RefinedOrbitMatrix,
    RefinementError,
    Step4Processor,
    build_refinement_map,
    canonical_representatives,
    check_refinement,
    compositions,
    expand_representatives,
    is_canonical_refinement,
    read_roms,
    refine,
    rotate,
    split_sizes,
)

BIPLANE = DesignParams(11, 5, 2)
PARENT = OrbitMatrix(OrbitStructure.from_sizes([2, 3, 6], 6), ((2, 0, 3), (0, 1, 4), (1, 2, 2)))
EXPECTED_REPRESENTATIVES = (
    ((2,), (0, 0, 0), (1, 1, 1)),
    ((0,), (0, 0, 1), (0, 2, 2)),
    ((1,), (0, 1, 1), (1, 0, 1)),
)


def _segment_choices(ref_map, i, j):
    """親セル (i, j) の代表区間の全候補"""
    caps = [ref_map.child_structure.point_sizes[b] for b in ref_map.column_split[j]]
    total = ref_map.parent.entries[i][j]
    return [
        seg for seg in itertools.product(*(range(c + 1) for c in caps)) if sum(seg) == total
    ]


def test_split_rules():
    assert split_sizes(1, 2, 3) == [1]
    assert split_sizes(2, 2, 3) == [2]
    assert split_sizes(3, 2, 3) == [1, 1, 1]
    assert split_sizes(6, 2, 3) == [2, 2, 2]
    with pytest.raises(RefinementError):
        split_sizes(4, 2, 3)

    ref_map = build_refinement_map(PARENT, BIPLANE, 2, 3)
    assert ref_map.child_structure.point_sizes == (2, 1, 1, 1, 2, 2, 2)
    assert ref_map.child_structure.group_order == 2
    assert ref_map.column_split == ((0,), (1, 2, 3), (4, 5, 6))
    assert ref_map.q_action == (0, 2, 3, 1, 5, 6, 4)

    with pytest.raises(RefinementError):
        build_refinement_map(PARENT, BIPLANE, 2, 5)


def test_flagship_split_counts():
    # (2×1, 1×2, 4×3, 9×6) の子: 不動点 2+4·3、長さ2の軌道 1+9·3
    sizes = [1] * 2 + [2] + [3] * 4 + [6] * 9
    child = [c for size in sizes for c in split_sizes(size, 2, 3)]
    assert child.count(1) == 14
    assert child.count(2) == 28
    assert sum(child) == 70


def test_rotation_helpers():
    assert rotate((0, 1, 2), 1) == (1, 2, 0)
    assert rotate((0, 1, 2), -1) == (2, 0, 1)
    assert compositions(2, 3, 1) == ((0, 1, 1), (1, 0, 1), (1, 1, 0))


def test_biplane_refinement():
    print("🧪 2-(11,5,2) / Z6 の細分化")
    result = refine(PARENT, BIPLANE, 2, 3)
    assert result.complete
    assert len(result.children) == 1
    child = result.children[0]
    assert child.representative_rows() == EXPECTED_REPRESENTATIVES
    assert check_refinement(child)
    assert is_canonical_refinement(child)
    assert child.matrix.structure.point_sizes == (2, 1, 1, 1, 2, 2, 2)
    print("   ✅ 子軌道行列 1個")


def test_refinement_matches_brute_force():
    print("🧪 代表区間の全組み合わせと照合")
    ref_map = build_refinement_map(PARENT, BIPLANE, 2, 3)
    n = PARENT.n
    row_choices = [
        list(itertools.product(*(_segment_choices(ref_map, i, j) for j in range(n))))
        for i in range(n)
    ]
    classes = set()
    for rows in itertools.product(*row_choices):
        candidate = RefinedOrbitMatrix(expand_representatives(ref_map, rows), ref_map)
        if check_refinement(candidate):
            classes.add(canonical_representatives(candidate))

    found = {c.representative_rows() for c in refine(PARENT, BIPLANE, 2, 3).children}
    assert found == classes
    print(f"   ✅ 同値類 {len(classes)}個で一致")


def test_canonical_representatives_invariant_under_rotation():
    child = refine(PARENT, BIPLANE, 2, 3).children[0]
    ref_map = child.map
    reference = canonical_representatives(child)
    rows = child.representative_rows()
    split_rows = [i for i in range(PARENT.n) if ref_map.is_split_row(i)]
    split_cols = [j for j in range(PARENT.n) if ref_map.is_split_column(j)]
    for shifts in itertools.product(range(3), repeat=len(split_rows) + len(split_cols)):
        t = dict(zip(split_rows, shifts))
        w = dict(zip(split_cols, shifts[len(split_rows):]))
        rotated = tuple(
            tuple(
                rotate(seg, t[i] - w[j]) if i in t and j in w else seg
                for j, seg in enumerate(row)
            )
            for i, row in enumerate(rows)
        )
        moved = RefinedOrbitMatrix(expand_representatives(ref_map, rotated), ref_map)
        assert canonical_representatives(moved) == reference


def test_refine_preconditions():
    with pytest.raises(RefinementError):
        refine(OrbitMatrix(PARENT.structure, ((2, 1, 2), (0, 1, 4), (1, 2, 2))), BIPLANE, 2, 3)
    with pytest.raises(RefinementError):
        refine(PARENT, BIPLANE, 2, 2)

    fano = DesignParams(7, 3, 1)
    prime_parent = OrbitMatrix(OrbitStructure.from_sizes([7], 7), ((3,),))
    with pytest.raises(RefinementError):
        refine(prime_parent, fano, 7, 1)

    trivial = OrbitMatrix.from_lists(
        OrbitStructure.trivial(7),
        [[1 if (j - i) % 7 in (1, 2, 4) else 0 for j in range(7)] for i in range(7)],
    )
    result = refine(trivial, fano, 2, 3)
    assert len(result.children) == 1
    assert result.children[0].matrix == trivial


def test_step4_processor(tmp_path):
    config = {
        "design": {"v": 11, "k": 5, "lambda": 2},
        "group": {"p": 2, "q": 3},
        "budgets": {"refine": None},
        "system": {"max_workers": 1},
    }
    run = {"label": "f3_2_d0", "ids": ["f3_2_d0_000001"], "matrices": [PARENT], "complete": True}
    result = Step4Processor(config).refine_run(run, str(tmp_path))

    assert result["count"] == 1
    assert result["complete"]
    records = read_roms(result["file"])
    assert len(records) == 1
    assert records[0].parent_id == "f3_2_d0_000001"
    assert records[0].child_id == "f3_2_d0_000001_c001"
    assert records[0].refined == result["records"][0].refined
    assert records[0].refined.representative_rows() == EXPECTED_REPRESENTATIVES

    cells = [{"f_p": 3, "f_q": 2, "runs": [run]}]
    processed = Step4Processor(config).process(cells, {"refined": str(tmp_path)})
    assert processed["success"]
    assert processed["cells"][0]["refined"] == 1


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
