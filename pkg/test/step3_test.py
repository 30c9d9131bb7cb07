#!/usr/bin/env python3
"""
Step3テスト
軌道行列の条件・行プロトタイプ・標準形・生成（全探索との照合）・ファイル入出力
"""

import itertools
import random
import sys
from pathlib import Path

import pytest

# プロジェクトルートをパスに追加
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.modules.step1 import DesignParams, fano_plane  # noqa: E402
from src.modules.step2 import Step2Processor  # noqa: E402
from src.modules.step3 import (  # noqa: E402
    EQUIVALENCE_ROWS,
    OrbitMatrix,
    OrbitStructure,
    OrbitStructureError,
    Step3Processor,
    canonical_form,
    check_orbit_matrix,
    generate_orbit_matrices,
    is_canonical,
    orbit_matrix_violations,
    parse_orbit_matrices,
    read_orbit_matrices,
    redistribute_budget,
    row_prototypes,
    shard_partitions,
    split_budget,
    stabilizer_divisible,
    write_orbit_matrices,
)

BIPLANE = DesignParams(11, 5, 2)
FANO = DesignParams(7, 3, 1)
BIPLANE_STRUCTURE = OrbitStructure.from_sizes([2, 3, 6], 6)
BIPLANE_OM = ((2, 0, 3), (0, 1, 4), (1, 2, 2))


def _fano_as_orbit_matrix() -> OrbitMatrix:
    return OrbitMatrix.from_lists(OrbitStructure.trivial(7), fano_plane().to_lists())


def test_orbit_structure_validation():
    assert BIPLANE_STRUCTURE.v == 11
    assert BIPLANE_STRUCTURE.is_sorted()
    with pytest.raises(OrbitStructureError):
        OrbitStructure.from_sizes([2, 4], 6)
    with pytest.raises(OrbitStructureError):
        OrbitStructure((1, 2), (2, 1, 1), 2)


def test_orbit_matrix_conditions():
    om = OrbitMatrix(BIPLANE_STRUCTURE, BIPLANE_OM)
    assert check_orbit_matrix(om, BIPLANE)
    assert stabilizer_divisible(om)
    assert check_orbit_matrix(_fano_as_orbit_matrix(), FANO)

    broken = OrbitMatrix(BIPLANE_STRUCTURE, ((2, 1, 2), (0, 1, 4), (1, 2, 2)))
    assert not check_orbit_matrix(broken, BIPLANE)
    assert orbit_matrix_violations(broken, BIPLANE)

    with pytest.raises(OrbitStructureError):
        check_orbit_matrix(om, FANO)


def test_row_prototypes_match_brute_force():
    print("🧪 行プロトタイプを全探索と照合")
    structure = BIPLANE_STRUCTURE
    for i, block_size in enumerate(structure.block_sizes):
        expected = []
        for row in itertools.product(*(range(w + 1) for w in structure.point_sizes)):
            if sum(row) != BIPLANE.k:
                continue
            # 列条件から Ω s_j ≤ k ω_j
            if any(block_size * s > BIPLANE.k * w for w, s in zip(structure.point_sizes, row)):
                continue
            square = sum((6 // w) * s * s for w, s in zip(structure.point_sizes, row))
            if square == 6 * BIPLANE.lam + (6 // block_size) * BIPLANE.n:
                expected.append(row)
        assert row_prototypes(BIPLANE, structure, i) == sorted(expected)
    print("   ✅ 全ブロック軌道で一致")


def test_biplane_generation_matches_brute_force():
    print("🧪 2-(11,5,2) / Z6 の軌道行列を全探索と照合")
    structure = BIPLANE_STRUCTURE
    choices = [row_prototypes(BIPLANE, structure, i) for i in range(structure.n)]
    brute = set()
    for rows in itertools.product(*choices):
        om = OrbitMatrix(structure, tuple(rows))
        if check_orbit_matrix(om, BIPLANE):
            brute.add(canonical_form(om).entries)

    result = generate_orbit_matrices(BIPLANE, structure)
    assert result.complete
    assert [om.entries for om in result.matrices] == sorted(brute)
    assert [om.entries for om in result.matrices] == [BIPLANE_OM]

    divisible = generate_orbit_matrices(BIPLANE, structure, stabilizer_divisibility=True)
    assert [om.entries for om in divisible.matrices] == [BIPLANE_OM]
    print("   ✅ 軌道行列 1個")


def test_trivial_group_equivalence_modes():
    structure = OrbitStructure.trivial(7)
    full = generate_orbit_matrices(FANO, structure)
    assert len(full.matrices) == 1
    labelled = generate_orbit_matrices(FANO, structure, mode=EQUIVALENCE_ROWS)
    # 7!/168
    assert len(labelled.matrices) == 30
    assert all(is_canonical(om, EQUIVALENCE_ROWS) for om in labelled.matrices)

    parallel = generate_orbit_matrices(FANO, structure, mode=EQUIVALENCE_ROWS, n_jobs=2)
    assert [om.entries for om in parallel.matrices] == [om.entries for om in labelled.matrices]


def test_canonical_form_invariant_under_relabelling():
    rng = random.Random(11)
    om = _fano_as_orbit_matrix()
    reference = canonical_form(om)
    for _ in range(50):
        row_order = list(range(7))
        col_order = list(range(7))
        rng.shuffle(row_order)
        rng.shuffle(col_order)
        shuffled = [[om.entries[r][c] for c in col_order] for r in row_order]
        assert canonical_form(OrbitMatrix.from_lists(om.structure, shuffled)) == reference
    assert is_canonical(reference)


def test_budget_truncation():
    assert split_budget(None, 3) == [None, None, None]
    assert split_budget(10, 3) == [4, 3, 3]
    assert split_budget(10, 0) == []

    result = generate_orbit_matrices(FANO, OrbitStructure.trivial(7), budget=5, mode=EQUIVALENCE_ROWS)
    assert not result.complete
    assert len(result.matrices) < 30

    shard = generate_orbit_matrices(
        FANO, OrbitStructure.trivial(7), mode=EQUIVALENCE_ROWS, partitions=[0]
    )
    assert not shard.complete
    assert shard.partitions_explored == 1


def test_leftover_budget_goes_to_truncated_partitions():
    results = [
        {"first_index": 0, "complete": True, "nodes": 2},
        {"first_index": 1, "complete": False, "nodes": 5},
        {"first_index": 2, "complete": False, "nodes": 5},
    ]
    assert redistribute_budget(15, results) == {1: 7, 2: 6}
    assert redistribute_budget(12, results) == {}
    assert redistribute_budget(20, results[:1]) == {}

    # 予算がちょうど全探索のノード数なら、分割ごとの偏りがあっても完了する
    full = generate_orbit_matrices(FANO, OrbitStructure.trivial(7), mode=EQUIVALENCE_ROWS)
    assert full.complete
    exact = generate_orbit_matrices(
        FANO, OrbitStructure.trivial(7), budget=full.nodes, mode=EQUIVALENCE_ROWS
    )
    assert exact.complete
    assert exact.nodes == full.nodes
    assert exact.matrices == full.matrices

    short = generate_orbit_matrices(
        FANO, OrbitStructure.trivial(7), budget=full.nodes - 1, mode=EQUIVALENCE_ROWS
    )
    assert not short.complete
    assert short.nodes <= full.nodes - 1


def test_shard_partitions():
    assert shard_partitions(10, None) is None
    assert shard_partitions(10, 1) == [0]
    assert shard_partitions(10, 25) == [0, 1, 2]
    assert shard_partitions(10, 100) == list(range(10))
    with pytest.raises(ValueError):
        shard_partitions(10, 0)
    with pytest.raises(ValueError):
        shard_partitions(10, 150)

    shard = generate_orbit_matrices(
        FANO, OrbitStructure.trivial(7), mode=EQUIVALENCE_ROWS, shard_percent=1
    )
    assert shard.partitions_explored == 1
    assert not shard.complete


def test_orbit_matrix_file_io(tmp_path):
    om = OrbitMatrix(BIPLANE_STRUCTURE, BIPLANE_OM)
    path = tmp_path / "biplane.om"
    write_orbit_matrices(str(path), [om], BIPLANE, ids=["f3_2_d0_000001"])
    records = read_orbit_matrices(str(path))
    assert len(records) == 1
    assert records[0].matrix == om
    assert records[0].params == BIPLANE
    assert records[0].record_id == "f3_2_d0_000001"

    with pytest.raises(OrbitStructureError):
        parse_orbit_matrices("om 3 11 5 2 6\n2 3 6\n2 3 6\n2 0 3\n")


def test_step3_processor(tmp_path):
    config = {
        "design": {"v": 11, "k": 5, "lambda": 2},
        "group": {"p": 2, "q": 3},
        "targets": [[3, 2]],
        "budgets": {"gen_om": None},
        "system": {"max_workers": 1},
    }
    cells = Step2Processor(config).target_cells()
    result = Step3Processor(config).process(cells, {"orbit_matrices": str(tmp_path)})

    assert result["success"]
    assert result["complete"]
    cell = result["cells"][0]
    assert cell["orbit_matrices"] == 1
    run = cell["runs"][0]
    assert run["structure"] == [2, 3, 6]
    assert run["ids"] == ["f3_2_d0_000001"]
    assert [r.matrix.entries for r in read_orbit_matrices(run["file"])] == [BIPLANE_OM]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
