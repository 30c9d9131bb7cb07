#!/usr/bin/env python3
"""
Step5テスト
巡回群の作用・集約・インデックス化（全探索との照合）・チェックポイントからの再開
"""

import itertools
import json
import logging
import sys
from pathlib import Path

import pytest

# プロジェクトルートをパスに追加
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.modules.step1 import (  # noqa: E402
    DesignParams,
    IncidenceMatrix,
    Permutation,
    fano_plane,
    fixed_point_count,
    is_automorphism,
    read_designs,
    validate_design,
)
from src.modules.step3 import OrbitMatrix, OrbitStructure  # noqa: E402
from src.modules.step4 import RomRecord, identity_refinement, refine  # noqa: E402
from src.modules.step5 import (  # noqa: E402
    IndexingError,
    Step5Processor,
    action_for_structure,
    build_cyclic_action,
    collapse,
    index,
    lex_less,
    rom_digest,
    rotate_mask,
)

FANO = DesignParams(7, 3, 1)
BIPLANE = DesignParams(11, 5, 2)
BIPLANE_PARENT = OrbitMatrix(
    OrbitStructure.from_sizes([2, 3, 6], 6), ((2, 0, 3), (0, 1, 4), (1, 2, 2))
)


def _biplane_rom():
    return refine(BIPLANE_PARENT, BIPLANE, 2, 3).children[0]


def _biplane_action():
    return action_for_structure(BIPLANE_PARENT.structure, 2, 3)


def test_mask_helpers():
    assert rotate_mask(0b0011, 1, 4) == 0b0110
    assert rotate_mask(0b1001, 1, 4) == 0b0011
    assert rotate_mask(0b1001, 4, 4) == 0b1001
    assert lex_less(0b011, 0b101)
    assert not lex_less(0b101, 0b011)
    assert not lex_less(0b101, 0b101)


def test_group_action_signature():
    action = _biplane_action()
    assert action.point_rho.order() == 6
    assert action.point_offsets == (0, 2, 5)
    # ρ^3 は長さ 3 の軌道を、ρ^2 は長さ 2 の軌道を固定
    assert fixed_point_count(action.point_rho.power(3)) == 3
    assert fixed_point_count(action.point_rho.power(2)) == 2
    with pytest.raises(IndexingError):
        build_cyclic_action([2, 4], order=6)


def test_collapse():
    action = build_cyclic_action([7], [7], 7)
    assert collapse(fano_plane(), action).entries == ((3,),)

    swap = Permutation.from_cycles(7, [(0, 1)])
    relabelled = fano_plane().permute(swap.images, tuple(range(7)))
    with pytest.raises(IndexingError):
        collapse(relabelled, action)


def test_fano_under_z7_matches_brute_force():
    print("🧪 Fano 平面 / Z7 のインデックス化を全探索と照合")
    parent = OrbitMatrix(OrbitStructure.from_sizes([7], 7), ((3,),))
    result = index(identity_refinement(parent, FANO), build_cyclic_action([7], [7], 7))
    assert result.complete

    expected = set()
    for base in itertools.combinations(range(7), 3):
        translates = [tuple(sorted((b + i) % 7 for b in base)) for i in range(7)]
        if base != min(translates):
            continue
        design = IncidenceMatrix.from_blocks(FANO, [list(t) for t in translates])
        if validate_design(design)["valid"]:
            expected.add(base)

    found = {tuple(d.design.block(0)) for d in result.designs}
    assert found == expected == {(0, 1, 3), (0, 1, 5)}
    print(f"   ✅ 設計 {len(found)}個")


def test_biplane_indexing():
    print("🧪 2-(11,5,2) / Z6 のインデックス化")
    action = _biplane_action()
    result = index(_biplane_rom(), action, rom_id="b_c001", parent_id="b")
    assert result.complete
    assert result.designs
    for indexed in result.designs:
        design = indexed.design
        assert validate_design(design)["valid"]
        assert is_automorphism(design, action.pair)
        assert collapse(design, action) == BIPLANE_PARENT
        assert indexed.comments == ["parent b child b_c001"]
    rows = [d.design.rows for d in result.designs]
    assert len(set(rows)) == len(rows)
    print(f"   ✅ 設計 {len(rows)}個")


def test_action_must_match_structure():
    with pytest.raises(IndexingError):
        index(_biplane_rom(), build_cyclic_action([2, 3, 6], [2, 3, 6], 12))


def test_checkpoint_resume(tmp_path):
    rom = _biplane_rom()
    action = _biplane_action()
    full = index(rom, action)
    checkpoint = tmp_path / "ckpt" / "b_c001.json"

    partial = index(rom, action, budget=3, checkpoint_path=str(checkpoint))
    assert not partial.complete
    with open(checkpoint, encoding="utf-8") as f:
        state = json.load(f)
    assert state["complete"] is False
    assert state["path"]

    resumed = index(rom, action, checkpoint_path=str(checkpoint))
    assert resumed.resumed
    assert resumed.complete
    assert [d.design.rows for d in resumed.designs] == [d.design.rows for d in full.designs]

    # 完了済みのチェックポイントは探索せずに読み込む
    again = index(rom, action, checkpoint_path=str(checkpoint))
    assert again.resumed
    assert [d.design.rows for d in again.designs] == [d.design.rows for d in full.designs]


def test_checkpoint_for_other_matrix_restarts(tmp_path, caplog):
    rom = _biplane_rom()
    checkpoint = tmp_path / "ckpt" / "c001.json"
    partial = index(rom, _biplane_action(), budget=3, checkpoint_path=str(checkpoint), rom_id="c001")
    assert not partial.complete
    with open(checkpoint, encoding="utf-8") as f:
        assert json.load(f)["digest"] == rom_digest(rom)

    # 同じファイル名・同じ ID でも別の行列なら最初から探索
    fano_rom = identity_refinement(OrbitMatrix(OrbitStructure.from_sizes([7], 7), ((3,),)), FANO)
    assert rom_digest(fano_rom) != rom_digest(rom)
    with caplog.at_level(logging.WARNING):
        other = index(
            fano_rom, build_cyclic_action([7], [7], 7), checkpoint_path=str(checkpoint), rom_id="c001"
        )
    assert not other.resumed
    assert other.complete
    assert len(other.designs) == 2
    assert "別の細分化軌道行列" in caplog.text
    with open(checkpoint, encoding="utf-8") as f:
        assert json.load(f)["digest"] == rom_digest(fano_rom)


def test_step5_processor(tmp_path):
    config = {
        "group": {"p": 2, "q": 3},
        "budgets": {"index": None},
        "indexing": {"checkpoint_every": 1000},
        "system": {"max_workers": 1},
    }
    session_dirs = {"designs": str(tmp_path / "designs"), "checkpoints": str(tmp_path / "ckpt")}
    Path(session_dirs["designs"]).mkdir()
    run = {
        "label": "f3_2_d0",
        "records": [RomRecord(_biplane_rom(), "f3_2_d0_000001", "f3_2_d0_000001_c001")],
        "complete": True,
    }
    result = Step5Processor(config).index_run(run, session_dirs)
    assert result["complete"]
    assert result["count"] >= 1

    loaded = read_designs(result["file"])
    assert len(loaded) == result["count"]
    assert loaded[0].provenance == {"parent": "f3_2_d0_000001", "child": "f3_2_d0_000001_c001"}
    assert (tmp_path / "ckpt" / "f3_2_d0_000001_c001.json").exists()


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
