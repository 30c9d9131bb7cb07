#!/usr/bin/env python3
"""
Step7テスト
二元符号・重み分布・符号内の設計探索・巡回部分群の共役類・2-ランク表
"""

import csv
import json
import logging
import sys
from pathlib import Path

import pytest
from sympy.combinatorics import Permutation as SympyPermutation
from sympy.combinatorics.named_groups import SymmetricGroup

# プロジェクトルートをパスに追加
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.modules.step1 import (  # noqa: E402
    DesignParams,
    IncidenceMatrix,
    Permutation,
    biplane_11,
    cyclic_shift_pair,
    fano_plane,
    read_designs,
    validate_design,
)
from src.modules.step6 import classify  # noqa: E402
from src.modules.step7 import (  # noqa: E402
    BinaryCode,
    CodeBudgetError,
    CodeInvarianceError,
    Step7Processor,
    check_reference_tables,
    codewords_of_weight,
    cyclic_subgroup_classes,
    designs_in_code,
    gf2_rank,
    gf2_rref,
    is_self_orthogonal,
    rank2,
    rank_check,
    rank_table,
    reference_rank_columns,
    span_code,
    to_permutation,
    weight_count,
    weight_distribution,
    word_orbits,
)

FANO = DesignParams(7, 3, 1)
HAMMING_DISTRIBUTION = [1, 0, 0, 7, 7, 0, 0, 1]


def _grid_design() -> IncidenceMatrix:
    """4×4 の格子で、同じ行か列にある自分以外の点をブロックとする 2-(16,6,2) 設計"""
    blocks = []
    for r in range(4):
        for c in range(4):
            blocks.append([
                4 * r2 + c2 for r2 in range(4) for c2 in range(4)
                if (r2 == r) != (c2 == c)
            ])
    return IncidenceMatrix.from_blocks(DesignParams(16, 6, 2), blocks)


def _shift() -> Permutation:
    return cyclic_shift_pair(7).point_perm


def test_gf2_elimination():
    basis, pivots = gf2_rref([0b011, 0b110, 0b101], 3)
    assert len(basis) == 2
    assert pivots == [0, 1]
    for row, col in zip(basis, pivots):
        others = [b for b in basis if b != row]
        assert all(not (b >> col) & 1 for b in others)
    assert gf2_rank([0b011, 0b110, 0b101], 3) == 2
    assert gf2_rank([0, 0], 3) == 0
    assert gf2_rank([0b001, 0b010, 0b100], 3) == 3


def test_fano_code():
    print("🧪 Fano 平面の符号（[7,4] ハミング符号）")
    assert rank2(fano_plane()) == 4
    code = span_code(fano_plane())
    assert code.dimension == 4
    assert all(code.contains(row) for row in fano_plane().rows)
    assert not code.contains(0b0000011)
    assert code.is_invariant_under(_shift())
    assert not code.is_invariant_under(Permutation.from_cycles(7, [(0, 1)]))
    assert BinaryCode.from_rows(list(fano_plane().rows) * 2, 7) == code
    print("   ✅ 次元 4")


def test_weight_distribution():
    code = span_code(fano_plane())
    assert weight_distribution(code) == HAMMING_DISTRIBUTION
    assert weight_distribution(code, n_jobs=2) == HAMMING_DISTRIBUTION
    assert weight_distribution(code, budget=16) == HAMMING_DISTRIBUTION
    with pytest.raises(CodeBudgetError):
        weight_distribution(code, budget=8)

    assert weight_count(code, 0).count == 1
    assert weight_count(code, 3).count == 7
    assert weight_count(code, 8).count == 0
    assert codewords_of_weight(code, 3) == sorted(fano_plane().rows)
    assert codewords_of_weight(code, 3, n_jobs=2) == sorted(fano_plane().rows)


def test_word_orbits():
    code = span_code(fano_plane())
    words = codewords_of_weight(code, 4)
    orbits = word_orbits(words, [_shift()])
    assert len(orbits) == 1
    assert orbits[0] == sorted(words)
    # 生成元なしでは各語が1つの軌道
    assert len(word_orbits(words, [])) == 7

    report = weight_count(code, 3, generators=[_shift()])
    assert report.count == 7
    assert report.orbit_summary == {"orbits": 1, "orbit_lengths": {"7": 1}}
    assert report.to_dict()["weight"] == 3


def test_designs_in_code():
    print("🧪 Fano 平面の符号に含まれる設計")
    code = span_code(fano_plane())
    for generators in ([_shift()], []):
        result = designs_in_code(code, FANO, generators)
        assert result.complete
        assert len(result.designs) == 1
        assert set(result.designs[0].rows) == set(fano_plane().rows)
        assert validate_design(result.designs[0])["valid"]
        assert result.nodes > 0

    cyclic = designs_in_code(code, FANO, [_shift()], n_jobs=2)
    assert cyclic.orbits == 1
    assert len(cyclic.designs) == 1
    print("   ✅ 設計 1個")


def test_designs_in_code_rejections():
    code = span_code(fano_plane())
    with pytest.raises(CodeInvarianceError):
        designs_in_code(code, FANO, [Permutation.from_cycles(7, [(0, 1)])])
    with pytest.raises(ValueError):
        designs_in_code(code, DesignParams(11, 5, 2))
    with pytest.raises(ValueError):
        designs_in_code(code, FANO, [Permutation.identity(6)])

    truncated = designs_in_code(code, FANO, budget=0)
    assert not truncated.complete

    with pytest.raises(CodeBudgetError):
        designs_in_code(span_code(biplane_11()), DesignParams(11, 5, 2), enumeration_budget=1 << 8)


def test_cyclic_subgroup_classes():
    s4 = SymmetricGroup(4)
    # 互換と二重互換
    assert len(cyclic_subgroup_classes(s4, 2)) == 2
    assert len(cyclic_subgroup_classes(s4, 3)) == 1
    assert len(cyclic_subgroup_classes(s4, 4)) == 1
    assert cyclic_subgroup_classes(s4, 5) == []

    assert to_permutation(SympyPermutation([1, 0]), 4).images == (1, 0, 2, 3)


def test_rank_check():
    fano = rank_check(fano_plane())
    assert fano == {"rank": 4, "dual_rank": 4, "self_orthogonal": None}

    grid = _grid_design()
    assert validate_design(grid)["valid"]
    assert is_self_orthogonal(grid)
    report = rank_check(grid)
    assert report["self_orthogonal"] is True
    assert report["rank"] <= 8
    assert report["rank"] == report["dual_rank"]

    # k, λ が偶数なのに行の重みが奇数
    odd = IncidenceMatrix(DesignParams(16, 6, 2), (1,) * 16)
    with pytest.raises(RuntimeError):
        rank_check(odd)


def test_rank_table(caplog):
    table = rank_table([4, 4, 5], [168, 168, 24])
    assert table.cells == {(4, 168): 2, (5, 24): 1}
    assert table.ranks == [4, 5]
    assert table.aut_orders == [24, 168]
    assert table.column_totals() == {24: 1, 168: 2}
    assert not table.mismatches

    with caplog.at_level(logging.WARNING):
        checked = rank_table([4, 4, 5], [168, 168, 24], expected_columns={168: 2, 24: 2})
    assert checked.mismatches == {24: (1, 2)}
    assert "|Aut|=24" in caplog.text
    assert checked.to_dict()["mismatches"] == {"24": [1, 2]}

    with pytest.raises(ValueError):
        rank_table([4], [168, 24])


def test_reference_table_columns(caplog):
    tables = {
        "rank_table": {"20": {"24": 3, "42": 1}, "22": {"24": 2}},
        "classification": {"by_group": [{"order": 24, "classes": 5}, {"order": 42, "classes": 2}]},
    }
    assert reference_rank_columns(tables) == {24: 5, 42: 1}
    with caplog.at_level(logging.WARNING):
        mismatches = check_reference_tables(tables)
    assert mismatches == {42: (1, 2)}
    assert reference_rank_columns({}) == {}


def test_code_search():
    print("🧪 Fano 平面の符号内探索（位数 7 の部分群）")
    outcome = Step7Processor({"system": {"max_workers": 1}}).code_search(
        fano_plane(), use_dual=False, subgroup_order=7
    )
    assert outcome["dimension"] == 4
    assert outcome["aut_order"] == 168
    assert outcome["weight"]["count"] == 7
    assert len(outcome["subgroup_classes"]) == 1
    only = outcome["subgroup_classes"][0]
    assert only["designs"] == 1
    assert only["found"][0]["is_input"]
    assert only["found"][0]["aut_order"] == 168
    assert outcome["complete"]
    print("   ✅ 入力の設計を再発見")


def test_step7_processor(tmp_path):
    config = {
        "codes": {"search_max_rank": 4, "subgroup_order": 7},
        "system": {"max_workers": 1},
    }
    classification = classify([fano_plane()])
    result = Step7Processor(config).process(classification, {"codes": str(tmp_path)})

    assert result["success"]
    assert result["complete"]
    assert result["min_rank"] == 4
    assert result["ranks"][0]["rank"] == 4
    assert result["rank_table"].cells == {(4, 168): 1}
    assert not result["rank_table"].mismatches

    with open(tmp_path / "ranks.csv", encoding="utf-8", newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["design_id", "rank", "dual_rank", "aut_order"]
    assert rows[1][1:] == ["4", "4", "168"]

    with open(tmp_path / "code_search.json", encoding="utf-8") as f:
        searches = json.load(f)
    assert searches[0]["subgroup_classes"][0]["designs"] == 1
    assert len(read_designs(str(tmp_path / "class0_found.design"))) == 1

    # 探索対象のランク上限より大きければ探索しない
    skipped = Step7Processor({"codes": {"search_max_rank": 3}}).process(
        classification, {"codes": str(tmp_path)}
    )
    assert skipped["success"]
    assert skipped["searches"] == []


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
