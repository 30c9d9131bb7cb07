#!/usr/bin/env python3
"""
Step6テスト
標準ラベル付け・自己同型群・群の指紋とカタログ・同型分類
"""

import json
import random
import sys
from pathlib import Path

import pytest
from sympy.combinatorics.named_groups import CyclicGroup

# プロジェクトルートをパスに追加
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.modules.step1 import (  # noqa: E402
    DesignParams,
    IncidenceMatrix,
    biplane_11,
    fano_plane,
    from_difference_set,
    is_automorphism,
)
from src.modules.step5 import IndexedDesign  # noqa: E402
from src.modules.step6 import (  # noqa: E402
    COMPLETE_ORDERS,
    UNIQUE_IN_ORDER,
    Step6Processor,
    automorphism_group,
    automorphism_fingerprint,
    canonical_form,
    canonical_labelling,
    catalog_fingerprints,
    classify,
    fingerprint_group,
    recognise,
)

FANO = DesignParams(7, 3, 1)


def _relabel(m: IncidenceMatrix, rng: random.Random) -> IncidenceMatrix:
    points = list(range(m.v))
    blocks = list(range(m.v))
    rng.shuffle(points)
    rng.shuffle(blocks)
    return m.permute(points, blocks)


def _catalog(order: int):
    return dict(catalog_fingerprints(order))


def test_certificate_invariant_under_relabelling():
    print("🧪 標準形証明書の付け替え不変性")
    rng = random.Random(3)
    for m in (fano_plane(), biplane_11()):
        reference = canonical_form(m)
        points, blocks = canonical_labelling(m)
        canonical = m.permute(points.images, blocks.images)
        for _ in range(20):
            copy = _relabel(m, rng)
            assert canonical_form(copy) == reference
            copy_points, copy_blocks = canonical_labelling(copy)
            assert copy.permute(copy_points.images, copy_blocks.images) == canonical
    print("   ✅ 20回の付け替えで一致")


def test_certificate_separates_non_isomorphic():
    # {3,5,6} は x → -x で {1,2,4} に移る
    assert canonical_form(from_difference_set(7, (3, 5, 6))) == canonical_form(fano_plane())
    consecutive = IncidenceMatrix.from_blocks(FANO, [[(i + d) % 7 for d in range(3)] for i in range(7)])
    assert canonical_form(consecutive) != canonical_form(fano_plane())


def test_automorphism_groups():
    print("🧪 自己同型群")
    group = automorphism_group(fano_plane())
    assert group.order == 168
    assert all(is_automorphism(fano_plane(), g) for g in group.generators)

    fp = automorphism_fingerprint(fano_plane())
    assert fp.name == "PGL(3,2)"
    assert fp.element_order_histogram == {1: 1, 2: 21, 3: 56, 4: 42, 7: 48}

    # PSL(2,11)
    biplane = automorphism_fingerprint(biplane_11())
    assert biplane.order == 660
    assert biplane.name is None
    print("   ✅ |Aut| = 168, 660")


def test_fingerprint_of_cyclic_group():
    fp = fingerprint_group(CyclicGroup(6))
    assert fp.order == 6
    assert fp.abelian
    assert fp.element_order_histogram == {1: 1, 2: 1, 3: 2, 6: 2}
    assert recognise(fp) == "Z6"


def test_catalog():
    print("🧪 群カタログの指紋")
    assert COMPLETE_ORDERS == (6, 24, 42)
    assert len(_catalog(24)) == 15
    assert len(_catalog(42)) == 6

    order24 = _catalog(24)
    assert order24["A4 x Z2"].element_order_histogram == {1: 1, 2: 7, 3: 8, 6: 8}
    assert order24["SL(2,3)"].element_order_histogram == {1: 1, 2: 1, 3: 8, 4: 6, 6: 8}
    assert recognise(order24["A4 x Z2"]) == "A4 x Z2"
    assert recognise(order24["SL(2,3)"]) == "SL(2,3)"
    assert recognise(order24["Z24"]) == "Z24"

    order168 = _catalog(168)
    assert order168["PGL(3,2)"].element_order_histogram == {1: 1, 2: 21, 3: 56, 4: 42, 7: 48}
    assert order168["PGL(3,2)"].derived_subgroup_order == 168
    assert recognise(order168["PGL(3,2)"]) == "PGL(3,2)"
    print("   ✅ 位数 24, 42, 168 のカタログ")


def test_partial_order_names_only_known_unique_groups():
    print("🧪 収録が部分的な位数の名前付け")
    assert 168 not in COMPLETE_ORDERS
    assert UNIQUE_IN_ORDER[168] == ("PGL(3,2)", "E8:Frob21")

    order168 = _catalog(168)
    assert recognise(order168["E8:Frob21"]) == "E8:Frob21"
    # カタログ内で一意でも、全ての群の中で一意と分かっていなければ名前なし
    for name in ("S4 x Z7", "SL(2,3) x Z7", "A4 x Z14", "D168", "Frob21 x Z8"):
        assert recognise(order168[name]) is None
    # 巡回群は常に名前が付く
    assert recognise(order168["Z168"]) == "Z168"
    print("   ✅ PGL(3,2), E8:Frob21, Z168 のみ")


def test_classify_repeated_design():
    rng = random.Random(5)
    designs = [fano_plane()] + [_relabel(fano_plane(), rng) for _ in range(4)]
    result = classify(designs)
    assert result.counts() == {"designs": 5, "classes": 1, "self_dual": 1, "dual_pairs": 0, "unmatched": 0}
    only = result.classes[0]
    assert only.members == 5
    assert only.representative == fano_plane()
    assert only.aut_order == 168
    assert result.by_aut_order() == {168: {"classes": 1, "self_dual": 1, "dual_pairs": 0}}


def test_classify_dual_pairs():
    # 転置すると行の重みが変わる行列の組
    heavy_row = IncidenceMatrix(FANO, (0b1111111,) + (0,) * 6)
    heavy_column = IncidenceMatrix(FANO, (0b0000001,) * 7)
    result = classify([heavy_row, heavy_column], with_groups=False)
    assert result.counts()["classes"] == 2
    assert result.dual_pairs == 1
    assert result.self_dual == 0
    first, second = result.classes
    assert first.dual_class == second.class_id and second.dual_class == first.class_id

    alone = classify([heavy_row], with_groups=False)
    assert alone.unmatched == 1

    with pytest.raises(ValueError):
        classify([fano_plane(), biplane_11()])


def test_step6_processor(tmp_path):
    cells = [{
        "f_p": 0,
        "f_q": 0,
        "runs": [{"designs": [IndexedDesign(fano_plane()), IndexedDesign(from_difference_set(7, (3, 5, 6)))]}],
        "complete": True,
    }]
    config = {"group": {"p": 7, "q": 1}, "system": {"max_workers": 1}}
    result = Step6Processor(config).process(cells, {"classes": str(tmp_path)})
    assert result["success"]
    assert result["counts"]["classes"] == 1
    with open(result["output_files"][0], encoding="utf-8") as f:
        saved = json.load(f)
    assert saved["counts"]["designs"] == 2
    assert saved["classes"][0]["fingerprint"]["name"] == "PGL(3,2)"

    # |Aut| = 168 は 10 で割り切れない
    mismatched = Step6Processor({"group": {"p": 2, "q": 5}}).process(cells, {"classes": str(tmp_path)})
    assert not mismatched["success"]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
