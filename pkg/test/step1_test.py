#!/usr/bin/env python3
"""
Step1テスト
設計パラメータ・接続行列の公理検証・置換と自己同型・設計ファイル入出力
"""

import random
import sys
from pathlib import Path

import numpy as np
import pytest

# プロジェクトルートをパスに追加
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.modules.step1 import (  # noqa: E402
    AutomorphismPair,
    DesignParams,
    DesignRecord,
    DesignStructureError,
    IncidenceMatrix,
    Permutation,
    biplane_11,
    cyclic_shift_pair,
    dual,
    fano_plane,
    format_designs,
    induced_block_permutation,
    is_automorphism,
    parse_designs,
    read_designs,
    validate_design,
    write_designs,
)


def _random_permutation(n: int, rng: random.Random) -> Permutation:
    images = list(range(n))
    rng.shuffle(images)
    return Permutation(tuple(images))


def test_design_params():
    params = DesignParams(70, 24, 8)
    assert params.n == 16
    assert params.sqrt_n == 4
    assert params.header == "design 70 24 8"
    assert str(params) == "2-(70,24,8)"
    assert DesignParams(7, 3, 1).sqrt_n is None

    with pytest.raises(ValueError):
        DesignParams(7, 3, 2)
    with pytest.raises(ValueError):
        DesignParams(7, 0, 1)


def test_fano_and_biplane_are_designs():
    for m in (fano_plane(), biplane_11()):
        report = validate_design(m)
        assert report["valid"], report["error"]
        # NNᵀ = nI + λJ
        n_matrix = m.to_numpy()
        v, lam, n = m.params.v, m.params.lam, m.params.n
        expected = n * np.eye(v, dtype=np.int64) + lam * np.ones((v, v), dtype=np.int64)
        assert (n_matrix @ n_matrix.T == expected).all()


def test_validate_reports_first_violation():
    m = fano_plane()
    rows = list(m.rows)
    rows[2] ^= 1 << 6 if not (rows[2] >> 6) & 1 else 1 << 0
    broken = IncidenceMatrix(m.params, tuple(rows))
    report = validate_design(broken)
    assert not report["valid"]
    assert report["axiom"] == "row_sum"
    assert report["index"] == 2
    assert {v["axiom"] for v in report["violations"]} >= {"row_sum", "column_sum"}


def test_structure_errors_are_not_axiom_failures():
    params = DesignParams(7, 3, 1)
    with pytest.raises(DesignStructureError):
        IncidenceMatrix(params, (0,) * 6)
    with pytest.raises(DesignStructureError):
        IncidenceMatrix.from_lists(params, [[0] * 6 for _ in range(7)])
    with pytest.raises(DesignStructureError):
        IncidenceMatrix.from_lists(params, [[2] * 7 for _ in range(7)])


def test_dual_is_involution():
    for m in (fano_plane(), biplane_11()):
        assert dual(dual(m)) == m
        assert validate_design(dual(m))["valid"]
        for j in range(m.v):
            assert dual(m).rows[j] == m.column(j)


def test_permutation_algebra():
    p = Permutation.from_cycles(6, [(0, 1, 2), (3, 4)])
    assert p.order() == 6
    assert p.cycles() == [(0, 1, 2), (3, 4), (5,)]
    assert p.cycle_type() == [1, 2, 3]
    assert p.fixed_point_count() == 1
    assert p.compose(p.inverse()).is_identity()
    assert p.power(6).is_identity()
    assert p.power(-1) == p.inverse()
    assert p.power(2).fixed_point_count() == 3
    assert p.apply_to_mask(0b000011) == 0b000110
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


def test_cyclic_shift_is_automorphism():
    m = fano_plane()
    shift = cyclic_shift_pair(7)
    assert is_automorphism(m, shift)
    assert induced_block_permutation(m, shift.point_perm) == shift.block_perm
    assert shift.power(7).point_perm.is_identity()

    swap = Permutation.from_cycles(7, [(0, 1)])
    assert induced_block_permutation(m, swap) is None
    assert not is_automorphism(m, AutomorphismPair(swap, swap))

    with pytest.raises(DesignStructureError):
        is_automorphism(m, cyclic_shift_pair(6))


def test_relabelled_design_stays_valid():
    rng = random.Random(7)
    m = biplane_11()
    for _ in range(20):
        points = _random_permutation(11, rng)
        blocks = _random_permutation(11, rng)
        relabelled = m.permute(points.images, blocks.images)
        assert validate_design(relabelled)["valid"]
        # 付け替え後の行は元のブロックの像
        for i, row in enumerate(m.rows):
            assert relabelled.rows[blocks(i)] == points.apply_to_mask(row)


def test_design_file_io(tmp_path):
    records = [
        DesignRecord(fano_plane(), ["parent om_1 child om_1_c001"]),
        DesignRecord(biplane_11()),
    ]
    path = tmp_path / "designs.design"
    assert write_designs(str(path), records) == 2

    loaded = read_designs(str(path))
    assert [r.design for r in loaded] == [fano_plane(), biplane_11()]
    assert loaded[0].provenance == {"parent": "om_1", "child": "om_1_c001"}
    assert loaded[1].provenance is None

    text = format_designs([fano_plane()])
    assert text.splitlines()[0] == "design 7 3 1"
    with pytest.raises(DesignStructureError):
        parse_designs("design 7 3 1\n0110100\n")
    with pytest.raises(DesignStructureError):
        parse_designs("block 7 3 1\n")
