#!/usr/bin/env python3
"""
Step2テスト
許容不動点数と軌道長分布（全探索との照合を含む）
"""

import itertools
import json
import sys
from pathlib import Path

import pytest

# プロジェクトルートをパスに追加
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.modules.step1 import DesignParams  # noqa: E402
from src.modules.step2 import (  # noqa: E402
    Step2Processor,
    admissible_fixed_points,
    distribution_from_tuple,
    group_primes,
    orbit_distributions,
    summarize_actions,
)

FLAGSHIP = DesignParams(70, 24, 8)
BIPLANE = DesignParams(11, 5, 2)


def _brute_force_distributions(params, p, q, f_p, f_q):
    """全ての (d1, dp, dq, dpq) を試す"""
    v = params.v
    found = []
    for dp, dq, dpq in itertools.product(
        range(v // p + 1), range(v // q + 1), range(v // (p * q) + 1)
    ):
        d1 = v - p * dp - q * dq - p * q * dpq
        if d1 < 0:
            continue
        if d1 + q * dq == f_p and d1 + p * dp == f_q:
            found.append((d1, dp, dq, dpq))
    return found


def test_flagship_admissible_sets():
    print("🧪 2-(70,24,8) の許容不動点数")
    assert admissible_fixed_points(FLAGSHIP, 2).admissible == (0,) + tuple(range(4, 29, 2))
    assert admissible_fixed_points(FLAGSHIP, 3).admissible == tuple(range(1, 26, 3))
    print("   ✅ f_2, f_3 の集合が一致")


def test_admissible_sets_satisfy_congruence():
    for params in (FLAGSHIP, BIPLANE, DesignParams(7, 3, 1), DesignParams(16, 6, 2)):
        for r in (2, 3, 5, 7):
            for f in admissible_fixed_points(params, r).admissible:
                assert (params.v - f) % r == 0
                assert 0 <= f <= params.v - 2 * params.n


def test_small_admissible_sets():
    assert admissible_fixed_points(BIPLANE, 2).admissible == (3, 5)
    assert admissible_fixed_points(BIPLANE, 3).admissible == (2,)
    assert admissible_fixed_points(DesignParams(7, 3, 1), 7).admissible == (0,)


def test_non_prime_order_rejected():
    with pytest.raises(ValueError):
        admissible_fixed_points(FLAGSHIP, 6)
    with pytest.raises(ValueError):
        orbit_distributions(FLAGSHIP, 3, 3, 1, 1)


def test_flagship_distribution():
    dists = orbit_distributions(FLAGSHIP, 2, 3, 14, 4)
    assert [d.as_tuple() for d in dists] == [(2, 1, 4, 9)]
    assert dists[0].v == 70
    assert dists[0].orbit_sizes()[:3] == [1, 1, 2]
    assert dists[0].label() == "(2×1, 1×2, 4×3, 9×6)"


def test_group_order_and_distribution_from_values():
    assert group_primes(6) == (2, 3)
    assert group_primes(35) == (5, 7)
    for order in (7, 12, 30):
        with pytest.raises(ValueError):
            group_primes(order)

    dist = distribution_from_tuple((2, 1, 4, 9), 2, 3)
    assert dist.as_tuple() == (2, 1, 4, 9)
    assert dist.v == 70
    with pytest.raises(ValueError):
        distribution_from_tuple((2, 1, 4), 2, 3)
    with pytest.raises(ValueError):
        distribution_from_tuple((2, -1, 4, 9), 2, 3)


@pytest.mark.parametrize("params", [FLAGSHIP, BIPLANE])
def test_distributions_match_brute_force(params):
    print(f"🧪 {params} の軌道長分布を全探索と照合")
    for f_p in admissible_fixed_points(params, 2).admissible:
        for f_q in admissible_fixed_points(params, 3).admissible:
            computed = [d.as_tuple() for d in orbit_distributions(params, 2, 3, f_p, f_q)]
            assert computed == _brute_force_distributions(params, 2, 3, f_p, f_q)
    print("   ✅ 全セルで一致")


def test_summarize_actions():
    summary = summarize_actions([
        {"f_p": 0, "f_q": 16, "orbit_matrices": 5},
        {"f_p": 14, "f_q": 4, "orbit_matrices": 65205},
        {"f_p": 6, "f_q": 4, "orbit_matrices": 12},
        {"f_p": 4, "f_q": 1, "orbit_matrices": 0},
    ])
    assert summary == {"fixed_point_free": [16], "with_fixed_points": {4: [6, 14]}}


def test_step2_processor(tmp_path):
    config = {"design": {"v": 70, "k": 24, "lambda": 8}, "group": {"p": 2, "q": 3}, "targets": [[14, 4]]}
    processor = Step2Processor(config)
    result = processor.process({"feasibility": str(tmp_path)})

    assert result["success"]
    assert result["complete"]
    assert [d.as_tuple() for d in result["cells"][0]["distributions"]] == [(2, 1, 4, 9)]

    with open(result["output_files"][0], encoding="utf-8") as f:
        report = json.load(f)
    assert report["admissible_f_p"][:3] == [0, 4, 6]
    assert report["admissible_f_q"][-1] == 25
    assert len(report["grid"]) == 14 * 9

    # 対象セル未指定なら分布を持つ全セル
    all_cells = Step2Processor({**config, "targets": []}).target_cells()
    assert all(cell["distributions"] for cell in all_cells)
    assert any(cell["f_p"] == 14 and cell["f_q"] == 4 for cell in all_cells)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
