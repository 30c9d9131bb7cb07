"""
Step7-06: Step7統合プロセッサー
分類した設計の 2-ランク検査・ランク表と、低ランク設計の符号内探索
"""

import csv
import importlib
import json
import logging
import os
from typing import Dict, List, Optional

from tqdm import tqdm

_step1 = importlib.import_module('src.modules.step1')
_step6 = importlib.import_module('src.modules.step6')
_binary_code_module = importlib.import_module('src.modules.step7.01_binary_code')
_weight_module = importlib.import_module('src.modules.step7.02_weight_enumeration')
_search_module = importlib.import_module('src.modules.step7.03_design_search')
_subgroup_module = importlib.import_module('src.modules.step7.04_subgroup_classes')
_rank_table_module = importlib.import_module('src.modules.step7.05_rank_table')

IncidenceMatrix = _step1.IncidenceMatrix
DesignRecord = _step1.DesignRecord
dual = _step1.dual
write_designs = _step1.write_designs
canonical_form = _step6.canonical_form
automorphism_group = _step6.automorphism_group
CodeBudgetError = _binary_code_module.CodeBudgetError
rank2 = _binary_code_module.rank2
span_code = _binary_code_module.span_code
weight_count = _weight_module.weight_count
designs_in_code = _search_module.designs_in_code
cyclic_subgroup_classes = _subgroup_module.cyclic_subgroup_classes
to_permutation = _subgroup_module.to_permutation
rank_check = _rank_table_module.rank_check
rank_table = _rank_table_module.rank_table

logger = logging.getLogger(__name__)


def reference_rank_columns(tables: Dict) -> Dict[int, int]:
    """参照の 2-ランク表の |Aut| ごとの列合計"""
    totals: Dict[int, int] = {}
    for _, row in (tables.get('rank_table') or {}).items():
        for order, count in row.items():
            totals[int(order)] = totals.get(int(order), 0) + int(count)
    return dict(sorted(totals.items()))


def check_reference_tables(tables: Dict) -> Dict[int, tuple]:
    """
    参照の 2-ランク表の列合計を参照の分類結果と照合（不一致は警告のみ）

    Returns:
        Dict[int, tuple]: |Aut| → (ランク表の合計, 分類結果の類数) の不一致
    """
    columns = reference_rank_columns(tables)
    mismatches = {}
    for row in (tables.get('classification') or {}).get('by_group', []):
        order = int(row['order'])
        found = columns.get(order, 0)
        if found != int(row['classes']):
            mismatches[order] = (found, int(row['classes']))
            logger.warning(
                f"⚠️ 参照ランク表の |Aut|={order} の列合計 {found} が分類結果 {row['classes']} と一致しません"
            )
    return mismatches


class Step7Processor:
    """Step7統合プロセッサー"""

    def __init__(self, config: Dict):
        """
        Args:
            config: 設定データ（codes, budgets, system セクション）
        """
        self.config = config
        codes = config.get('codes', {}) or {}
        self.weight = codes.get('weight')
        self.weight_budget = codes.get('weight_budget')
        self.subgroup_order = int(codes.get('subgroup_order', 3) or 3)
        self.search_max_rank = codes.get('search_max_rank')
        self.search_budget = config.get('budgets', {}).get('code_search')
        self.max_workers = int(config.get('system', {}).get('max_workers', 1) or 1)
        logger.debug("Step7プロセッサー初期化完了")

    def code_search(self, design: IncidenceMatrix, use_dual: bool = True,
                    weight: Optional[int] = None, subgroup_order: Optional[int] = None) -> Dict:
        """
        設計（または双対）の符号について重み w の語数と、不変な設計の探索を行う

        自己同型群の位数 r の巡回部分群の共役類ごとに designs_in_code を実行する

        Returns:
            Dict: 語数・部分群の類ごとの探索結果・見つかった設計
        """
        target = dual(design) if use_dual else design
        params = target.params
        weight = weight or self.weight or params.k
        order = subgroup_order or self.subgroup_order
        code = span_code(target)
        report = weight_count(code, weight, budget=self.weight_budget, n_jobs=self.max_workers)
        logger.info(f"  符号の次元 {code.dimension}, 重み {weight} の語 {report.count}個")

        target_cert = canonical_form(target)
        aut = automorphism_group(target)
        classes = []
        found_designs: List[IncidenceMatrix] = []
        for i, g in enumerate(cyclic_subgroup_classes(aut.group, order)):
            result = designs_in_code(
                code, params, [to_permutation(g, params.v)],
                budget=self.search_budget,
                n_jobs=self.max_workers,
                enumeration_budget=self.weight_budget,
            )
            found = []
            for m in result.designs:
                found.append({
                    "rank": rank2(m),
                    "aut_order": automorphism_group(m).order,
                    "certificate": canonical_form(m).hex(),
                    "is_input": canonical_form(m) == target_cert,
                })
                found_designs.append(m)
            classes.append({
                "class": i,
                "generator": list(g.array_form),
                "designs": len(result.designs),
                "distinct_classes": len({f["certificate"] for f in found}),
                "complete": result.complete,
                "nodes": result.nodes,
                "found": found,
            })
            logger.info(
                f"  位数 {order} の部分群 (類 {i}): 設計 {len(result.designs)}個"
                f"{'' if result.complete else ' ⚠️ 打ち切り'}"
            )
        return {
            "dual": use_dual,
            "dimension": code.dimension,
            "weight": report.to_dict(),
            "aut_order": aut.order,
            "subgroup_order": order,
            "subgroup_classes": classes,
            "complete": all(c["complete"] for c in classes),
            "designs": found_designs,
        }

    def write_ranks(self, path: str, rows: List[Dict]) -> None:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(["design_id", "rank", "dual_rank", "aut_order"])
            for row in rows:
                writer.writerow([row["design_id"], row["rank"], row["dual_rank"], row["aut_order"]])

    def process(self, classification, session_dirs: Dict,
                reference_tables: Optional[Dict] = None) -> Dict:
        """
        Step7処理: 同型類の代表ごとの 2-ランクと低ランク設計の符号内探索

        Args:
            classification: Step6の分類結果
            session_dirs: セッションディレクトリ情報
            reference_tables: 参照テーブル（ランク表の照合に使用）

        Returns:
            Dict: Step7処理結果
        """
        logger.info("--- Step7: 符号解析 開始 ---")
        try:
            output_dir = session_dirs["codes"]
            rows = []
            for c in tqdm(classification.classes, desc="2-rank", disable=len(classification.classes) < 100):
                check = rank_check(c.representative)
                rows.append({"design_id": c.class_id, "aut_order": c.aut_order, **check})
            logger.info(f"Step7-01: {len(rows)}類の 2-ランクを計算")

            ranks_path = os.path.join(output_dir, "ranks.csv")
            self.write_ranks(ranks_path, rows)

            expected = {order: row["classes"] for order, row in classification.by_aut_order().items()}
            table = rank_table(
                [r["rank"] for r in rows if r["aut_order"] is not None],
                [r["aut_order"] for r in rows if r["aut_order"] is not None],
                expected_columns=expected,
            )
            if reference_tables:
                check_reference_tables(reference_tables)
            table_path = os.path.join(output_dir, "rank_table.json")
            with open(table_path, 'w', encoding='utf-8') as f:
                json.dump(table.to_dict(), f, ensure_ascii=False, indent=2)
            output_files = [ranks_path, table_path]

            searches = []
            complete = True
            if self.search_max_rank is not None:
                for row, c in zip(rows, classification.classes):
                    if row["rank"] > int(self.search_max_rank):
                        continue
                    logger.info(f"Step7-03: 類 {c.class_id} (2-ランク {row['rank']}) の符号内探索")
                    try:
                        outcome = self.code_search(c.representative)
                    except CodeBudgetError as e:
                        logger.warning(f"⚠️ 類 {c.class_id}: 符号内探索をスキップ ({e})")
                        searches.append({"design_id": c.class_id, "skipped": str(e)})
                        continue
                    found_path = os.path.join(output_dir, f"class{c.class_id}_found.design")
                    write_designs(found_path, [
                        DesignRecord(m, [f"found in code of class {c.class_id}"]) for m in outcome.pop("designs")
                    ])
                    output_files.append(found_path)
                    complete = complete and outcome["complete"]
                    searches.append({"design_id": c.class_id, **outcome})

            search_path = os.path.join(output_dir, "code_search.json")
            with open(search_path, 'w', encoding='utf-8') as f:
                json.dump(searches, f, ensure_ascii=False, indent=2)
            output_files.append(search_path)

            min_rank = min((r["rank"] for r in rows), default=None)
            logger.info(f"Step7-06: 完了!! (最小 2-ランク {min_rank})")
            return {
                "success": True,
                "ranks": rows,
                "rank_table": table,
                "min_rank": min_rank,
                "searches": searches,
                "output_files": output_files,
                "complete": complete,
            }
        except Exception as e:
            logger.error(f"Step7処理エラー: {e}")
            return {"success": False, "error": str(e), "output_files": []}
