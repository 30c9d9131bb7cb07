"""
Step5-03: Step5統合プロセッサー
細分化軌道行列ごとのインデックス化と設計ファイルの保存
"""

import importlib
import logging
import os
from typing import Dict, List, Optional

from joblib import Parallel, delayed

_step1 = importlib.import_module('src.modules.step1')
_group_action_module = importlib.import_module('src.modules.step5.01_group_action')
_indexer_module = importlib.import_module('src.modules.step5.02_indexer')

DesignRecord = _step1.DesignRecord
write_designs = _step1.write_designs
action_for_structure = _group_action_module.action_for_structure
index = _indexer_module.index

logger = logging.getLogger(__name__)


def _index_one(record, p: int, q: int, budget: Optional[int],
               checkpoint_dir: Optional[str], checkpoint_every: Optional[int]) -> Dict:
    """ワーカー処理: 1つの細分化軌道行列をインデックス化"""
    action = action_for_structure(record.refined.map.parent.structure, p, q)
    checkpoint_path = (
        os.path.join(checkpoint_dir, f"{record.child_id}.json") if checkpoint_dir else None
    )
    result = index(
        record.refined, action,
        budget=budget,
        checkpoint_path=checkpoint_path,
        checkpoint_every=checkpoint_every,
        rom_id=record.child_id,
        parent_id=record.parent_id,
    )
    return {
        "child_id": record.child_id,
        "designs": result.designs,
        "complete": result.complete,
        "nodes": result.nodes,
        "resumed": result.resumed,
    }


class Step5Processor:
    """Step5統合プロセッサー"""

    def __init__(self, config: Dict):
        """
        Args:
            config: 設定データ（group, budgets, indexing, system セクション）
        """
        self.config = config
        group = config.get('group', {})
        self.p = int(group.get('p', 2))
        self.q = int(group.get('q', 3))
        self.budget = config.get('budgets', {}).get('index')
        self.checkpoint_every = config.get('indexing', {}).get('checkpoint_every')
        self.max_workers = int(config.get('system', {}).get('max_workers', 1) or 1)
        logger.debug("Step5プロセッサー初期化完了")

    def index_run(self, run: Dict, session_dirs: Dict) -> Dict:
        """
        1つの分布の細分化軌道行列をすべてインデックス化

        Args:
            run: Step4の分布ごとの結果（label, records）
            session_dirs: セッションディレクトリ情報

        Returns:
            Dict: インデックス化結果
        """
        records = run["records"]
        checkpoint_dir = session_dirs.get("checkpoints")
        args = (self.p, self.q, self.budget, checkpoint_dir, self.checkpoint_every)
        if self.max_workers > 1 and len(records) > 1:
            outcomes = Parallel(n_jobs=self.max_workers)(
                delayed(_index_one)(record, *args) for record in records
            )
        else:
            outcomes = [_index_one(record, *args) for record in records]

        designs = [d for outcome in outcomes for d in outcome["designs"]]
        incomplete = [o["child_id"] for o in outcomes if not o["complete"]]
        for child_id in incomplete:
            logger.warning(f"⚠️ {child_id}: インデックス化がノード予算で打ち切られました")
        resumed = sum(1 for o in outcomes if o["resumed"])
        if resumed:
            logger.info(f"  {run['label']}: {resumed}個をチェックポイントから再開")

        output_path = os.path.join(session_dirs["designs"], f"{run['label']}.design")
        write_designs(output_path, [DesignRecord(d.design, d.comments) for d in designs])
        logger.info(f"  {run['label']}: 細分化 {len(records)}個 → 設計 {len(designs)}個")
        return {
            "label": run["label"],
            "count": len(designs),
            "complete": run.get("complete", True) and not incomplete,
            "nodes": sum(o["nodes"] for o in outcomes),
            "file": output_path,
            "designs": designs,
        }

    def process(self, cells: List[Dict], session_dirs: Dict) -> Dict:
        """
        Step5処理: 全セルのインデックス化

        Args:
            cells: Step4の処理結果のセル一覧
            session_dirs: セッションディレクトリ情報

        Returns:
            Dict: Step5処理結果
        """
        logger.info("--- Step5: インデックス化 開始 ---")
        try:
            cell_results = []
            output_files = []
            for cell in cells:
                runs = [self.index_run(run, session_dirs) for run in cell["runs"]]
                output_files.extend(r["file"] for r in runs)
                cell_results.append({
                    "f_p": cell["f_p"],
                    "f_q": cell["f_q"],
                    "runs": runs,
                    "designs": sum(r["count"] for r in runs),
                    "complete": all(r["complete"] for r in runs),
                })
                logger.info(
                    f"Step5-02: (f_p={cell['f_p']}, f_q={cell['f_q']}) "
                    f"設計 {cell_results[-1]['designs']}個"
                )

            complete = all(c["complete"] for c in cell_results)
            logger.info(f"Step5-03: 完了!! ({'完全' if complete else '⚠️ 打ち切りあり'})")
            return {
                "success": True,
                "cells": cell_results,
                "output_files": output_files,
                "complete": complete,
            }
        except Exception as e:
            logger.error(f"Step5処理エラー: {e}")
            return {"success": False, "error": str(e), "cells": [], "output_files": []}
