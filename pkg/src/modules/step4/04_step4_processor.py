"""
Step4-04: Step4統合プロセッサー
各軌道行列を細分化し、分布ごとに .rom ファイルへ保存
"""

import importlib
import logging
import os
from typing import Dict, List, Optional

from joblib import Parallel, delayed

_step1 = importlib.import_module('src.modules.step1')
_refiner = importlib.import_module('src.modules.step4.02_refiner')
_rom_io = importlib.import_module('src.modules.step4.03_rom_io')

DesignParams = _step1.DesignParams
refine = _refiner.refine
RomRecord = _rom_io.RomRecord
write_roms = _rom_io.write_roms

logger = logging.getLogger(__name__)


def _refine_one(parent_id: str, parent, params, p: int, q: int, budget: Optional[int]) -> Dict:
    """ワーカー処理: 1つの親軌道行列を細分化"""
    result = refine(parent, params, p, q, budget)
    records = [
        RomRecord(child, parent_id, f"{parent_id}_c{i + 1:03d}")
        for i, child in enumerate(result.children)
    ]
    return {"parent_id": parent_id, "records": records, "complete": result.complete, "nodes": result.nodes}


class Step4Processor:
    """Step4統合プロセッサー"""

    def __init__(self, config: Dict):
        """
        Args:
            config: 設定データ（design, group, budgets, system セクション）
        """
        self.config = config
        design = config.get('design', {})
        group = config.get('group', {})
        self.params = DesignParams(int(design['v']), int(design['k']), int(design['lambda']))
        self.p = int(group.get('p', 2))
        self.q = int(group.get('q', 3))
        self.budget = config.get('budgets', {}).get('refine')
        self.max_workers = int(config.get('system', {}).get('max_workers', 1) or 1)
        logger.debug("Step4プロセッサー初期化完了")

    def refine_run(self, run: Dict, output_dir: str) -> Dict:
        """
        1つの軌道長分布の全軌道行列を細分化

        Args:
            run: Step3の分布ごとの結果（label, ids, matrices）

        Returns:
            Dict: 細分化結果（件数・完了フラグ・出力ファイル・レコード）
        """
        parents = list(zip(run["ids"], run["matrices"]))
        if self.max_workers > 1 and len(parents) > 1:
            outcomes = Parallel(n_jobs=self.max_workers)(
                delayed(_refine_one)(pid, om, self.params, self.p, self.q, self.budget)
                for pid, om in parents
            )
        else:
            outcomes = [_refine_one(pid, om, self.params, self.p, self.q, self.budget) for pid, om in parents]

        records: List = [r for outcome in outcomes for r in outcome["records"]]
        incomplete = [o["parent_id"] for o in outcomes if not o["complete"]]
        for parent_id in incomplete:
            logger.warning(f"⚠️ {parent_id}: 細分化がノード予算で打ち切られました")

        output_path = os.path.join(output_dir, f"{run['label']}.rom")
        write_roms(output_path, records)
        complete = run.get("complete", True) and not incomplete
        logger.info(f"  {run['label']}: 親 {len(parents)}個 → 子 {len(records)}個")
        return {
            "label": run["label"],
            "distribution": run.get("distribution"),
            "count": len(records),
            "complete": complete,
            "nodes": sum(o["nodes"] for o in outcomes),
            "file": output_path,
            "records": records,
        }

    def process(self, cells: List[Dict], session_dirs: Dict) -> Dict:
        """
        Step4処理: 全セルの軌道行列を細分化

        Args:
            cells: Step3の処理結果のセル一覧
            session_dirs: セッションディレクトリ情報

        Returns:
            Dict: Step4処理結果
        """
        logger.info("--- Step4: 軌道行列の細分化 開始 ---")
        try:
            cell_results = []
            output_files = []
            for cell in cells:
                runs = [self.refine_run(run, session_dirs["refined"]) for run in cell["runs"]]
                output_files.extend(r["file"] for r in runs)
                cell_results.append({
                    "f_p": cell["f_p"],
                    "f_q": cell["f_q"],
                    "runs": runs,
                    "refined": sum(r["count"] for r in runs),
                    "complete": all(r["complete"] for r in runs),
                })
                logger.info(
                    f"Step4-02: (f_p={cell['f_p']}, f_q={cell['f_q']}) "
                    f"細分化軌道行列 {cell_results[-1]['refined']}個"
                )

            complete = all(c["complete"] for c in cell_results)
            logger.info(f"Step4-04: 完了!! ({'完全' if complete else '⚠️ 打ち切りあり'})")
            return {
                "success": True,
                "cells": cell_results,
                "output_files": output_files,
                "complete": complete,
            }
        except Exception as e:
            logger.error(f"Step4処理エラー: {e}")
            return {"success": False, "error": str(e), "cells": [], "output_files": []}
