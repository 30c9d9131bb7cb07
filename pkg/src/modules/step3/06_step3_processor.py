"""
Step3-06: Step3統合プロセッサー
対象セルの各軌道長分布について軌道行列を生成して保存
"""

import importlib
import logging
import os
from typing import Dict, List, Optional

_step0 = importlib.import_module('src.modules.step0')
_step1 = importlib.import_module('src.modules.step1')
_orbit_structure = importlib.import_module('src.modules.step3.01_orbit_structure')
_om_generator = importlib.import_module('src.modules.step3.04_om_generator')
_om_io = importlib.import_module('src.modules.step3.05_om_io')

DesignParams = _step1.DesignParams
OrbitStructure = _orbit_structure.OrbitStructure
generate_orbit_matrices = _om_generator.generate_orbit_matrices
write_orbit_matrices = _om_io.write_orbit_matrices

logger = logging.getLogger(__name__)


def cell_label(f_p: int, f_q: int, dist_index: int) -> str:
    """セルと分布番号からファイル名・ID用のラベル"""
    return f"f{f_p}_{f_q}_d{dist_index}"


class Step3Processor:
    """Step3統合プロセッサー"""

    def __init__(self, config: Dict):
        """
        Args:
            config: 設定データ（design, budgets, orbit_matrix, system セクション）
        """
        self.config = config
        design = config.get('design', {})
        self.params = DesignParams(int(design['v']), int(design['k']), int(design['lambda']))
        om_config = config.get('orbit_matrix', {}) or {}
        self.mode = om_config.get('mode', 'full')
        self.stabilizer_divisibility = _step0.to_bool(om_config.get('stabilizer_divisibility', False))
        shard = om_config.get('shard_percent')
        self.shard_percent = float(shard) if shard is not None else None
        self.budget = config.get('budgets', {}).get('gen_om')
        self.max_workers = int(config.get('system', {}).get('max_workers', 1) or 1)
        logger.debug("Step3プロセッサー初期化完了")

    def generate_for_distribution(self, dist, label: str, output_dir: str,
                                  output_path: Optional[str] = None) -> Dict:
        """
        1つの軌道長分布について軌道行列を生成

        Args:
            output_path: 出力ファイル（省略時は output_dir/{label}.om）

        Returns:
            Dict: 生成結果（件数・完了フラグ・出力ファイル・ID）
        """
        structure = OrbitStructure.from_distribution(dist)
        result = generate_orbit_matrices(
            self.params,
            structure,
            budget=self.budget,
            n_jobs=self.max_workers,
            mode=self.mode,
            stabilizer_divisibility=self.stabilizer_divisibility,
            shard_percent=self.shard_percent,
        )
        ids = [f"{label}_{i + 1:06d}" for i in range(len(result.matrices))]
        output_path = output_path or os.path.join(output_dir, f"{label}.om")
        write_orbit_matrices(output_path, result.matrices, self.params, ids)

        status = "完了" if result.complete else "⚠️ 打ち切り"
        logger.info(f"  {dist.label()}: 軌道行列 {len(result.matrices)}個 ({status}, ノード {result.nodes})")
        return {
            "label": label,
            "distribution": dist.as_tuple(),
            "structure": list(structure.point_sizes),
            "group_order": structure.group_order,
            "count": len(result.matrices),
            "complete": result.complete,
            "nodes": result.nodes,
            "file": output_path,
            "ids": ids,
            "matrices": result.matrices,
        }

    def process(self, cells: List[Dict], session_dirs: Dict) -> Dict:
        """
        Step3処理: 全対象セルの軌道行列生成

        Args:
            cells: Step2の対象セル（distributions を含む）
            session_dirs: セッションディレクトリ情報

        Returns:
            Dict: Step3処理結果
        """
        logger.info("--- Step3: 軌道行列生成 開始 ---")
        try:
            cell_results = []
            output_files = []
            for cell in cells:
                runs = []
                for dist_index, dist in enumerate(cell["distributions"]):
                    label = cell_label(cell["f_p"], cell["f_q"], dist_index)
                    run = self.generate_for_distribution(dist, label, session_dirs["orbit_matrices"])
                    runs.append(run)
                    output_files.append(run["file"])
                cell_results.append({
                    "f_p": cell["f_p"],
                    "f_q": cell["f_q"],
                    "runs": runs,
                    "orbit_matrices": sum(r["count"] for r in runs),
                    "complete": all(r["complete"] for r in runs),
                })
                logger.info(
                    f"Step3-04: (f_p={cell['f_p']}, f_q={cell['f_q']}) "
                    f"軌道行列 {cell_results[-1]['orbit_matrices']}個"
                )

            complete = all(c["complete"] for c in cell_results)
            logger.info(f"Step3-06: 完了!! ({'完全' if complete else '⚠️ 打ち切りあり'})")
            return {
                "success": True,
                "cells": cell_results,
                "output_files": output_files,
                "complete": complete,
            }
        except Exception as e:
            logger.error(f"Step3処理エラー: {e}")
            return {"success": False, "error": str(e), "cells": [], "output_files": []}
