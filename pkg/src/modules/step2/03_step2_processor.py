"""
Step2-03: Step2統合プロセッサー
許容不動点数の表と対象セルの軌道長分布を求めて保存
"""

import importlib
import json
import logging
import os
from typing import Dict, List, Optional

_step1 = importlib.import_module('src.modules.step1')
_fixed_points = importlib.import_module('src.modules.step2.01_fixed_points')
_orbit_distribution = importlib.import_module('src.modules.step2.02_orbit_distribution')

DesignParams = _step1.DesignParams
admissible_fixed_points = _fixed_points.admissible_fixed_points
orbit_distributions = _orbit_distribution.orbit_distributions
fixed_point_grid = _orbit_distribution.fixed_point_grid

logger = logging.getLogger(__name__)


def distribution_to_dict(dist) -> Dict:
    return {
        "d1": dist.d1, "dp": dist.dp, "dq": dist.dq, "dpq": dist.dpq,
        "p": dist.p, "q": dist.q, "label": dist.label(),
    }


class Step2Processor:
    """Step2統合プロセッサー"""

    def __init__(self, config: Dict):
        """
        Args:
            config: 設定データ（design, group, targets セクション）
        """
        self.config = config
        design = config.get('design', {})
        group = config.get('group', {})
        self.params = DesignParams(int(design['v']), int(design['k']), int(design['lambda']))
        self.p = int(group.get('p', 2))
        self.q = int(group.get('q', 3))
        logger.debug("Step2プロセッサー初期化完了")

    def feasibility_report(self) -> Dict:
        """
        (f_p, f_q) の全グリッドと分布

        Returns:
            Dict: JSON化可能な報告
        """
        profile_p = admissible_fixed_points(self.params, self.p)
        profile_q = admissible_fixed_points(self.params, self.q)
        grid = []
        for cell in fixed_point_grid(self.params, self.p, self.q):
            grid.append({
                "f_p": cell["f_p"],
                "f_q": cell["f_q"],
                "distributions": [distribution_to_dict(d) for d in cell["distributions"]],
            })
        return {
            "params": {"v": self.params.v, "k": self.params.k, "lambda": self.params.lam},
            "p": self.p,
            "q": self.q,
            "admissible_f_p": list(profile_p.admissible),
            "admissible_f_q": list(profile_q.admissible),
            "grid": grid,
        }

    def target_cells(self, targets: Optional[List] = None) -> List[Dict]:
        """
        対象セルの分布一覧（指定なしなら分布を持つ全セル）

        Returns:
            List[Dict]: {"f_p", "f_q", "distributions": [OrbitDistribution]}
        """
        targets = targets if targets is not None else self.config.get('targets') or []
        if targets:
            cells = []
            for f_p, f_q in targets:
                cells.append({
                    "f_p": int(f_p),
                    "f_q": int(f_q),
                    "distributions": orbit_distributions(self.params, self.p, self.q, int(f_p), int(f_q)),
                })
            return cells
        return [c for c in fixed_point_grid(self.params, self.p, self.q) if c["distributions"]]

    def process(self, session_dirs: Dict) -> Dict:
        """
        Step2処理: 実現可能性の計算と保存

        Args:
            session_dirs: セッションディレクトリ情報

        Returns:
            Dict: Step2処理結果
        """
        logger.info("--- Step2: 不動点数・軌道長分布 開始 ---")
        try:
            report = self.feasibility_report()
            cells = self.target_cells()

            output_path = os.path.join(session_dirs["feasibility"], "grid.json")
            with open(output_path, "w", encoding="utf-8") as f:
                json.dump(report, f, ensure_ascii=False, indent=2, sort_keys=True)

            for cell in cells:
                labels = [d.label() for d in cell["distributions"]] or ["なし"]
                logger.info(f"  (f_p={cell['f_p']}, f_q={cell['f_q']}): {', '.join(labels)}")

            logger.info(f"Step2-03: 完了!! ({len(cells)}セル)")
            return {
                "success": True,
                "cells": cells,
                "report": report,
                "output_files": [output_path],
                "complete": True,
            }
        except Exception as e:
            logger.error(f"Step2処理エラー: {e}")
            return {"success": False, "error": str(e), "cells": [], "output_files": []}
