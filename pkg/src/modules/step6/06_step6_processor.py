"""
Step6-06: Step6統合プロセッサー
インデックス化で得た全設計の同型分類と自己同型群の検査
"""

import importlib
import logging
import os
from typing import Dict, List, Optional, Sequence

_classifier_module = importlib.import_module('src.modules.step6.05_classifier')

classify = _classifier_module.classify
write_classification = _classifier_module.write_classification

logger = logging.getLogger(__name__)


class Step6Processor:
    """Step6統合プロセッサー"""

    def __init__(self, config: Dict):
        """
        Args:
            config: 設定データ（group, system セクション）
        """
        self.config = config
        group = config.get('group', {})
        self.group_order = int(group.get('p', 2)) * int(group.get('q', 3))
        self.max_workers = int(config.get('system', {}).get('max_workers', 1) or 1)
        logger.debug("Step6プロセッサー初期化完了")

    def check_group_orders(self, classification) -> None:
        """
        全ての類の自己同型群が作用群を含むことを確認

        Raises:
            RuntimeError: |Aut| が作用群の位数で割り切れない類がある場合
        """
        bad = [
            c.class_id for c in classification.classes
            if c.aut_order is not None and c.aut_order % self.group_order != 0
        ]
        if bad:
            raise RuntimeError(
                f"|Aut| が {self.group_order} で割り切れない類があります: {bad[:10]}"
            )

    def classify_designs(self, designs: Sequence, output_path: str,
                         check_orders: bool = True):
        """
        設計の列を分類して JSON に保存

        Returns:
            Classification: 分類結果
        """
        classification = classify(designs, n_jobs=self.max_workers)
        if check_orders:
            self.check_group_orders(classification)
        write_classification(output_path, classification)
        counts = classification.counts()
        logger.info(
            f"  設計 {counts['designs']}個 → 同型類 {counts['classes']}個 "
            f"(自己双対 {counts['self_dual']}, 双対対 {counts['dual_pairs']}, 未対応 {counts['unmatched']})"
        )
        for order, row in classification.by_aut_order().items():
            logger.info(f"  |Aut|={order}: {row['classes']}類 / 自己双対 {row['self_dual']} / 双対対 {row['dual_pairs']}")
        return classification

    def process(self, cells: List[Dict], session_dirs: Dict,
                output_name: Optional[str] = None) -> Dict:
        """
        Step6処理: Step5の全設計を分類

        Args:
            cells: Step5の処理結果のセル一覧
            session_dirs: セッションディレクトリ情報
            output_name: 出力ファイル名

        Returns:
            Dict: Step6処理結果
        """
        logger.info("--- Step6: 同型分類 開始 ---")
        try:
            designs = [
                indexed.design
                for cell in cells for run in cell["runs"] for indexed in run["designs"]
            ]
            output_path = os.path.join(session_dirs["classes"], output_name or "classes.json")
            classification = self.classify_designs(designs, output_path)
            complete = all(c.get("complete", True) for c in cells)
            logger.info(f"Step6-06: 完了!! ({'完全' if complete else '⚠️ 入力が打ち切り'})")
            return {
                "success": True,
                "classification": classification,
                "counts": classification.counts(),
                "by_aut_order": classification.by_aut_order(),
                "output_files": [output_path],
                "complete": complete,
            }
        except Exception as e:
            logger.error(f"Step6処理エラー: {e}")
            return {"success": False, "error": str(e), "output_files": []}
