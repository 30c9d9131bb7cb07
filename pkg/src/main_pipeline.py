import os
import sys
import json
import time
import hashlib
import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, List, Optional, Sequence

# プロジェクト内モジュールのインポート
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# Step0: 初期化モジュール群
from src.modules.step0 import (
    load_env,
    load_config,
    apply_processing_options,
    setup_logging,
    load_reference_tables,
    expected_cells,
    ComponentInitializer,
    DirectoryManager,
    to_int,
    to_int_tuple,
)
from src.modules.step1 import DesignRecord, read_designs, write_designs
from src.modules.step2 import distribution_from_tuple, group_primes, summarize_actions
from src.modules.step3 import OrbitStructure, read_orbit_matrices
from src.modules.step4 import read_roms

logger = logging.getLogger(__name__)


def file_digest(path: str) -> str:
    """ファイル内容の SHA-256"""
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 20), b''):
            digest.update(chunk)
    return digest.hexdigest()


def artifacts_digest(paths: Sequence[str], root: str) -> Dict[str, str]:
    """成果物の相対パス → ダイジェスト（パスの昇順）"""
    result = {}
    for path in sorted(paths, key=lambda p: os.path.relpath(p, root)):
        if os.path.exists(path):
            result[os.path.relpath(path, root)] = file_digest(path)
    return result


@dataclass
class RunManifest:
    """
    実行記録

    Attributes:
        params: 設計パラメータと作用群
        stages: ステージごとの出力ダイジェスト・完了フラグ・所要時間
        budgets: ステージ別ノード予算
        threads: ワーカー数
    """

    params: Dict
    budgets: Dict
    threads: int
    stages: List[Dict] = field(default_factory=list)
    started_at: str = field(default_factory=lambda: datetime.now().isoformat())

    @property
    def complete(self) -> bool:
        return bool(self.stages) and all(s["success"] and s["complete"] for s in self.stages)

    def upstream_complete(self) -> bool:
        return all(s["complete"] for s in self.stages)

    def record(self, name: str, result: Dict, wall_clock: float, root: str) -> Dict:
        """ステージ結果を記録（打ち切りは下流へ引き継ぐ）"""
        outputs = artifacts_digest(result.get("output_files", []), root)
        combined = hashlib.sha256(json.dumps(outputs, sort_keys=True).encode('utf-8')).hexdigest()
        entry = {
            "name": name,
            "success": bool(result.get("success")),
            "error": result.get("error"),
            "complete": bool(result.get("complete", False)) and self.upstream_complete(),
            "wall_clock_sec": round(wall_clock, 3),
            "outputs": outputs,
            "digest": combined,
            "summary": result.get("summary", {}),
        }
        self.stages.append(entry)
        return entry

    def to_dict(self) -> Dict:
        return {
            "params": self.params,
            "budgets": self.budgets,
            "threads": self.threads,
            "started_at": self.started_at,
            "complete": self.complete,
            "stages": self.stages,
        }

    def write(self, path: str) -> None:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, ensure_ascii=False, indent=2)


def verify_table1(computed: List[Dict], expected: Dict) -> List[Dict]:
    """
    計算したセルを作用表の期待値と照合

    設計の有無が一致すれば軌道行列数が異なっても PASS（同値の取り方の違いとして注記）。
    表に無いセルは軌道行列0個として扱う

    Args:
        computed: {"f_p", "f_q", "orbit_matrices", "designs", "complete"} のリスト
        expected: expected_cells の戻り値

    Returns:
        List[Dict]: セルごとの PASS / FAIL / TRUNCATED
    """
    report = []
    for cell in computed:
        key = (cell["f_p"], cell["f_q"])
        entry = expected.get(key, {"orbit_matrices": 0, "designs": "-"})
        expected_count = entry["orbit_matrices"]
        expected_designs = entry["designs"]
        found_designs = "Y" if cell["designs"] else "N"
        row = {
            "f_p": cell["f_p"],
            "f_q": cell["f_q"],
            "orbit_matrices": cell["orbit_matrices"],
            "expected_orbit_matrices": expected_count,
            "designs": cell["designs"],
            "expected_designs": expected_designs,
            "note": None,
        }
        if not cell["complete"]:
            row["status"] = "TRUNCATED"
        elif expected_designs == "-":
            row["status"] = "PASS" if cell["orbit_matrices"] == 0 else "FAIL"
        elif expected_designs == "?":
            row["status"] = "PASS"
            row["note"] = "期待値なし（表で計算範囲外のセル）"
        elif found_designs != expected_designs:
            row["status"] = "FAIL"
        else:
            row["status"] = "PASS"
            if expected_count is not None and cell["orbit_matrices"] != expected_count:
                row["note"] = "軌道行列数が異なる（同値の取り方の違い）"
                logger.warning(
                    f"⚠️ ({key[0]},{key[1]}): 軌道行列 {cell['orbit_matrices']}個 (表: {expected_count}個)"
                )
        report.append(row)
    return report


class DesignPipeline:
    # Step0: 初期化
    def __init__(self, config_path: str, processing_options: Optional[Dict] = None):
        # Step0-01: .envファイルの読み込み
        load_env()

        self.config_path = config_path
        self.processing_options = processing_options or {}
        logger.info("Step0-01: 完了!!")

        # Step0-02: 設定ファイルの読み込みとオプション適用
        self.config = load_config(config_path)
        apply_processing_options(self.config, self.processing_options)
        logger.info("Step0-02: 完了!!")

        # Step0-03: ログシステムのセットアップ
        setup_logging(self.config)
        logger.info("Step0-03: 完了!!")

        # Step0-04: 参照テーブルの読み込み（無くても続行）
        try:
            self.reference_tables = load_reference_tables(config_path)
        except RuntimeError:
            logger.warning("⚠️ 参照テーブルが読み込めません。照合処理はスキップされます")
            self.reference_tables = {}
        logger.info("Step0-04: 完了!!")

        # Step0-05: コンポーネントの初期化
        components = ComponentInitializer(self.config).initialize_all()
        self.step2_processor = components.get('step2_processor')
        self.step3_processor = components.get('step3_processor')
        self.step4_processor = components.get('step4_processor')
        self.step5_processor = components.get('step5_processor')
        self.step6_processor = components.get('step6_processor')
        self.step7_processor = components.get('step7_processor')
        logger.info("Step0-05: コンポーネント初期化 完了‼️")

        # Step0-06: ディレクトリ管理の設定
        self.directory_manager = DirectoryManager(self.config)
        self.dirs = self.directory_manager.setup_directories()
        logger.info("Step0-06: ディレクトリ管理 完了‼️")

    @property
    def threads(self) -> int:
        return int(self.config.get('system', {}).get('max_workers', 1) or 1)

    def default_session_id(self) -> str:
        design = self.config['design']
        group = self.config.get('group', {})
        return f"d{design['v']}_{design['k']}_{design['lambda']}_z{group.get('p')}x{group.get('q')}"

    def new_manifest(self) -> RunManifest:
        design = self.config['design']
        return RunManifest(
            params={
                "v": design['v'], "k": design['k'], "lambda": design['lambda'],
                "p": self.config['group']['p'], "q": self.config['group']['q'],
                "targets": self.config.get('targets') or [],
                "shard_percent": self.config.get('orbit_matrix', {}).get('shard_percent'),
            },
            budgets=dict(self.config.get('budgets', {})),
            threads=self.threads,
        )

    def _run_stage(self, manifest: RunManifest, name: str, processor, session_dirs: Dict,
                   call, summarize) -> Dict:
        """1ステージを実行して記録し、マニフェストを書き出す"""
        elapsed = 0.0
        if processor is None:
            result = {"success": False, "error": f"{name} プロセッサーが初期化されていません"}
        else:
            start = time.perf_counter()
            result = call()
            elapsed = time.perf_counter() - start
        if result.get("success"):
            result["summary"] = summarize(result)
        entry = manifest.record(name, result, elapsed, session_dirs["session_root"])
        manifest.write(os.path.join(session_dirs["manifests"], "manifest.json"))
        status = "完了" if entry["complete"] else "⚠️ 打ち切り"
        if entry["success"]:
            logger.info(f"{name}: {status} ({entry['wall_clock_sec']}秒)")
        else:
            logger.error(f"{name}: 失敗 ({entry['error']})")
        return result

    def run(self, session_id: Optional[str] = None, stop_after: Optional[str] = None) -> Dict:
        """
        パイプラインを順に実行（失敗したステージで停止、途中までのマニフェストは保存）

        Args:
            session_id: セッションID（省略時は設定から決定）
            stop_after: このステージまでで停止

        Returns:
            Dict: {"manifest", "results", "session_dirs", "success"}
        """
        session_id = session_id or self.default_session_id()
        session_dirs = self.directory_manager.create_session_directories(session_id)
        manifest = self.new_manifest()
        results: Dict[str, Dict] = {}
        logger.info(f"🚀 パイプライン開始: {session_id}")

        plan = [
            ("feasible", self.step2_processor,
             lambda: self.step2_processor.process(session_dirs),
             lambda r: {"cells": [
                 {"f_p": c["f_p"], "f_q": c["f_q"], "distributions": [d.label() for d in c["distributions"]]}
                 for c in r["cells"]
             ]}),
            ("gen-om", self.step3_processor,
             lambda: self.step3_processor.process(results["feasible"]["cells"], session_dirs),
             lambda r: {
                 "cells": [{"f_p": c["f_p"], "f_q": c["f_q"], "orbit_matrices": c["orbit_matrices"]}
                           for c in r["cells"]],
                 "actions": summarize_actions(r["cells"]),
             }),
            ("refine", self.step4_processor,
             lambda: self.step4_processor.process(results["gen-om"]["cells"], session_dirs),
             lambda r: {"refined": sum(c["refined"] for c in r["cells"])}),
            ("index", self.step5_processor,
             lambda: self.step5_processor.process(results["refine"]["cells"], session_dirs),
             lambda r: {"cells": [{"f_p": c["f_p"], "f_q": c["f_q"], "designs": c["designs"]}
                                  for c in r["cells"]]}),
        ]
        if self.config.get('enable_step6', True):
            plan.append(("classify", self.step6_processor,
                         lambda: self.step6_processor.process(results["index"]["cells"], session_dirs),
                         lambda r: {"counts": r["counts"],
                                    "by_aut_order": {str(k): v for k, v in r["by_aut_order"].items()}}))
            if self.config.get('enable_step7', True):
                plan.append(("codes", self.step7_processor,
                             lambda: self.step7_processor.process(
                                 results["classify"]["classification"], session_dirs, self.reference_tables),
                             lambda r: {"min_rank": r["min_rank"], "rank_table": r["rank_table"].to_dict()}))

        success = True
        for name, processor, call, summarize in plan:
            result = self._run_stage(manifest, name, processor, session_dirs, call, summarize)
            results[name] = result
            if not result.get("success"):
                success = False
                break
            if stop_after == name:
                break

        logger.info(f"🚀 パイプライン終了: {'完全' if manifest.complete else '⚠️ 未完了または打ち切り'}")
        return {"manifest": manifest, "results": results, "session_dirs": session_dirs, "success": success}

    def verify_table1(self, cells: Optional[List] = None, session_id: Optional[str] = None) -> Dict:
        """
        作用表のセルを軌道行列生成〜インデックス化まで計算して照合

        Args:
            cells: [(f_p, f_q), ...]（省略時は参照テーブルのデスクトップ規模セル）
        """
        cells = cells or self.reference_tables.get('action_table', {}).get('desk_scale', [])
        # Step2 プロセッサーは同じ設定辞書を参照している
        self.config["targets"] = [list(c) for c in cells]
        outcome = self.run(session_id=session_id or f"{self.default_session_id()}_table1", stop_after="index")
        if not outcome["success"]:
            return {"success": False, "report": [], "manifest": outcome["manifest"]}

        gen = {(c["f_p"], c["f_q"]): c for c in outcome["results"]["gen-om"]["cells"]}
        indexed = {(c["f_p"], c["f_q"]): c for c in outcome["results"]["index"]["cells"]}
        computed = []
        for key, cell in gen.items():
            computed.append({
                "f_p": key[0],
                "f_q": key[1],
                "orbit_matrices": cell["orbit_matrices"],
                "designs": indexed[key]["designs"],
                "complete": indexed[key]["complete"],
            })
        report = verify_table1(computed, expected_cells(self.reference_tables))
        report_path = os.path.join(outcome["session_dirs"]["manifests"], "table1.json")
        with open(report_path, 'w', encoding='utf-8') as f:
            json.dump(report, f, ensure_ascii=False, indent=2)
        for row in report:
            logger.info(
                f"  ({row['f_p']},{row['f_q']}): {row['status']} "
                f"軌道行列 {row['orbit_matrices']} (表 {row['expected_orbit_matrices']}), "
                f"設計 {row['designs']} (表 {row['expected_designs']})"
            )
        return {
            "success": all(r["status"] == "PASS" for r in report),
            "report": report,
            "manifest": outcome["manifest"],
        }

    # ---- 単独ステージ ----

    def gen_om_file(self, dist_values, output_path: str) -> Dict:
        """1つの軌道長分布の軌道行列を生成して output_path に保存"""
        group = self.config['group']
        dist = distribution_from_tuple(dist_values, int(group['p']), int(group['q']))
        if dist.v != self.step3_processor.params.v:
            raise ValueError(f"分布 {dist.label()} の点数 {dist.v} が v と一致しません")
        label = os.path.splitext(os.path.basename(output_path))[0]
        output_dir = os.path.dirname(os.path.abspath(output_path))
        os.makedirs(output_dir, exist_ok=True)
        return self.step3_processor.generate_for_distribution(dist, label, output_dir, output_path)

    def refine_file(self, input_path: str, output_path: str) -> Dict:
        records = read_orbit_matrices(input_path)
        run = {
            "label": os.path.splitext(os.path.basename(output_path))[0],
            "ids": [r.record_id or f"om_{i + 1:06d}" for i, r in enumerate(records)],
            "matrices": [r.matrix for r in records],
            "complete": True,
        }
        return self.step4_processor.refine_run(run, os.path.dirname(os.path.abspath(output_path)))

    def index_file(self, input_path: str, output_path: str, dist_values=None) -> Dict:
        records = read_roms(input_path)
        if dist_values is not None:
            group = self.config['group']
            dist = distribution_from_tuple(dist_values, int(group['p']), int(group['q']))
            expected = OrbitStructure.from_distribution(dist)
            for record in records:
                if record.refined.map.parent.structure != expected:
                    raise ValueError(f"{record.child_id}: 親の軌道構造が分布 {dist.label()} と一致しません")
        run = {
            "label": os.path.splitext(os.path.basename(output_path))[0],
            "records": records,
            "complete": True,
        }
        session_dirs = {
            "designs": os.path.dirname(os.path.abspath(output_path)),
            "checkpoints": self.dirs.get("checkpoints"),
        }
        return self.step5_processor.index_run(run, session_dirs)

    def classify_file(self, input_path: str, output_path: str):
        designs = [r.design for r in read_designs(input_path)]
        return self.step6_processor.classify_designs(designs, output_path)

    def rank_file(self, input_path: str, output_path: str) -> List[Dict]:
        from src.modules.step7 import rank_check
        rows = []
        for i, record in enumerate(read_designs(input_path)):
            rows.append({"design_id": i, "aut_order": None, **rank_check(record.design)})
        self.step7_processor.write_ranks(output_path, rows)
        return rows

    def code_search_file(self, design_path: str, output_path: str, use_dual: bool,
                         weight: Optional[int], subgroup_order: Optional[int]) -> Dict:
        design = read_designs(design_path)[0].design
        outcome = self.step7_processor.code_search(design, use_dual, weight, subgroup_order)
        found = outcome.pop("designs")
        write_designs(output_path, [DesignRecord(m) for m in found])
        with open(f"{os.path.splitext(output_path)[0]}.json", 'w', encoding='utf-8') as f:
            json.dump(outcome, f, ensure_ascii=False, indent=2)
        return outcome


# サブコマンド → 単独の --budget N を割り当てるステージ
COMMAND_STAGES = {
    "gen-om": "gen_om",
    "refine": "refine",
    "index": "index",
    "code-search": "code_search",
}


def _parse_cells(values: Optional[List[str]]) -> Optional[List]:
    if not values:
        return None
    return [list(to_int_tuple(v)) for v in values]


def parse_budgets(items: Sequence[str], command: str) -> Dict[str, str]:
    """
    --budget の値をステージ別予算に変換

    "STAGE=N" はそのステージ、"N" だけならサブコマンドのステージに割り当てる

    Raises:
        ValueError: ステージを決められない場合
    """
    budgets = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            if command not in COMMAND_STAGES:
                raise ValueError(f"{command} では --budget STAGE=N の形で指定してください: {item}")
            key, value = COMMAND_STAGES[command], item
        budgets[key.strip()] = value.strip()
    return budgets


def _add_common_options(parser, suppress: bool = False):
    """全体オプション（サブコマンドの前後どちらにも書ける）"""
    import argparse

    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--config", default=default("config.yml"), help="設定ファイルパス")
    parser.add_argument("--threads", type=int, default=default(None), help="ワーカー数")
    parser.add_argument("--session-id", default=default(None), help="セッションID（省略時は設定から決定）")
    # サブコマンド側は別の dest に集め、前後の指定を合わせる
    parser.add_argument("--budget", action="append", default=default([]), metavar="[STAGE=]N",
                        dest="sub_budget" if suppress else "budget",
                        help="ノード予算（STAGE は gen_om, refine, index, code_search）")


def _add_design_options(parser):
    parser.add_argument("--v", type=int, help="点の数")
    parser.add_argument("--k", type=int, help="ブロックの大きさ")
    parser.add_argument("--lambda", dest="lam", type=int, help="λ")


def _add_group_options(parser):
    parser.add_argument("--p", type=int, help="素数 p")
    parser.add_argument("--q", type=int, help="素数 q")


def processing_options_from_args(args) -> Dict:
    """コマンドライン引数から設定の上書きを作る"""
    options: Dict = {
        "threads": args.threads,
        "budgets": parse_budgets(args.budget + getattr(args, "sub_budget", []), args.command),
        "design": {
            "v": getattr(args, "v", None),
            "k": getattr(args, "k", None),
            "lambda": getattr(args, "lam", None),
        },
        "group": {"p": getattr(args, "p", None), "q": getattr(args, "q", None)},
        "checkpoints": getattr(args, "checkpoint", None),
        "shard_percent": getattr(args, "shard", None),
    }
    if getattr(args, "order", None):
        p, q = group_primes(args.order)
        options["group"] = {"p": p, "q": q}
    if args.command in ("feasible", "gen-om", "verify-table1"):
        options["skip_classify"] = True
        options["skip_codes"] = True
    return options


def build_parser():
    import argparse

    parser = argparse.ArgumentParser(
        description="Symmetric design enumeration pipeline",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
使用例:
  python src/main_pipeline.py --config config.yml run --threads 8
  python src/main_pipeline.py feasible --v 70 --k 24 --lambda 8 --order 6
  python src/main_pipeline.py gen-om --v 70 --k 24 --lambda 8 --dist 2,1,4,9 --budget 1000000 --out cell.om
  python src/main_pipeline.py refine --in cell.om --p 2 --q 3 --out cell.rom
  python src/main_pipeline.py index --in cell.rom --dist 2,1,4,9 --p 2 --q 3 --checkpoint ckpt --out cell.design
  python src/main_pipeline.py verify-table1 --cells 0,16 14,16
  python src/main_pipeline.py classify --in designs.design --out classes.json
  python src/main_pipeline.py code-search --design d.design --dual --weight 24 --subgroup-order 3 --out found.design
        """
    )
    _add_common_options(parser)

    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str):
        p = sub.add_parser(name)
        _add_common_options(p, suppress=True)
        return p

    run = add("run")
    run.add_argument("--shard", type=float, metavar="PERCENT", help="先頭行候補の先頭から探索する割合")

    feasible = add("feasible")
    _add_design_options(feasible)
    feasible.add_argument("--order", type=int, help="作用群の位数 pq")

    gen_om = add("gen-om")
    _add_design_options(gen_om)
    _add_group_options(gen_om)
    gen_om.add_argument("--dist", help="d1,dp,dq,dpq（省略時は設定の対象セル）")
    gen_om.add_argument("--shard", type=float, metavar="PERCENT", help="先頭行候補の先頭から探索する割合")
    gen_om.add_argument("--out", dest="output", help="出力する .om ファイル（--dist と併用）")

    verify = add("verify-table1")
    verify.add_argument("--cells", nargs="*", help="f_p,f_q の並び")

    refine = add("refine")
    _add_group_options(refine)
    index_parser = add("index")
    _add_group_options(index_parser)
    index_parser.add_argument("--dist", help="d1,dp,dq,dpq（親の軌道構造の確認）")
    index_parser.add_argument("--checkpoint", metavar="DIR", help="チェックポイントディレクトリ")
    for p in (refine, index_parser, add("classify"), add("rank")):
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--out", dest="output", required=True)

    search = add("code-search")
    search.add_argument("--design", required=True)
    search.add_argument("--dual", action="store_true")
    search.add_argument("--weight", type=int)
    search.add_argument("--subgroup-order", type=int)
    search.add_argument("--out", dest="output", required=True)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    メイン実行関数
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        pipeline = DesignPipeline(args.config, processing_options_from_args(args))

        if args.command == "feasible":
            outcome = pipeline.run(args.session_id, stop_after="feasible")
            if not outcome["success"]:
                return 1
            print(json.dumps(outcome["results"]["feasible"]["report"], ensure_ascii=False, sort_keys=True))
            return 0

        if args.command == "gen-om" and args.dist:
            if not args.output:
                raise ValueError("--dist を指定した場合は --out も指定してください")
            result = pipeline.gen_om_file(to_int_tuple(args.dist), args.output)
            return 0 if result["complete"] else 1

        if args.command in ("gen-om", "run"):
            stop_after = None if args.command == "run" else args.command
            outcome = pipeline.run(args.session_id, stop_after=stop_after)
            manifest = outcome["manifest"]
            return 0 if outcome["success"] and manifest.complete else 1

        if args.command == "verify-table1":
            outcome = pipeline.verify_table1(_parse_cells(args.cells), args.session_id)
            return 0 if outcome["success"] else 1

        if args.command == "refine":
            result = pipeline.refine_file(args.input, args.output)
            return 0 if result["complete"] else 1

        if args.command == "index":
            dist = to_int_tuple(args.dist) if args.dist else None
            result = pipeline.index_file(args.input, args.output, dist)
            return 0 if result["complete"] else 1

        if args.command == "classify":
            pipeline.classify_file(args.input, args.output)
            return 0

        if args.command == "rank":
            pipeline.rank_file(args.input, args.output)
            return 0

        if args.command == "code-search":
            outcome = pipeline.code_search_file(
                args.design, args.output, args.dual, to_int(args.weight), to_int(args.subgroup_order)
            )
            return 0 if outcome["complete"] else 1

        return 1

    except KeyboardInterrupt:
        print("\n⚠️ ユーザーによって処理が中断されました")
        return 1
    except Exception as e:
        print(f"❌ エラー: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
