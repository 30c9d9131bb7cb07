#!/usr/bin/env python3
"""
Step0独立テスト
型変換・環境変数・設定・ログ・参照テーブル・ディレクトリ管理を単体でテスト
"""

import importlib
import importlib.util
import logging
import os
import sys
from pathlib import Path

import pytest

# プロジェクトルートをパスに追加
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


def _load(name: str, filename: str):
    """数字プレフィックス付きモジュールをファイルから直接読み込み"""
    spec = importlib.util.spec_from_file_location(
        name, project_root / "src" / "modules" / "step0" / filename
    )
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


MINIMAL_CONFIG = """
system:
  log_level: INFO
design:
  v: 7
  k: 3
  lambda: 1
group:
  p: 7
  q: 1
budgets:
  gen_om: unlimited
  index: 500
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.yml"
    path.write_text(MINIMAL_CONFIG, encoding="utf-8")
    return str(path)


def test_00_type_utils():
    """型変換ユーティリティ"""
    print("🧪 [00] 型変換ユーティリティテスト")
    type_utils = _load("type_utils", "00_type_utils.py")

    assert type_utils.to_bool("true") is True
    assert type_utils.to_bool("off") is False
    assert type_utils.to_bool(1) is True
    assert type_utils.to_bool(None) is False

    assert type_utils.to_int("123") == 123
    assert type_utils.to_int("123.45") == 123
    assert type_utils.to_int(None, 999) == 999
    assert type_utils.to_int("abc", 7) == 7

    assert type_utils.to_budget(None) is None
    assert type_utils.to_budget("unlimited") is None
    assert type_utils.to_budget(-1) is None
    assert type_utils.to_budget("0") == 0
    assert type_utils.to_budget(1000) == 1000

    assert type_utils.to_int_tuple("2,1,4,9") == (2, 1, 4, 9)
    assert type_utils.to_int_tuple([14, 4]) == (14, 4)
    with pytest.raises(ValueError):
        type_utils.to_int_tuple("1,x")
    print("   ✅ 全テストケース合格")


def test_01_env_loader(monkeypatch):
    """環境変数ローダーと上書き設定"""
    print("🧪 [01] 環境変数ローダーテスト")
    env_loader = _load("env_loader", "01_env_loader.py")
    env_loader.load_env()

    monkeypatch.delenv("DESIGN_CHECKPOINT_DIR", raising=False)
    monkeypatch.delenv("DESIGN_MAX_WORKERS", raising=False)
    assert env_loader.env_overrides() == {}

    monkeypatch.setenv("DESIGN_CHECKPOINT_DIR", "/tmp/ckpt")
    monkeypatch.setenv("DESIGN_MAX_WORKERS", "3")
    assert env_loader.env_overrides() == {"checkpoints": "/tmp/ckpt", "max_workers": "3"}
    print("   ✅ 環境変数の上書き取得成功")


def test_02_config_loader(config_file, monkeypatch):
    """設定ローダー: 既定値の補完・環境変数・処理オプション"""
    print("🧪 [02] 設定ローダーテスト")
    monkeypatch.delenv("DESIGN_CHECKPOINT_DIR", raising=False)
    monkeypatch.setenv("DESIGN_MAX_WORKERS", "3")
    config_loader = _load("config_loader", "02_config_loader.py")

    config = config_loader.load_config(config_file)
    assert config['design'] == {'v': 7, 'k': 3, 'lambda': 1}
    assert config['system']['max_workers'] == 3
    assert config['orbit_matrix']['mode'] == 'full'
    assert config['indexing']['checkpoint_every'] == 100000
    assert config['budgets']['gen_om'] is None
    assert config['budgets']['index'] == 500
    assert config['budgets']['refine'] is None
    print(f"   ✅ 設定読み込み成功: {len(config)}セクション")

    config_loader.apply_processing_options(config, {
        "threads": 8,
        "budgets": {"refine": "100", "bogus": 1},
        "skip_codes": True,
    })
    assert config['system']['max_workers'] == 8
    assert config['budgets']['refine'] == 100
    assert 'bogus' not in config['budgets']
    assert config['enable_step7'] is False
    assert config.get('enable_step6', True) is True
    print("   ✅ 処理オプション適用成功")


def test_02_config_loader_requires_design(tmp_path):
    config_loader = _load("config_loader", "02_config_loader.py")
    path = tmp_path / "config.yml"
    path.write_text("system:\n  log_level: INFO\n", encoding="utf-8")
    with pytest.raises(RuntimeError):
        config_loader.load_config(str(path))


def test_03_logging_setup():
    """ログ設定: ハンドラー1つとノード単位メッセージの抑制"""
    print("🧪 [03] ログ設定テスト")
    logging_setup = _load("logging_setup", "03_logging_setup.py")
    logging_setup.setup_logging({"system": {"log_level": "DEBUG"}})

    root = logging.getLogger()
    assert len(root.handlers) == 1
    assert root.level == logging.DEBUG

    suppress = logging_setup.SuppressFilter()
    chatter = logging.LogRecord("src.modules.step3.x", logging.DEBUG, "", 0, "ノード 10", None, None)
    milestone = logging.LogRecord("src.modules.step3.x", logging.INFO, "", 0, "ノード 10", None, None)
    assert suppress.filter(chatter) is False
    assert suppress.filter(milestone) is True

    formatter = logging_setup.HierarchicalFormatter()
    warning = logging.LogRecord("src.modules.step6.y", logging.WARNING, "", 0, "注意", None, None)
    assert formatter.format(warning) == "  🔍 ⚠️ 注意"
    print("   ✅ ログ設定実行成功")


def test_04_reference_loader():
    """参照テーブル: 作用表の期待値"""
    print("🧪 [04] 参照テーブルテスト")
    reference_loader = _load("reference_loader", "04_reference_loader.py")
    tables = reference_loader.load_reference_tables(str(project_root / "config.yml"))
    cells = reference_loader.expected_cells(tables)

    assert cells[(14, 4)] == {"orbit_matrices": 65205, "designs": "Y"}
    assert cells[(0, 16)] == {"orbit_matrices": 5, "designs": "N"}
    assert cells[(12, 4)]["orbit_matrices"] is None
    assert (20, 4) not in cells
    assert tables['classification']['classes'] == 3718
    print(f"   ✅ 参照テーブル読み込み成功: {len(cells)}セル")


def test_06_directory_manager(tmp_path):
    """ディレクトリ管理: セッションディレクトリの作成"""
    print("🧪 [06] ディレクトリ管理テスト")
    directory_manager = _load("directory_manager", "06_directory_manager.py")
    config = {"directories": {
        "output": str(tmp_path / "out"),
        "checkpoints": str(tmp_path / "ckpt"),
    }}
    manager = directory_manager.DirectoryManager(config)
    manager.setup_directories()
    session = manager.create_session_directories("run1")

    for key in ("feasibility", "orbit_matrices", "refined", "designs", "classes", "codes", "manifests"):
        assert os.path.isdir(session[key])
        assert session[key].startswith(session["session_root"])
    assert session["checkpoints"] == str(tmp_path / "ckpt" / "run1")
    assert os.path.isdir(session["checkpoints"])
    assert session["session_id"] == "run1"
    print("   ✅ セッションディレクトリ作成成功")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
