"""
型変換ユーティリティモジュール
設定ファイル・CLI引数の値を探索パラメータ用の型に解釈するユーティリティを提供
"""

from typing import Optional, Tuple


def to_bool(v) -> bool:
    """
    任意の値をブール値に変換

    Args:
        v: 変換対象の値

    Returns:
        bool: 変換されたブール値
    """
    if isinstance(v, bool):
        return v
    if v is None:
        return False
    if isinstance(v, (int, float)):
        return v != 0
    if isinstance(v, str):
        return v.strip().lower() in ("true", "1", "yes", "on")
    return False


def to_int(v, default: Optional[int] = None) -> Optional[int]:
    """
    任意の値を整数に変換

    Args:
        v: 変換対象の値
        default: 変換失敗時のデフォルト値

    Returns:
        Optional[int]: 変換された整数値またはデフォルト値
    """
    if v is None:
        return default
    if isinstance(v, bool):
        return 1 if v else 0
    if isinstance(v, int):
        return v
    try:
        if isinstance(v, float):
            return int(v)
        s = str(v).strip()
        if s == "":
            return default
        return int(float(s))
    except (TypeError, ValueError):
        return default


def to_budget(v) -> Optional[int]:
    """
    探索ノード予算を解釈（None / "unlimited" / 負値は無制限）

    Args:
        v: 変換対象の値

    Returns:
        Optional[int]: ノード予算（Noneは無制限）
    """
    if v is None:
        return None
    if isinstance(v, str) and v.strip().lower() in ("", "none", "null", "unlimited", "inf"):
        return None
    budget = to_int(v)
    if budget is None or budget < 0:
        return None
    return budget


def to_int_tuple(v) -> Tuple[int, ...]:
    """
    "2,1,4,9" 形式の文字列や整数リストを整数タプルに変換

    Args:
        v: 変換対象の値

    Returns:
        Tuple[int, ...]: 整数タプル

    Raises:
        ValueError: 整数として解釈できない要素がある場合
    """
    if v is None:
        return ()
    if isinstance(v, str):
        parts = [p for p in v.replace(" ", "").split(",") if p != ""]
    else:
        parts = list(v)
    values = []
    for part in parts:
        value = to_int(part)
        if value is None:
            raise ValueError(f"整数として解釈できません: {part!r}")
        values.append(value)
    return tuple(values)
