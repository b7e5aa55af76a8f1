#!/usr/bin/env python3
"""
例外定義
ライブラリ側は例外を送出するだけで、終了コードへの変換はCLIが行う
"""

from typing import Optional


class MCBIError(Exception):
    """max-MCBI関連の基底例外"""


class InstanceParseError(MCBIError):
    """インスタンス/軌跡/ホストファイルの解析エラー"""

    def __init__(self, message: str, line_no: Optional[int] = None, kind: str = "syntax"):
        self.line_no = line_no
        self.kind = kind
        if line_no is not None:
            message = f"{line_no}行目: {message}"
        super().__init__(message)


class FrameRangeError(InstanceParseError):
    """フレーム範囲の指定エラー"""

    def __init__(self, message: str):
        super().__init__(message, line_no=None, kind="frame_range")


class CycleFormatError(MCBIError):
    """サイクルとして不正なベクトル・テキスト"""


class NotSpannedError(MCBIError):
    """基底で張られないサイクルに対する係数問い合わせ"""


class DependentSetError(MCBIError):
    """どのMCBにも拡張できないサイクル集合"""


class PreconditionError(MCBIError):
    """ソルバーの前提条件違反（k, γ, Δ）"""


class BudgetExceededError(MCBIError):
    """総当たり計算の予算超過（切り捨てはせず拒否する）"""

    def __init__(self, budget_name: str, limit: int, actual: int):
        self.budget_name = budget_name
        self.limit = limit
        self.actual = actual
        super().__init__(f"予算超過: {budget_name} = {actual} (上限 {limit})")


class ConfigError(MCBIError):
    """設定値の不正"""
