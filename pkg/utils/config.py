#!/usr/bin/env python3
"""
設定ファイル (mcbi_config.json) の読み書き
環境変数 MCBI_BUDGET_* は設定ファイルより優先される
"""

import os
import json
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Optional

from core.errors import ConfigError
from core.oracle_bruteforce import EnumerationBudget

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = Path(__file__).resolve().parent.parent / "mcbi_config.json"

ENV_OVERRIDES = {
    "MCBI_BUDGET_MAX_DIM": "max_cycle_space_dim",
    "MCBI_BUDGET_MAX_CANDIDATES": "max_candidates",
    "MCBI_BUDGET_MAX_HOST_VERTICES": "max_host_vertices",
}

METHODS = ("auto", "k2", "greedy", "xp", "brute", "special")


@dataclass
class MCBIConfig:
    """実行設定"""
    max_cycle_space_dim: int = 5
    max_candidates: int = 20
    max_host_vertices: int = 7
    default_method: str = "auto"
    log_level: str = "WARNING"
    random_defaults: Dict[str, Any] = field(default_factory=lambda: {
        "n": 8, "p": 0.4, "k": 3, "perturb": 0.1, "seed": 0,
    })

    def __post_init__(self):
        for name in ("max_cycle_space_dim", "max_candidates", "max_host_vertices"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise ConfigError(f"{name} は非負整数です: {value!r}")
        if self.default_method not in METHODS:
            raise ConfigError(f"default_method は {METHODS} のいずれかです: {self.default_method!r}")

    def budget(self) -> EnumerationBudget:
        return EnumerationBudget(
            max_dim=self.max_cycle_space_dim,
            max_candidates=self.max_candidates,
            max_host_vertices=self.max_host_vertices,
        )


def load_config(config_file: Optional[str] = None, environ: Optional[Dict[str, str]] = None) -> MCBIConfig:
    """
    設定ファイルを読み込み、環境変数で上書き

    Args:
        config_file: 設定ファイルのパス（Noneなら既定ファイル）
        environ: 環境変数（テスト用、Noneなら os.environ）

    Returns:
        MCBIConfig（ファイルがなければ既定値）
    """
    path = Path(config_file) if config_file else DEFAULT_CONFIG_FILE
    values: Dict[str, Any] = {}
    if path.exists():
        try:
            with open(path, 'r', encoding='utf-8') as f:
                values = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"設定ファイルのJSONが不正です: {path}: {e}") from e
        logger.info(f"設定ファイル読み込み完了: {path}")
    elif config_file:
        raise ConfigError(f"設定ファイルが見つかりません: {path}")
    else:
        logger.warning(f"設定ファイルが見つかりません。既定値を使用します: {path}")

    known = {f.name for f in fields(MCBIConfig)}
    for key in sorted(set(values) - known):
        logger.warning(f"不明な設定キーを無視します: {key}")
    values = {k: v for k, v in values.items() if k in known}

    environ = os.environ if environ is None else environ
    for var, key in ENV_OVERRIDES.items():
        if var in environ:
            try:
                values[key] = int(environ[var])
            except ValueError:
                raise ConfigError(f"環境変数 {var} は整数です: {environ[var]!r}") from None
            logger.info(f"環境変数で上書き: {key} = {values[key]}")
    return MCBIConfig(**values)


def save_config(config: MCBIConfig, config_file: Optional[str] = None) -> Path:
    """設定をファイルに保存"""
    path = Path(config_file) if config_file else DEFAULT_CONFIG_FILE
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(asdict(config), f, ensure_ascii=False, indent=2)
        f.write("\n")
    logger.info(f"設定ファイルを保存しました: {path}")
    return path
