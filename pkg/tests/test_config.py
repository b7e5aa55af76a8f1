#!/usr/bin/env python3
"""
設定ファイルと環境変数による上書きのテスト
"""

import json

import pytest

from core.errors import ConfigError
from core.oracle_bruteforce import EnumerationBudget
from utils.config import DEFAULT_CONFIG_FILE, MCBIConfig, load_config, save_config


def test_default_config_file_matches_defaults():
    assert DEFAULT_CONFIG_FILE.exists()
    assert load_config(environ={}) == MCBIConfig()


def test_load_config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"max_candidates": 12, "default_method": "greedy"}), encoding="utf-8")
    config = load_config(str(path), environ={})
    assert config.max_candidates == 12
    assert config.default_method == "greedy"
    assert config.max_cycle_space_dim == 5


def test_unknown_keys_are_ignored(tmp_path, caplog):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"max_dim": 3}), encoding="utf-8")
    config = load_config(str(path), environ={})
    assert config == MCBIConfig()
    assert "max_dim" in caplog.text


def test_missing_explicit_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"), environ={})


def test_broken_json(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(str(path), environ={})


def test_environment_overrides(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"max_cycle_space_dim": 4}), encoding="utf-8")
    config = load_config(str(path), environ={
        "MCBI_BUDGET_MAX_DIM": "8",
        "MCBI_BUDGET_MAX_CANDIDATES": "30",
        "MCBI_BUDGET_MAX_HOST_VERTICES": "6",
    })
    assert config.budget() == EnumerationBudget(max_dim=8, max_candidates=30, max_host_vertices=6)


def test_invalid_environment_value():
    with pytest.raises(ConfigError):
        load_config(environ={"MCBI_BUDGET_MAX_DIM": "many"})


@pytest.mark.parametrize("values", [
    {"max_candidates": -1},
    {"max_cycle_space_dim": "5"},
    {"max_host_vertices": True},
    {"default_method": "fastest"},
])
def test_invalid_values(values):
    with pytest.raises(ConfigError):
        MCBIConfig(**values)


def test_save_and_load(tmp_path):
    path = tmp_path / "saved.json"
    config = MCBIConfig(max_candidates=15, log_level="INFO")
    assert save_config(config, str(path)) == path
    assert load_config(str(path), environ={}) == config
