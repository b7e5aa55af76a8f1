#!/usr/bin/env python3
"""
コマンドライン (mcbi_main.run) のテスト
"""

import io
import json

import pytest

from core.graph_core import parse_instance, parse_trajectory, serialize_instance, serialize_trajectory
from mcbi_main import run
from utils.instances import ReductionSpec, path_host, stable_set_instance


def invoke(*argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def p3_file(tmp_path, p3_instance):
    path = tmp_path / "p3.mcbi"
    path.write_text(serialize_instance(p3_instance), encoding="utf-8")
    return path


@pytest.fixture
def p4_file(tmp_path):
    path = tmp_path / "p4.mcbi"
    path.write_text(serialize_instance(stable_set_instance(ReductionSpec(path_host(4), 4))),
                    encoding="utf-8")
    return path


def test_solve_xp_yes(p3_file):
    code, out = invoke("solve", p3_file, "--method", "xp", "--K", 2)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "size 2"
    assert "method xp" in lines
    assert "answer yes" in lines
    assert sum(line.startswith("c ") for line in lines) == 2


def test_solve_xp_no(p3_file):
    code, out = invoke("solve", p3_file, "--method", "xp", "--K", 3)
    assert code == 1
    assert "answer no" in out.splitlines()


def test_solve_auto_with_k(p3_file):
    code, out = invoke("solve", p3_file, "--K", 3)
    assert code == 1
    assert "method k2" in out


def test_k2_on_three_graphs_is_usage_error(p4_file, capsys):
    code, out = invoke("solve", p4_file, "--method", "k2")
    assert code == 2
    assert out == ""
    assert "k = 3" in capsys.readouterr().err


def test_k_requires_xp_or_auto(p3_file):
    code, _ = invoke("solve", p3_file, "--method", "greedy", "--K", 2)
    assert code == 2


def test_xp_requires_k(p3_file):
    code, _ = invoke("solve", p3_file, "--method", "xp")
    assert code == 2


def test_frames_require_trajectory(p3_file):
    code, _ = invoke("solve", p3_file, "--frames", "1..2")
    assert code == 2


def test_unknown_flag_is_usage_error(p3_file):
    code, _ = invoke("solve", p3_file, "--fast")
    assert code == 2


def test_missing_file(tmp_path):
    code, _ = invoke("solve", tmp_path / "missing.mcbi")
    assert code == 2


def test_budget_refusal(p3_file):
    code, _ = invoke("solve", p3_file, "--method", "brute", "--max-candidates", 1)
    assert code == 3


def test_budget_from_environment(p3_file, monkeypatch):
    monkeypatch.setenv("MCBI_BUDGET_MAX_CANDIDATES", "2")
    code, _ = invoke("solve", p3_file, "--method", "brute")
    assert code == 3


def test_json_output_is_deterministic(p3_file):
    code1, out1 = invoke("solve", p3_file, "--json")
    code2, out2 = invoke("solve", p3_file, "--json")
    assert code1 == code2 == 0
    assert out1 == out2
    data = json.loads(out1)
    assert data["schema"] == 1
    assert data["size"] == 2
    assert data["method"] == "k2"
    assert len(data["witnesses"]) == 2


def test_solution_reverifies(p3_file, tmp_path):
    _, out = invoke("solve", p3_file)
    solution = tmp_path / "sol.txt"
    solution.write_text("\n".join(line for line in out.splitlines() if line.startswith("c ")) + "\n",
                        encoding="utf-8")
    code, text = invoke("verify", p3_file, solution)
    assert code == 0
    assert text.startswith("feasible yes")


def test_verify_infeasible_names_graph(p3_file, tmp_path):
    solution = tmp_path / "bad.txt"
    # 隣接するホスト頂点 1, 2 のサイクル
    solution.write_text("c 1 2 1 4 2 3 3 4\nc 5 6 5 8 6 7 7 8\n", encoding="utf-8")
    code, text = invoke("verify", p3_file, solution)
    assert code == 1
    assert "G_(1,2)" in text


def test_verify_rejects_malformed_solution(p3_file, tmp_path):
    solution = tmp_path / "bad.txt"
    solution.write_text("c 1 2 2 3\n", encoding="utf-8")
    code, _ = invoke("verify", p3_file, solution)
    assert code == 2


def test_stats(p3_file):
    code, out = invoke("stats", p3_file)
    assert code == 0
    lines = out.splitlines()
    assert lines[:4] == ["k 2", "n 12", "delta 4", "gamma 4"]
    assert lines[4].startswith("graph G_(1,2) edges 20 nu 10")


def test_mcb_single_graph(p3_file):
    code, out = invoke("mcb", p3_file, "--graph", 2)
    assert code == 0
    assert out.splitlines()[0] == "graph G_(2,3) size 10 weight 32"


def test_mcb_graph_out_of_range(p3_file):
    code, _ = invoke("mcb", p3_file, "--graph", 3)
    assert code == 2


def test_mcb_all_on_gadget(tmp_path):
    code, text = invoke("gen", "conn", "--l", 5)
    assert code == 0
    path = tmp_path / "conn5.mcbi"
    path.write_text(text, encoding="utf-8")
    code, out = invoke("mcb", path, "--all", "--max-dim", 6, "--json")
    assert code == 0
    bases = json.loads(out)["bases"]
    assert len(bases) == 2
    assert {b["weight"] for b in bases} == {25}
    code, _ = invoke("mcb", path, "--all")
    assert code == 3


def test_candidates(p3_file):
    code, out = invoke("candidates", p3_file)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "candidates 3"
    assert all("#" in line for line in lines[1:])


def test_gen_stableset_family():
    code, text = invoke("gen", "stableset", "--family", "path", "--n", 3)
    assert code == 0
    inst = parse_instance(text)
    assert inst.k == 2
    assert inst.names == ("G_(1,2)", "G_(2,3)")


def test_gen_stableset_from_host_file(tmp_path):
    host = tmp_path / "host.txt"
    host.write_text("host 3\ne 1 2\ne 2 3\ne 1 3\n", encoding="utf-8")
    code, text = invoke("gen", "stableset", host, "--grouping", "per-matching", "--l", 5)
    assert code == 0
    assert parse_instance(text).k == 3


def test_gen_stableset_group_matchings_flag(tmp_path):
    host = tmp_path / "host.txt"
    host.write_text("host 3\ne 1 2\ne 2 3\ne 1 3\n", encoding="utf-8")
    code, text = invoke("gen", "stableset", host, "--l", 4, "--group-matchings")
    assert code == 0
    inst = parse_instance(text)
    assert inst.k == 3
    assert inst.names == ("M1", "M2", "M3")
    code, text = invoke("gen", "stableset", host, "--l", 4)
    assert parse_instance(text).names == ("G_(1,2)", "G_(1,3)", "G_(2,3)")


def test_gen_random_with_k():
    code, text = invoke("gen", "random", "--n", 5, "--p", 0.5, "--k", 3, "--perturb", 0.1, "--seed", 1)
    assert code == 0
    assert parse_trajectory(text).k == 3
    _, same = invoke("gen", "random", "--n", 5, "--p", 0.5, "--frames", 3, "--perturb", 0.1, "--seed", 1)
    assert same == text


def test_gen_stableset_needs_one_host_source(tmp_path):
    code, _ = invoke("gen", "stableset")
    assert code == 2


def test_gen_random_trajectory_and_frames(tmp_path):
    code, text = invoke("gen", "random", "--n", 6, "--frames", 4, "--seed", 1)
    assert code == 0
    assert parse_trajectory(text).k == 4
    path = tmp_path / "traj.txt"
    path.write_text(text, encoding="utf-8")
    code, out = invoke("stats", path, "--trajectory", "--frames", "2..3")
    assert code == 0
    assert out.splitlines()[0] == "k 2"
    code, _ = invoke("stats", path, "--trajectory", "--frames", "3..9")
    assert code == 2


def test_trajectory_solve(tmp_path, p3_instance):
    path = tmp_path / "traj.txt"
    path.write_text(serialize_trajectory(p3_instance), encoding="utf-8")
    code, out = invoke("solve", path, "--trajectory")
    assert code == 0
    assert out.splitlines()[0] == "size 2"


def test_config_init(tmp_path):
    path = tmp_path / "mcbi_config.json"
    code, out = invoke("config", "--init", "--config", path)
    assert code == 0
    assert json.loads(path.read_text(encoding="utf-8"))["max_candidates"] == 20
    code, _ = invoke("config", "--init", "--config", path)
    assert code == 2
    code, _ = invoke("config", "--init", "--force", "--config", path)
    assert code == 0


def test_config_file_sets_default_method(tmp_path, p3_file):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"default_method": "greedy"}), encoding="utf-8")
    code, out = invoke("solve", p3_file, "--config", path)
    assert code == 0
    assert "method greedy" in out
    assert "approximate yes" in out
