#!/usr/bin/env python3
"""
max-MCBI ソルバー - メインエントリポイント
複数グラフの最小サイクル基底の最大共通部分を求めるコマンドラインツール

終了コード: 0 成功 / 1 「なし」(XP判定が否、検証失敗) / 2 使い方・入力エラー / 3 予算超過
"""

import sys
import json
import logging
import argparse
import dataclasses
from pathlib import Path
from typing import List, Optional, TextIO

from core.candidates import candidates_list
from core.cycle_space import canonical_sorted, format_cycle
from core.errors import BudgetExceededError, MCBIError
from core.graph_core import (Instance, instance_stats, parse_frame_range, parse_host_graph,
                             parse_instance, parse_trajectory, serialize_instance)
from core.mcb_horton import minimum_cycle_basis
from core.oracle_bruteforce import all_mcbs
from core.report import SCHEMA_VERSION, SolveReport
from core.solver import (parse_solution, solve_auto, solve_bruteforce, solve_greedy, solve_k2,
                         solve_special, solve_xp, verify)
from utils.config import DEFAULT_CONFIG_FILE, METHODS, MCBIConfig, load_config, save_config
from utils.instances import (GROUP_PER_EDGE, GROUP_PER_MATCHING, HostGraph, ReductionSpec,
                             conn_gadget, cycle_host, path_host, random_host, random_trajectory,
                             stable_set_instance, star_host)

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

EXIT_OK = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

HOST_FAMILIES = {
    "path": path_host,
    "cycle": cycle_host,
    "star": star_host,
}


def build_parser() -> argparse.ArgumentParser:
    """サブコマンド付きの引数パーサー"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="ログを詳しく (-v: INFO, -vv: DEBUG)")
    common.add_argument("--config", help="設定ファイル (既定: mcbi_config.json)")
    common.add_argument("--max-dim", type=int, help="総当たりのサイクル空間次元の上限")
    common.add_argument("--max-candidates", type=int, help="総当たりの候補数の上限")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("instance", help="インスタンスファイル (--trajectory なら軌跡ファイル)")
    source.add_argument("--trajectory", action="store_true", help="入力を軌跡ファイルとして読む")
    source.add_argument("--frames", help="使用するフレーム範囲 'a..b' (1始まり、両端含む)")

    parser = argparse.ArgumentParser(
        prog="mcbi",
        description="複数グラフの最小サイクル基底の最大共通部分 (max-MCBI)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common, source], help="最大共通部分を求める")
    p.add_argument("--method", choices=METHODS, help="解法 (既定は設定の default_method)")
    p.add_argument("--K", type=int, help="判定問題の目標サイズ (xp / auto のみ)")
    p.add_argument("--json", action="store_true", help="構造化出力")

    p = sub.add_parser("verify", parents=[common, source], help="解が実行可能か検証する")
    p.add_argument("solution", help="解ファイル (1行1サイクル 'c u1 v1 ...')")

    p = sub.add_parser("mcb", parents=[common, source], help="各グラフの最小サイクル基底")
    p.add_argument("--graph", type=int, help="対象グラフ (1始まり、省略時は全グラフ)")
    p.add_argument("--all", action="store_true", help="全ての最小サイクル基底を列挙 (総当たり)")
    p.add_argument("--json", action="store_true", help="構造化出力")

    p = sub.add_parser("candidates", parents=[common, source], help="候補サイクルリスト L")
    p.add_argument("--json", action="store_true", help="構造化出力")

    p = sub.add_parser("stats", parents=[common, source], help="k, n, Δ, γ と各グラフの統計")
    p.add_argument("--json", action="store_true", help="構造化出力")

    gen = sub.add_parser("gen", help="インスタンス生成")
    gen_sub = gen.add_subparsers(dest="generator", required=True)

    g = gen_sub.add_parser("conn", parents=[common], help="CONN ガジェット (k = 1)")
    g.add_argument("--l", type=int, choices=(4, 5), default=4, help="サイクル長")

    g = gen_sub.add_parser("stableset", parents=[common], help="最大安定集合からの帰着インスタンス")
    g.add_argument("host", nargs="?", help="ホストグラフファイル ('host <n>' + 'e u v')")
    g.add_argument("--family", choices=sorted(HOST_FAMILIES) + ["random"],
                   help="ファイルの代わりに使うホストグラフの種類")
    g.add_argument("--n", type=int, default=5, help="ホストの頂点数 (--family 使用時)")
    g.add_argument("--p", type=float, default=0.5, help="ランダムホストの辺確率")
    g.add_argument("--seed", type=int, default=0, help="ランダムホストのシード")
    g.add_argument("--l", type=int, choices=(4, 5), default=4, help="サイクル長")
    g.add_argument("--grouping", choices=(GROUP_PER_EDGE, GROUP_PER_MATCHING),
                   default=GROUP_PER_EDGE, help="ホスト辺のグラフへの振り分け")
    g.add_argument("--group-matchings", dest="grouping", action="store_const", const=GROUP_PER_MATCHING,
                   help="--grouping per-matching と同じ (マッチングごとに1グラフ)")

    g = gen_sub.add_parser("random", parents=[common], help="ランダム軌跡 (設定の random_defaults が既定値)")
    g.add_argument("--n", type=int, help="頂点数")
    g.add_argument("--p", type=float, help="基本グラフの辺確率")
    g.add_argument("--k", "--frames", dest="frames", type=int, help="フレーム数 (グラフ数 k)")
    g.add_argument("--perturb", type=float, help="フレームごとの反転確率")
    g.add_argument("--seed", type=int, help="乱数シード")

    p = sub.add_parser("config", parents=[common], help="設定ファイルの操作")
    p.add_argument("--init", action="store_true", help="既定値で設定ファイルを作成")
    p.add_argument("--force", action="store_true", help="既存の設定ファイルを上書き")
    return parser


def _check_flags(parser: argparse.ArgumentParser, args: argparse.Namespace, config: MCBIConfig):
    """フラグ同士の整合性（不整合は使い方エラー）"""
    if getattr(args, "frames", None) is not None and not getattr(args, "trajectory", False) \
            and args.command != "gen":
        parser.error("--frames は --trajectory と一緒に指定してください")
    if args.command == "solve":
        args.method = args.method or config.default_method
        if args.K is not None:
            if args.method not in ("xp", "auto"):
                parser.error("--K は --method xp または auto でのみ使えます")
            if args.K < 0:
                parser.error("--K は非負です")
        elif args.method == "xp":
            parser.error("--method xp には --K が必要です")
    if args.command == "config" and not args.init:
        parser.error("config には --init を指定してください")


def _apply_overrides(args: argparse.Namespace, config: MCBIConfig) -> MCBIConfig:
    changes = {}
    if args.max_dim is not None:
        changes["max_cycle_space_dim"] = args.max_dim
    if args.max_candidates is not None:
        changes["max_candidates"] = args.max_candidates
    return dataclasses.replace(config, **changes) if changes else config


def _configure_logging(verbose: int, config: MCBIConfig):
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, config.log_level.upper(), logging.WARNING)
    logging.getLogger().setLevel(level)


def load_input(args: argparse.Namespace) -> Instance:
    """インスタンスまたは軌跡ファイルを読み込み"""
    with open(args.instance, 'r', encoding='utf-8') as f:
        if args.trajectory:
            frame_range = parse_frame_range(args.frames) if args.frames else None
            return parse_trajectory(f, frame_range)
        return parse_instance(f)


def _dump(data, out: TextIO):
    json.dump(data, out, ensure_ascii=False, indent=2, sort_keys=True)
    out.write("\n")


def _write_report(report: SolveReport, as_json: bool, out: TextIO):
    if as_json:
        _dump(report.to_dict(), out)
        return
    out.write(f"size {report.size}\n")
    out.write(f"method {report.method}\n")
    out.write(f"approximate {'yes' if report.approximate else 'no'}\n")
    if report.answer is not None:
        out.write(f"answer {'yes' if report.answer else 'no'}\n")
    for line in report.cycle_lines():
        out.write(line + "\n")


def cmd_solve(args: argparse.Namespace, config: MCBIConfig, out: TextIO) -> int:
    instance = load_input(args)
    method = args.method
    if method == "auto":
        report = solve_auto(instance, args.K)
    elif method == "k2":
        report = solve_k2(instance)
    elif method == "greedy":
        report = solve_greedy(instance)
    elif method == "xp":
        report = solve_xp(instance, args.K)
    elif method == "brute":
        report = solve_bruteforce(instance, config.max_candidates)
    else:
        report = solve_special(instance)
    _write_report(report, args.json, out)
    return EXIT_NO if report.answer is False else EXIT_OK


def cmd_verify(args: argparse.Namespace, config: MCBIConfig, out: TextIO) -> int:
    instance = load_input(args)
    with open(args.solution, 'r', encoding='utf-8') as f:
        cycles = parse_solution(instance.universe, f)
    result = verify(instance, cycles)
    if result:
        out.write(f"feasible yes ({len(cycles)} cycles)\n")
        return EXIT_OK
    out.write("feasible no\n")
    out.write(f"{result.reason}\n")
    return EXIT_NO


def cmd_mcb(args: argparse.Namespace, config: MCBIConfig, out: TextIO) -> int:
    instance = load_input(args)
    indices = range(instance.k)
    if args.graph is not None:
        if not 1 <= args.graph <= instance.k:
            raise MCBIError(f"--graph は 1..{instance.k} の範囲です: {args.graph}")
        indices = [args.graph - 1]
    universe = instance.universe
    entries = []
    for i in indices:
        graph = instance.graphs[i]
        if args.all:
            bases = [canonical_sorted(b) for b in all_mcbs(graph, config.budget())]
        else:
            bases = [canonical_sorted(minimum_cycle_basis(graph).basis)]
        for basis in bases:
            entries.append({
                "graph": instance.names[i],
                "size": len(basis),
                "weight": sum(c.weight for c in basis),
                "cycles": [format_cycle(universe, c) for c in basis],
            })
    if args.json:
        _dump({"schema": SCHEMA_VERSION, "bases": entries}, out)
        return EXIT_OK
    for entry in entries:
        out.write(f"graph {entry['graph']} size {entry['size']} weight {entry['weight']}\n")
        for line in entry["cycles"]:
            out.write(line + "\n")
    return EXIT_OK


def cmd_candidates(args: argparse.Namespace, config: MCBIConfig, out: TextIO) -> int:
    instance = load_input(args)
    candidates = candidates_list(instance)
    universe = instance.universe
    if args.json:
        _dump({
            "schema": SCHEMA_VERSION,
            "size": len(candidates),
            "generated": candidates.generated,
            "cycles": [{"cycle": format_cycle(universe, c), "origin": o.describe()}
                       for c, o in zip(candidates.cycles, candidates.provenance)],
        }, out)
        return EXIT_OK
    out.write(f"candidates {len(candidates)}\n")
    for c, origin in zip(candidates.cycles, candidates.provenance):
        out.write(f"{format_cycle(universe, c)}  # {origin.describe()}\n")
    return EXIT_OK


def cmd_stats(args: argparse.Namespace, config: MCBIConfig, out: TextIO) -> int:
    stats = instance_stats(load_input(args))
    if args.json:
        _dump({"schema": SCHEMA_VERSION, **stats.to_dict()}, out)
        return EXIT_OK
    out.write(f"k {stats.k}\nn {stats.n}\ndelta {stats.delta}\ngamma {stats.gamma}\n")
    for g in stats.per_graph:
        out.write(f"graph {g.name} edges {g.edges} nu {g.nu} gamma {g.gamma} "
                  f"delta {g.delta} components {g.components}\n")
    return EXIT_OK


def _host_from_args(args: argparse.Namespace, parser: argparse.ArgumentParser) -> HostGraph:
    if (args.host is None) == (args.family is None):
        parser.error("ホストグラフファイルか --family のどちらか一方を指定してください")
    if args.host is not None:
        with open(args.host, 'r', encoding='utf-8') as f:
            n, edges = parse_host_graph(f)
        return HostGraph.from_edges(n, edges)
    if args.family == "random":
        return random_host(args.n, args.p, args.seed)
    return HOST_FAMILIES[args.family](args.n)


def cmd_gen(args: argparse.Namespace, config: MCBIConfig, out: TextIO,
            parser: argparse.ArgumentParser) -> int:
    if args.generator == "conn":
        out.write(serialize_instance(conn_gadget(args.l)))
    elif args.generator == "stableset":
        spec = ReductionSpec(_host_from_args(args, parser), args.l, args.grouping)
        out.write(serialize_instance(stable_set_instance(spec)))
    else:
        defaults = config.random_defaults
        out.write(random_trajectory(
            n=args.n if args.n is not None else defaults["n"],
            p=args.p if args.p is not None else defaults["p"],
            frames=args.frames if args.frames is not None else defaults["k"],
            perturb=args.perturb if args.perturb is not None else defaults["perturb"],
            seed=args.seed if args.seed is not None else defaults["seed"],
        ))
    return EXIT_OK


def cmd_config(args: argparse.Namespace, config: MCBIConfig, out: TextIO) -> int:
    target = Path(args.config) if args.config else DEFAULT_CONFIG_FILE
    if target.exists() and not args.force:
        raise MCBIError(f"設定ファイルが既に存在します (--force で上書き): {target}")
    written = save_config(MCBIConfig(), str(target))
    out.write(f"wrote {written}\n")
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "mcb": cmd_mcb,
    "candidates": cmd_candidates,
    "stats": cmd_stats,
}


def run(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    コマンドを実行して終了コードを返す

    Args:
        argv: 引数リスト（Noneなら sys.argv[1:]）
        out: 出力先（Noneなら標準出力）

    Returns:
        終了コード
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "config":
            # 作成する設定ファイル自体は読まない
            config = MCBIConfig()
        else:
            config = _apply_overrides(args, load_config(args.config))
        _configure_logging(args.verbose, config)
        _check_flags(parser, args, config)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    except MCBIError as e:
        logger.error(f"設定エラー: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "gen":
            return cmd_gen(args, config, out, parser)
        if args.command == "config":
            return cmd_config(args, config, out)
        return COMMANDS[args.command](args, config, out)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    except BudgetExceededError as e:
        logger.error(f"予算超過のため中止: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (MCBIError, ValueError, OSError) as e:
        logger.error(f"実行エラー: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    """メイン実行関数"""
    logging.basicConfig(level=logging.WARNING, format=LOG_FORMAT, stream=sys.stderr)
    sys.exit(run())


if __name__ == "__main__":
    main()
