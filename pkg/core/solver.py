#!/usr/bin/env python3
"""
制限マトロイド M(G_i)|L 上の汎用ソルバー
k = 2 の厳密なマトロイド交差、1/k 近似の貪欲法、K 固定の XP 列挙、
総当たり、および γ/Δ/k による自動振り分け
"""

import time
import logging
from collections import deque
from dataclasses import dataclass, replace
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from core.candidates import CandidateList, candidates_list
from core.cycle_space import Cycle, is_cycle, parse_cycle
from core.errors import BudgetExceededError, CycleFormatError, PreconditionError
from core.graph_core import EdgeUniverse, Graph, Instance, instance_stats
from core.mcb_horton import HortonOracle, oracle_for
from core.oracle_bruteforce import DEFAULT_BUDGET
from core.report import SolveReport, build_report

logger = logging.getLogger(__name__)


class RestrictedMatroid:
    """M(G)|L: 台集合 L、独立性は Horton オラクル（1回の求解内でメモ化）"""

    def __init__(self, graph: Graph, ground: CandidateList, oracle: Optional[HortonOracle] = None):
        self.graph = graph
        self.ground = ground
        self.oracle = oracle or oracle_for(graph)
        self._memo: Dict[FrozenSet[int], bool] = {}
        self.calls = 0

    def is_independent(self, cycles: Sequence[Cycle]) -> bool:
        key = frozenset(c.bits for c in cycles)
        if key not in self._memo:
            self.calls += 1
            self._memo[key] = self.oracle.is_independent(cycles)
        return self._memo[key]


def _matroids(instance: Instance, ground: CandidateList) -> List[RestrictedMatroid]:
    return [RestrictedMatroid(g, ground) for g in instance.graphs]


def _calls(matroids: Sequence[RestrictedMatroid]) -> int:
    return sum(m.calls for m in matroids)


def _common(matroids: Sequence[RestrictedMatroid], cycles: Sequence[Cycle]) -> bool:
    return all(m.is_independent(cycles) for m in matroids)


def solve_k2(instance: Instance) -> SolveReport:
    """
    k = 2 の最大共通独立集合（交換グラフ上の最短増加路）

    弧 x→y: B - x + y が M1 で独立、弧 y→x: B - x + y が M2 で独立。
    始点は B + y が M1 で独立な y、終点は B + y が M2 で独立な y。
    """
    if instance.k != 2:
        raise PreconditionError(f"solve_k2 は k = 2 のみ対応です (k = {instance.k})")
    started = time.perf_counter()
    ground = candidates_list(instance)
    m1, m2 = _matroids(instance, ground)
    current: List[Cycle] = []
    rounds = 0

    while True:
        inside = [c for c in ground if c in current]
        outside = [c for c in ground if c not in current]
        sources = [y for y in outside if m1.is_independent(current + [y])]
        sinks = {y.bits for y in outside if m2.is_independent(current + [y])}

        arcs: Dict[int, List[Cycle]] = {c.bits: [] for c in ground}
        for x in inside:
            rest = [c for c in current if c != x]
            for y in outside:
                if m1.is_independent(rest + [y]):
                    arcs[x.bits].append(y)
                if m2.is_independent(rest + [y]):
                    arcs[y.bits].append(x)

        path = _shortest_path(sources, sinks, arcs)
        if path is None:
            break
        in_path = {c.bits for c in path}
        current = [c for c in current if c.bits not in in_path]
        current.extend(c for c in path if c.bits not in {x.bits for x in inside})
        current = [c for c in ground if c in current]
        rounds += 1
        logger.debug(f"増加 {rounds}回目: |B|={len(current)}, 経路長={len(path)}")

    logger.info(f"k=2 マトロイド交差: {rounds}回の増加で |B|={len(current)}")
    return build_report(instance, current, "k2", candidate_count=len(ground),
                        oracle_calls=_calls((m1, m2)), started=started)


def _shortest_path(sources: List[Cycle], sinks: set, arcs: Dict[int, List[Cycle]]) -> Optional[List[Cycle]]:
    """始点集合から終点集合への BFS 最短路（正準順でタイブレーク）"""
    parent: Dict[int, Optional[Cycle]] = {}
    queue = deque()
    for s in sources:
        parent[s.bits] = None
        queue.append(s)
    while queue:
        node = queue.popleft()
        if node.bits in sinks:
            path = [node]
            while parent[path[-1].bits] is not None:
                path.append(parent[path[-1].bits])
            return path[::-1]
        for nxt in arcs[node.bits]:
            if nxt.bits not in parent:
                parent[nxt.bits] = node
                queue.append(nxt)
    return None


def solve_greedy(instance: Instance) -> SolveReport:
    """L を正準順に走査し、全グラフで独立を保てる限り追加（極大解、1/k 近似）"""
    started = time.perf_counter()
    ground = candidates_list(instance)
    matroids = _matroids(instance, ground)
    chosen: List[Cycle] = []
    for c in ground:
        if _common(matroids, chosen + [c]):
            chosen.append(c)
    approximate = instance.k > 1
    if approximate:
        logger.warning(f"貪欲法の結果は近似です (k={instance.k}, |B|={len(chosen)})")
    return build_report(instance, chosen, "greedy", approximate=approximate,
                        candidate_count=len(ground), oracle_calls=_calls(matroids), started=started)


def first_feasible_subset(ground: Sequence[Cycle], size: int,
                          feasible: Callable[[List[Cycle]], bool]) -> Optional[List[Cycle]]:
    """
    正準な組合せ順で最初の実行可能な size 部分集合

    独立性は下に閉じているので、実行不可能な接頭辞は枝刈りしても列挙順は変わらない。
    """
    chosen: List[Cycle] = []

    def search(start: int) -> bool:
        if len(chosen) == size:
            return True
        for i in range(start, len(ground) - (size - len(chosen)) + 1):
            chosen.append(ground[i])
            if feasible(chosen) and search(i + 1):
                return True
            chosen.pop()
        return False

    return list(chosen) if search(0) else None


def solve_xp(instance: Instance, K: int) -> SolveReport:
    """
    サイズ K の部分集合を列挙して全マトロイドで独立なものを探す

    Returns:
        answer=True なら solution が証拠、False なら「なし」
    """
    if K < 0:
        raise ValueError(f"K は非負です (K = {K})")
    started = time.perf_counter()
    ground = candidates_list(instance)
    matroids = _matroids(instance, ground)
    if K > len(ground):
        logger.info(f"K={K} > |L|={len(ground)} のため即座に「なし」")
        witness = None
    else:
        witness = first_feasible_subset(list(ground), K, lambda s: _common(matroids, s))
    return build_report(instance, witness or [], "xp", K=K, answer=witness is not None,
                        candidate_count=len(ground), oracle_calls=_calls(matroids), started=started)


def solve_bruteforce(instance: Instance, max_candidates: int = DEFAULT_BUDGET.max_candidates) -> SolveReport:
    """サイズの大きい順に全部分集合を調べる厳密解（小さい入力用の基準）"""
    started = time.perf_counter()
    ground = candidates_list(instance)
    if len(ground) > max_candidates:
        raise BudgetExceededError("max_candidates", max_candidates, len(ground))
    matroids = _matroids(instance, ground)
    stats = instance_stats(instance)
    upper = min([len(ground)] + [s.nu for s in stats.per_graph])
    best: List[Cycle] = []
    for size in range(upper, -1, -1):
        found = first_feasible_subset(list(ground), size, lambda s: _common(matroids, s))
        if found is not None:
            best = found
            break
    return build_report(instance, best, "brute", candidate_count=len(ground),
                        oracle_calls=_calls(matroids), started=started, stats=stats)


def _component_cycles(graph: Graph) -> List[int]:
    """Δ ≤ 2 のグラフの、サイクルになっている連結成分の辺ビット列"""
    result = []
    for comp in graph.components:
        members = set(comp)
        bits = 0
        for eid in graph.edge_ids:
            u, v = graph.universe.edges[eid]
            if u in members:
                bits |= 1 << eid
        if bits and bits.bit_count() == len(comp):
            result.append(bits)
    return result


def solve_trivial_delta2(instance: Instance) -> SolveReport:
    """Δ ≤ 2: 各グラフは互いに素なサイクルの集まりなので、全グラフ共通の成分サイクルが解"""
    started = time.perf_counter()
    for name, g in zip(instance.names, instance.graphs):
        if g.max_degree() > 2:
            raise PreconditionError(f"グラフ {name} の最大次数が 2 を超えています ({g.max_degree()})")
    common = set(_component_cycles(instance.graphs[0]))
    for g in instance.graphs[1:]:
        common &= set(_component_cycles(g))
    return build_report(instance, [Cycle(b) for b in common], "trivial", started=started)


def solve_auto(instance: Instance, K: Optional[int] = None) -> SolveReport:
    """
    パラメータによる振り分け
    Δ ≤ 2 → 自明、γ ≤ 3 → 三角形、γ ≤ 4 かつ Δ ≤ 3 → 四角形、k = 2 → 交差、
    K 指定 → XP、それ以外 → 貪欲（k ≥ 2 なら近似フラグ付き）

    K を与えた場合、厳密解の経路でも K と answer (|B| ≥ K) を埋めて返す。
    """
    from core.special_cases import solve_gamma3, solve_gamma4_delta3

    stats = instance_stats(instance)
    logger.info(f"自動振り分け: k={stats.k}, Δ={stats.delta}, γ={stats.gamma}, K={K}")
    if stats.delta <= 2:
        report = solve_trivial_delta2(instance)
    elif stats.gamma <= 3:
        report = solve_gamma3(instance)
    elif stats.gamma <= 4 and stats.delta <= 3:
        report = solve_gamma4_delta3(instance)
    elif instance.k == 2:
        report = solve_k2(instance)
    elif K is not None:
        return solve_xp(instance, K)
    else:
        return solve_greedy(instance)
    if K is not None:
        report = replace(report, K=K, answer=report.size >= K)
    return report


def solve_special(instance: Instance) -> SolveReport:
    """γ/Δ に応じて多項式時間の特殊ケースソルバーを選択"""
    from core.special_cases import solve_gamma3, solve_gamma4_delta3

    stats = instance_stats(instance)
    if stats.gamma <= 3:
        return solve_gamma3(instance)
    if stats.gamma <= 4 and stats.delta <= 3:
        return solve_gamma4_delta3(instance)
    raise PreconditionError(
        f"特殊ケースの条件 (γ ≤ 3 または γ ≤ 4 かつ Δ ≤ 3) を満たしません (γ={stats.gamma}, Δ={stats.delta})")


@dataclass(frozen=True)
class Decision:
    """MCBI 判定問題の答え"""
    answer: bool
    witness: Tuple[Cycle, ...]
    method: str


def decide(instance: Instance, K: int) -> Decision:
    """サイズ K 以上の実行可能解があるか（厳密）"""
    report = solve_auto(instance)
    if report.size >= K:
        return Decision(True, report.solution[:K], report.method)
    if not report.approximate:
        return Decision(False, (), report.method)
    xp = solve_xp(instance, K)
    return Decision(bool(xp.answer), xp.solution, "xp")


@dataclass(frozen=True)
class Verification:
    """検証結果と最初に失敗したグラフの診断"""
    feasible: bool
    failing_graph: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.feasible


def verify(instance: Instance, cycles: Sequence[Cycle]) -> Verification:
    """
    全サイクルが各 G_i に含まれ、各 G_i で MCB に拡張可能か

    Raises:
        CycleFormatError: ゼロや非サイクル
    """
    universe = instance.universe
    for c in cycles:
        if c.is_zero() or not is_cycle(universe, c.bits):
            raise CycleFormatError("解にサイクルでないベクトルが含まれています")
    if len({c.bits for c in cycles}) != len(cycles):
        return Verification(False, None, "同じサイクルが重複しています")
    for i, (name, g) in enumerate(zip(instance.names, instance.graphs)):
        missing = [c for c in cycles if not g.contains(c.bits)]
        if missing:
            return Verification(False, i, f"{name}: サイクルの辺がグラフにありません")
        if not oracle_for(g).is_independent(cycles):
            return Verification(False, i, f"{name}: どの最小サイクル基底にも含まれません")
    return Verification(True)


def parse_solution(universe: EdgeUniverse, source) -> List[Cycle]:
    """解ファイル（1行1サイクル 'c …'、'#' コメント可）を読み込み"""
    if isinstance(source, str):
        source = source.splitlines()
    cycles = []
    for raw in source:
        text = raw.split("#", 1)[0].strip()
        if text:
            cycles.append(parse_cycle(universe, text))
    return cycles
