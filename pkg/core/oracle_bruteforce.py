#!/usr/bin/env python3
"""
小さな入力に対する総当たりの基準計算
サイクル空間の全列挙、全MCBの列挙、全空間上の最適値、最大安定集合
予算を超えたら切り捨てずに拒否する
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.cycle_space import Cycle, GF2Basis, canonical_sorted
from core.errors import BudgetExceededError
from core.graph_core import Edge, Graph, Instance, intersection_graph
from core.mcb_horton import ShortestPathIndex, oracle_for

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnumerationBudget:
    """総当たりの上限（設定で変更可能）"""
    max_dim: int = 5
    max_candidates: int = 20
    max_host_vertices: int = 7

    def check(self, name: str, actual: int):
        limit = getattr(self, name)
        if actual > limit:
            raise BudgetExceededError(name, limit, actual)


DEFAULT_BUDGET = EnumerationBudget()


def fundamental_cycles(graph: Graph) -> List[Cycle]:
    """BFS全域森に対する基本サイクル（非木辺1本につき1つ）"""
    spi = ShortestPathIndex(graph)
    universe = graph.universe
    tree = 0
    roots = {}
    for comp in graph.components:
        root = comp[0]
        for v in comp:
            roots[v] = root
            if v != root:
                tree |= universe.edge_bit(v, int(spi.parent[root, v]))
    cycles = []
    for eid in graph.edge_ids:
        if (tree >> eid) & 1:
            continue
        x, y = universe.edges[eid]
        root = roots[x]
        cycles.append(Cycle(spi.path_edges(root, x) ^ spi.path_edges(root, y) ^ (1 << eid)))
    return cycles


def all_cycles(graph: Graph, budget: EnumerationBudget = DEFAULT_BUDGET) -> List[Cycle]:
    """サイクル空間の非ゼロ元すべて（2^ν - 1 個、正準順）"""
    nu = graph.cyclomatic_number()
    budget.check("max_dim", nu)
    if nu == 0:
        return []
    fundamental = fundamental_cycles(graph)
    # 係数ベクトル (2^ν - 1, ν) と基本サイクルの XOR 結合
    coeffs = (np.arange(1, 1 << nu)[:, None] >> np.arange(nu)) & 1
    cycles = []
    for row in coeffs:
        bits = 0
        for j in np.flatnonzero(row):
            bits ^= fundamental[j].bits
        cycles.append(Cycle(bits))
    return canonical_sorted(cycles)


def _min_basis_weight(cycles: Sequence[Cycle], nu: int) -> int:
    """重み順の貪欲法で最小基底の重み（線形マトロイド上の貪欲は最適）"""
    basis = GF2Basis()
    total = 0
    for c in cycles:
        if basis.rank == nu:
            break
        if basis.add(c):
            total += c.weight
    return total


def all_mcbs(graph: Graph, budget: EnumerationBudget = DEFAULT_BUDGET) -> List[Tuple[Cycle, ...]]:
    """
    全ての最小サイクル基底

    重み最小値を先に求め、正準順の ν 部分集合を重みの下界で枝刈りしながら列挙する
    """
    cycles = all_cycles(graph, budget)
    nu = graph.cyclomatic_number()
    if nu == 0:
        return [()]
    target = _min_basis_weight(cycles, nu)
    found: List[Tuple[Cycle, ...]] = []

    def search(start: int, basis: GF2Basis, weight: int):
        slots = nu - basis.rank
        if slots == 0:
            if weight == target:
                found.append(tuple(basis.members))
            return
        for i in range(start, len(cycles) - slots + 1):
            c = cycles[i]
            if weight + slots * c.weight > target:
                break
            if basis.spans(c):
                continue
            nxt = basis.copy()
            nxt.add(c)
            search(i + 1, nxt, weight + c.weight)

    search(0, GF2Basis(), 0)
    logger.debug(f"全MCB列挙: {len(found)}個 (ν={nu}, 重み={target})")
    return found


@dataclass(frozen=True)
class OptResult:
    size: int
    witness: Tuple[Cycle, ...]


def opt_over_full_space(instance: Instance, budget: EnumerationBudget = DEFAULT_BUDGET) -> OptResult:
    """共通部分グラフのサイクル空間全体から選んだときの最適値"""
    cycles = all_cycles(intersection_graph(instance), budget)
    oracles = [oracle_for(g) for g in instance.graphs]
    upper = min([len(cycles)] + [g.cyclomatic_number() for g in instance.graphs])

    def feasible(subset) -> bool:
        return all(o.is_independent(subset) for o in oracles)

    for size in range(upper, -1, -1):
        witness = _first_subset(cycles, size, feasible)
        if witness is not None:
            return OptResult(size, tuple(witness))
    return OptResult(0, ())


def _first_subset(ground: Sequence[Cycle], size: int, feasible) -> Optional[List[Cycle]]:
    """辞書順最初の実行可能な部分集合（下に閉じた族なので接頭辞で枝刈り）"""
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


def max_stable_set(n: int, edges: Sequence[Edge], budget: EnumerationBudget = DEFAULT_BUDGET) -> int:
    """部分集合の全列挙による最大安定集合のサイズ"""
    budget.check("max_host_vertices", n)
    adjacency = [0] * n
    for u, v in edges:
        adjacency[u] |= 1 << v
        adjacency[v] |= 1 << u
    best = 0
    for size in range(n, 0, -1):
        for subset in combinations(range(n), size):
            mask = sum(1 << v for v in subset)
            if all(adjacency[v] & mask == 0 for v in subset):
                return size
    return best
