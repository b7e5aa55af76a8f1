#!/usr/bin/env python3
"""
Horton法による最小サイクル基底と、M(G) の独立性オラクル
問い合わせ集合 D を候補リストに混ぜ、同重みでは D を優先して貪欲法を走らせる。
D がすべて基底に残れば D を含む MCB が存在する。
"""

import heapq
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.cycle_space import Cycle, GF2Basis, canonical_sorted, is_cycle
from core.errors import CycleFormatError, DependentSetError
from core.graph_core import Graph

logger = logging.getLogger(__name__)

QUERY = "query"


class ShortestPathIndex:
    """
    根ごとのBFS木（決定的タイブレーク）

    親 = 1つ前のレベルにある隣接頂点のうち優先度最小のもの。
    seed=None なら優先度は頂点ID、seed を与えると頂点の優先順位を乱数で並べ替える。
    """

    def __init__(self, graph: Graph, seed: Optional[int] = None):
        self.graph = graph
        self.seed = seed
        n = graph.n
        if seed is None:
            self.priority = np.arange(n)
        else:
            self.priority = np.random.default_rng(seed).permutation(n)
        self.dist = np.full((n, n), -1, dtype=np.int64)
        self.parent = np.full((n, n), -1, dtype=np.int64)
        self._path_bits: List[List[int]] = [[0] * n for _ in range(n)]
        for root in range(n):
            self._build_root(root)

    def _build_root(self, root: int):
        adj = self.graph.adjacency
        universe = self.graph.universe
        dist = self.dist[root]
        dist[root] = 0
        level = [root]
        order = []
        while level:
            nxt = []
            for u in level:
                for w in adj[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            order.extend(nxt)
            level = nxt
        bits = self._path_bits[root]
        for v in order:
            candidates = [u for u in adj[v] if dist[u] == dist[v] - 1]
            p = min(candidates, key=lambda u: self.priority[u])
            self.parent[root, v] = p
            bits[v] = bits[p] | universe.edge_bit(p, v)

    def reachable(self, root: int, v: int) -> bool:
        return self.dist[root, v] >= 0

    def path_edges(self, root: int, v: int) -> int:
        """root から v への最短路の辺ビット列"""
        return self._path_bits[root][v]


@dataclass(frozen=True)
class HortonCandidate:
    """C(v, e) = path(v, x) ∪ {e = (x, y)} ∪ path(v, y)"""
    cycle: Cycle
    root: int
    edge: int


Provenance = Union[HortonCandidate, str]


@dataclass(frozen=True)
class MCBResult:
    """最小サイクル基底と出自"""
    basis: Tuple[Cycle, ...]
    weight: int
    provenance: Tuple[Provenance, ...]

    def __len__(self) -> int:
        return len(self.basis)

    def __contains__(self, c: Cycle) -> bool:
        return c in self.basis


def horton_candidates(graph: Graph, spi: Optional[ShortestPathIndex] = None) -> List[HortonCandidate]:
    """
    Horton候補リスト（重複除去・正準順）

    3つの部分が辺を共有する組合せはサイクルにならないので除外する。
    """
    spi = spi or ShortestPathIndex(graph)
    universe = graph.universe
    seen: Dict[int, HortonCandidate] = {}
    for root in range(graph.n):
        for eid in graph.edge_ids:
            x, y = universe.edges[eid]
            if not (spi.reachable(root, x) and spi.reachable(root, y)):
                continue
            p1 = spi.path_edges(root, x)
            p2 = spi.path_edges(root, y)
            ebit = 1 << eid
            if p1 & p2 or (p1 | p2) & ebit:
                continue
            bits = p1 | p2 | ebit
            if bits in seen or not is_cycle(universe, bits):
                continue
            seen[bits] = HortonCandidate(Cycle(bits), root, eid)
    result = sorted(seen.values(), key=lambda h: h.cycle.key)
    logger.debug(f"Horton候補: {len(result)}件 (|V|={graph.n}, |E|={graph.edge_count})")
    return result


class HortonOracle:
    """1つのグラフに対するMCB計算と独立性オラクル（候補リストを保持）"""

    def __init__(self, graph: Graph, seed: Optional[int] = None):
        self.graph = graph
        self.seed = seed
        self.spi = ShortestPathIndex(graph, seed)
        self.candidates = horton_candidates(graph, self.spi)
        self.nu = graph.cyclomatic_number()
        # 同重みでは問い合わせ(0)が候補(1)より先
        self._entries = [((h.cycle.weight, 1, h.cycle.edge_ids), h.cycle, h)
                         for h in self.candidates]
        self.calls = 0

    def _validate(self, queries: Sequence[Cycle]):
        seen = set()
        for d in queries:
            if d.is_zero():
                raise CycleFormatError("問い合わせにゼロベクトルが含まれています")
            if not self.graph.contains(d.bits):
                raise CycleFormatError("問い合わせサイクルの辺がグラフにありません")
            if not is_cycle(self.graph.universe, d.bits):
                raise CycleFormatError("問い合わせがサイクルではありません")
            if d.bits in seen:
                raise CycleFormatError("問い合わせ集合に重複があります")
            seen.add(d.bits)

    def _greedy(self, queries: Sequence[Cycle], stop_after_queries: bool):
        """
        D ∪ L を (重み, 優先度, 正準順) で走査する貪欲法

        Returns:
            (全Dが残ったか, 基底, 出自)
        """
        self._validate(queries)
        query_entries = sorted(((d.weight, 0, d.edge_ids), d, QUERY) for d in queries)
        pending = len(query_entries)
        basis = GF2Basis()
        provenance: List[Provenance] = []
        for _, cycle, origin in heapq.merge(query_entries, self._entries, key=lambda e: e[0]):
            if basis.rank == self.nu:
                break
            accepted = basis.add(cycle)
            if origin == QUERY:
                if not accepted:
                    return False, basis, provenance
                pending -= 1
            if accepted:
                provenance.append(origin)
            if pending == 0 and stop_after_queries:
                return True, basis, provenance
        return pending == 0, basis, provenance

    def minimum_cycle_basis(self) -> MCBResult:
        return self.witness_basis(())

    def is_independent(self, queries: Iterable[Cycle]) -> bool:
        """D を含む MCB が存在するか"""
        queries = list(queries)
        self.calls += 1
        if not queries:
            return True
        ok, _, _ = self._greedy(queries, stop_after_queries=True)
        return ok

    def witness_basis(self, queries: Iterable[Cycle]) -> MCBResult:
        """D を含む MCB 全体（修正貪欲法の出力）"""
        queries = list(queries)
        ok, basis, provenance = self._greedy(queries, stop_after_queries=False)
        if not ok:
            raise DependentSetError("D はどの最小サイクル基底にも含まれません")
        return MCBResult(
            basis=tuple(basis.members),
            weight=sum(c.weight for c in basis.members),
            provenance=tuple(provenance),
        )


@lru_cache(maxsize=256)
def oracle_for(graph: Graph, seed: Optional[int] = None) -> HortonOracle:
    """グラフごとのオラクル（候補リストを再利用）"""
    return HortonOracle(graph, seed)


def minimum_cycle_basis(graph: Graph, seed: Optional[int] = None) -> MCBResult:
    """
    最小サイクル基底（Horton法）

    Args:
        graph: 対象グラフ（非連結可）
        seed: 最短路タイブレークの乱数シード（None = 最小ID規則）

    Returns:
        MCBResult（木なら空の基底）
    """
    result = oracle_for(graph, seed).minimum_cycle_basis()
    logger.info(f"MCB計算完了: サイズ={len(result)}, 重み={result.weight}")
    return result


def is_independent_in_mcb(graph: Graph, cycles: Iterable[Cycle]) -> bool:
    return oracle_for(graph).is_independent(cycles)


def witness_basis(graph: Graph, cycles: Iterable[Cycle]) -> MCBResult:
    return oracle_for(graph).witness_basis(cycles)


def weight_profile(basis: Iterable[Cycle]) -> Tuple[int, ...]:
    """基底の重み列（昇順）"""
    return tuple(sorted(c.weight for c in basis))


def merge_weight_class(b1: Iterable[Cycle], b2: Iterable[Cycle], weight: int) -> List[Cycle]:
    """{c ∈ B1 | ω(c) ≠ l} ∪ {c ∈ B2 | ω(c) = l}"""
    merged = [c for c in b1 if c.weight != weight]
    merged.extend(c for c in b2 if c.weight == weight)
    return canonical_sorted(merged)
