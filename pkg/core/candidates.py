#!/usr/bin/env python3
"""
候補サイクルリスト L の構築
共通部分グラフ上で (a) 頂点 u と辺 (v, w)、(b) 辺の組 (u, v), (w, x) から
最短路をつないだサイクルを作り、初等サイクルだけを残す。最適解は L の中にある。
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterator, List, Tuple

from core.cycle_space import Cycle, is_cycle, is_elementary
from core.graph_core import Instance, intersection_graph
from core.mcb_horton import ShortestPathIndex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CandidateOrigin:
    """候補の出自: odd = (u, (v, w))、even = ((u, v), (w, x), 組み方)"""
    rule: str
    vertices: Tuple[int, ...]
    pairing: int = 0

    def describe(self) -> str:
        vs = [v + 1 for v in self.vertices]
        if self.rule == "odd":
            return f"odd u={vs[0]} e=({vs[1]},{vs[2]})"
        return f"even e=({vs[0]},{vs[1]}) f=({vs[2]},{vs[3]}) pairing={self.pairing}"


@dataclass(frozen=True)
class CandidateList:
    """重複除去・正準順の候補サイクル列"""
    cycles: Tuple[Cycle, ...]
    provenance: Tuple[CandidateOrigin, ...]
    generated: int = 0

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self) -> Iterator[Cycle]:
        return iter(self.cycles)

    def __getitem__(self, i: int) -> Cycle:
        return self.cycles[i]

    def __contains__(self, c: Cycle) -> bool:
        return c in self.cycles

    def origin_of(self, c: Cycle) -> CandidateOrigin:
        return self.provenance[self.cycles.index(c)]

    def subset(self, keep) -> "CandidateList":
        pairs = [(c, o) for c, o in zip(self.cycles, self.provenance) if keep(c)]
        return CandidateList(
            cycles=tuple(c for c, _ in pairs),
            provenance=tuple(o for _, o in pairs),
            generated=self.generated,
        )


def _joined_cycle(parts: List[int]) -> int:
    """辺を共有しない部分の和集合。共有があれば 0（初等にならない）"""
    bits = 0
    for p in parts:
        if bits & p:
            return 0
        bits |= p
    return bits


def candidates_list(instance: Instance) -> CandidateList:
    """
    共通部分グラフ上の候補リスト L を構築

    Args:
        instance: 入力インスタンス

    Returns:
        CandidateList（初等サイクルのみ、正準順）
    """
    graph = intersection_graph(instance)
    universe = graph.universe
    spi = ShortestPathIndex(graph)
    found: Dict[int, CandidateOrigin] = {}
    generated = 0

    def consider(bits: int, origin: CandidateOrigin):
        nonlocal generated
        generated += 1
        if bits == 0 or bits in found:
            return
        if is_cycle(universe, bits) and is_elementary(universe, Cycle(bits)):
            found[bits] = origin

    edges = [(eid, universe.edges[eid]) for eid in graph.edge_ids]

    # 頂点 u と辺 (v, w)
    for u in range(graph.n):
        for eid, (v, w) in edges:
            if not (spi.reachable(u, v) and spi.reachable(u, w)):
                continue
            bits = _joined_cycle([1 << eid, spi.path_edges(u, v), spi.path_edges(u, w)])
            consider(bits, CandidateOrigin("odd", (u, v, w)))

    # 辺の組 (u, v), (w, x) と2通りの組み方
    for (e1, (u, v)), (e2, (w, x)) in combinations(edges, 2):
        ends = 1 << e1 | 1 << e2
        for pairing, (a, b, c, d) in enumerate(((u, w, v, x), (u, x, v, w)), 1):
            if not (spi.reachable(a, b) and spi.reachable(c, d)):
                continue
            bits = _joined_cycle([ends, spi.path_edges(a, b), spi.path_edges(c, d)])
            consider(bits, CandidateOrigin("even", (u, v, w, x), pairing))

    ordered = sorted(found, key=lambda b: Cycle(b).key)
    result = CandidateList(
        cycles=tuple(Cycle(b) for b in ordered),
        provenance=tuple(found[b] for b in ordered),
        generated=generated,
    )
    logger.info(f"候補リスト構築: |L|={len(result)} (生成 {generated}件, 共通辺 {len(edges)}本)")
    return result


def filter_by_weight(candidates: CandidateList, weight: int) -> CandidateList:
    """重みがちょうど l の部分リスト（順序保持）"""
    return candidates.subset(lambda c: c.weight == weight)
