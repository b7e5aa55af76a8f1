#!/usr/bin/env python3
"""
γ = 3 と γ = 4, Δ = 3 の多項式時間ソルバー
重みの異なるサイクル同士は独立に最大化でき、あとで合併しても実行可能性は保たれる。
四角形の集合が M(G, 4) で独立 ⇔ span(T(G)) を法とした像が線形独立。
"""

import time
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from core.candidates import CandidateList, candidates_list, filter_by_weight
from core.cycle_space import Cycle, GF2Basis, canonical_sorted, cycle_from_vertices
from core.errors import PreconditionError
from core.graph_core import Graph, Instance, InstanceStats, instance_stats
from core.report import SolveReport, build_report

logger = logging.getLogger(__name__)


def triangles_of(graph: Graph) -> List[Cycle]:
    """グラフの全三角形（正準順）"""
    adj = [set(a) for a in graph.adjacency]
    triangles = []
    for u, v in graph.edges:
        for w in sorted(adj[u] & adj[v]):
            if w > v:
                triangles.append(cycle_from_vertices(graph.universe, (u, v, w)))
    return canonical_sorted(triangles)


@dataclass
class TriangleSpan:
    """T(G) の三角形と、それが張る空間の基底"""
    graph: Graph
    triangles: List[Cycle] = field(default_factory=list)
    basis: GF2Basis = field(default_factory=GF2Basis)

    @classmethod
    def of(cls, graph: Graph) -> "TriangleSpan":
        triangles = triangles_of(graph)
        basis = GF2Basis()
        for t in triangles:
            basis.add(t)
        return cls(graph, triangles, basis)

    @property
    def rank(self) -> int:
        return self.basis.rank

    def spans(self, c: Cycle) -> bool:
        return self.basis.spans(c)


class QuotientState:
    """選んだ四角形 B_S と、各グラフの span(B_S ∪ T(G_i))"""

    def __init__(self, spans: Sequence[TriangleSpan]):
        self.chosen: List[Cycle] = []
        self.bases = [s.basis.copy() for s in spans]

    def addable(self, square: Cycle) -> bool:
        return all(not b.spans(square) for b in self.bases)

    def accept(self, square: Cycle):
        for b in self.bases:
            b.add(square)
        self.chosen.append(square)


def _check_gamma(stats: InstanceStats, limit: int, delta_limit: Optional[int] = None):
    for g in stats.per_graph:
        if g.gamma > limit:
            raise PreconditionError(f"グラフ {g.name} の γ = {g.gamma} が上限 {limit} を超えています")
        if delta_limit is not None and g.delta > delta_limit:
            raise PreconditionError(f"グラフ {g.name} の Δ = {g.delta} が上限 {delta_limit} を超えています")


def _max_triangles(candidates: CandidateList) -> List[Cycle]:
    """L の三角形を正準順に走査し、線形独立なものを残す"""
    basis = GF2Basis()
    return [t for t in filter_by_weight(candidates, 3) if basis.add(t)]


def solve_gamma3(instance: Instance) -> SolveReport:
    """
    γ = 3 の厳密解（三角形の線形独立な極大集合）

    三角形どうしでは線形独立 ⇔ 各 M(G_i, 3) で独立なので貪欲法で最大になる
    """
    started = time.perf_counter()
    stats = instance_stats(instance)
    _check_gamma(stats, 3)
    ground = candidates_list(instance)
    chosen = _max_triangles(ground)
    return build_report(instance, chosen, "gamma3", candidate_count=len(ground),
                        started=started, stats=stats)


def remove_triangle_spanned_squares(candidates: CandidateList, instance: Instance,
                                    spans: Optional[Sequence[TriangleSpan]] = None) -> CandidateList:
    """いずれかの span(T(G_i)) に入る四角形を L から除く（どの M(G_i, 4) でも独立になれない）"""
    spans = spans or [TriangleSpan.of(g) for g in instance.graphs]
    kept = candidates.subset(lambda c: c.weight != 4 or not any(s.spans(c) for s in spans))
    removed = len(candidates) - len(kept)
    if removed:
        logger.info(f"三角形で張られる四角形を {removed}件 除去")
    return kept


def solve_gamma4_delta3(instance: Instance) -> SolveReport:
    """
    γ ≤ 4 かつ Δ ≤ 3 の厳密解

    三角形は solve_gamma3 と同じ貪欲法、四角形は全グラフで
    s ∉ span(B_S ∪ T(G_i)) のときだけ追加し、最後に合併する
    """
    started = time.perf_counter()
    stats = instance_stats(instance)
    _check_gamma(stats, 4, delta_limit=3)
    ground = candidates_list(instance)
    spans = [TriangleSpan.of(g) for g in instance.graphs]

    chosen_triangles = _max_triangles(ground)
    squares = filter_by_weight(remove_triangle_spanned_squares(ground, instance, spans), 4)
    state = QuotientState(spans)
    for s in squares:
        if state.addable(s):
            state.accept(s)
    logger.info(f"γ=4, Δ=3: 三角形 {len(chosen_triangles)}個 + 四角形 {len(state.chosen)}個")
    return build_report(instance, chosen_triangles + state.chosen, "gamma4_delta3",
                        candidate_count=len(ground), started=started, stats=stats)
