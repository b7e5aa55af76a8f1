#!/usr/bin/env python3
"""
ソルバー共通の結果レポート
"""

import time
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional, Tuple

from core.cycle_space import Cycle, canonical_sorted, format_cycle
from core.graph_core import EdgeUniverse, Instance, InstanceStats, instance_stats
from core.mcb_horton import MCBResult, witness_basis

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SolveReport:
    """解 B、手法、各グラフの証拠基底 B_i ⊇ B、統計"""
    universe: EdgeUniverse = field(repr=False, compare=False)
    names: Tuple[str, ...]
    solution: Tuple[Cycle, ...]
    method: str
    approximate: bool
    witnesses: Tuple[MCBResult, ...]
    stats: InstanceStats
    K: Optional[int] = None
    answer: Optional[bool] = None
    candidate_count: int = 0
    oracle_calls: int = 0
    runtime: float = 0.0

    @property
    def size(self) -> int:
        return len(self.solution)

    def cycle_lines(self):
        return [format_cycle(self.universe, c) for c in self.solution]

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        """構造化出力（schema 1）。実行時間は決定性のため既定で含めない"""
        stats = self.stats.to_dict()
        stats["candidates"] = self.candidate_count
        stats["oracle_calls"] = self.oracle_calls
        if include_timing:
            stats["runtime_seconds"] = round(self.runtime, 6)
        data = {
            "schema": SCHEMA_VERSION,
            "size": self.size,
            "cycles": self.cycle_lines(),
            "method": self.method,
            "approximate": self.approximate,
            "K": self.K,
            "stats": stats,
            "witnesses": [
                {
                    "graph": name,
                    "size": len(w),
                    "weight": w.weight,
                    "cycles": [format_cycle(self.universe, c) for c in canonical_sorted(w.basis)],
                }
                for name, w in zip(self.names, self.witnesses)
            ],
        }
        if self.answer is not None:
            data["answer"] = self.answer
        return data


def build_report(instance: Instance,
                 solution: Iterable[Cycle],
                 method: str,
                 *,
                 approximate: bool = False,
                 K: Optional[int] = None,
                 answer: Optional[bool] = None,
                 candidate_count: int = 0,
                 oracle_calls: int = 0,
                 started: Optional[float] = None,
                 stats: Optional[InstanceStats] = None) -> SolveReport:
    """解から証拠基底を作りレポートにまとめる"""
    solution = tuple(canonical_sorted(solution))
    witnesses = tuple(witness_basis(g, solution) for g in instance.graphs)
    runtime = time.perf_counter() - started if started is not None else 0.0
    logger.info(f"解決完了: 手法={method}, |B|={len(solution)}, 近似={approximate}")
    return SolveReport(
        universe=instance.universe,
        names=instance.names,
        solution=solution,
        method=method,
        approximate=approximate,
        witnesses=witnesses,
        stats=stats or instance_stats(instance),
        K=K,
        answer=answer,
        candidate_count=candidate_count,
        oracle_calls=oracle_calls,
        runtime=runtime,
    )
