#!/usr/bin/env python3
"""
GF(2) サイクル空間の演算
サイクルは辺ビット列（Pythonのint）で表し、和は XOR（対称差）になる
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from core.errors import CycleFormatError, DependentSetError, NotSpannedError
from core.graph_core import EdgeUniverse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cycle:
    """辺ビット列 + 重み ω（辺数）のキャッシュ"""
    bits: int
    weight: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.bits < 0:
            raise CycleFormatError("ビット列は非負整数です")
        object.__setattr__(self, "weight", self.bits.bit_count())

    @cached_property
    def edge_ids(self) -> Tuple[int, ...]:
        ids = []
        bits = self.bits
        while bits:
            low = bits & -bits
            ids.append(low.bit_length() - 1)
            bits ^= low
        return tuple(ids)

    @property
    def key(self) -> Tuple[int, Tuple[int, ...]]:
        """正準順序: 重み → 辺IDの辞書順"""
        return (self.weight, self.edge_ids)

    def is_zero(self) -> bool:
        return self.bits == 0

    def __xor__(self, other: "Cycle") -> "Cycle":
        return Cycle(self.bits ^ other.bits)


ZERO = Cycle(0)


def canonical_key(c: Cycle) -> Tuple[int, Tuple[int, ...]]:
    return c.key


def canonical_sorted(cycles: Iterable[Cycle]) -> List[Cycle]:
    return sorted(cycles, key=canonical_key)


def cycle_sum(c1: Cycle, c2: Cycle) -> Cycle:
    """c1 ⊕ c2（片方だけに含まれる辺）"""
    return Cycle(c1.bits ^ c2.bits)


def sum_of(cycles: Iterable[Cycle]) -> Cycle:
    """集合のGF(2)和（空集合はゼロベクトル）"""
    return Cycle(reduce(lambda acc, c: acc ^ c.bits, cycles, 0))


def vertex_degrees(universe: EdgeUniverse, bits: int) -> np.ndarray:
    """ビット列が誘導する部分グラフの各頂点次数"""
    ids = universe.ids_of(bits)
    ends = universe.endpoints[ids].ravel()
    return np.bincount(ends, minlength=universe.n)


def is_cycle(universe: EdgeUniverse, bits: int) -> bool:
    """全頂点の次数が偶数か（一般化サイクル）"""
    if bits == 0:
        return True
    return not np.any(vertex_degrees(universe, bits) % 2)


def is_elementary(universe: EdgeUniverse, c: Cycle) -> bool:
    """連結かつ全頂点の次数がちょうど2か"""
    if c.is_zero():
        raise CycleFormatError("ゼロベクトルは初等サイクルの判定対象外です")
    deg = vertex_degrees(universe, c.bits)
    if np.any((deg != 0) & (deg != 2)):
        return False
    support = nx.Graph()
    support.add_edges_from(universe.edges[i] for i in c.edge_ids)
    return nx.is_connected(support)


def cycle_from_vertices(universe: EdgeUniverse, vertices: Sequence[int]) -> Cycle:
    """頂点列 v0 v1 ... v_{r-1}（v_{r-1}→v0 で閉じる）からサイクルを作成"""
    bits = 0
    for a, b in zip(vertices, list(vertices[1:]) + [vertices[0]]):
        bits ^= universe.edge_bit(a, b)
    return Cycle(bits)


class GF2Basis:
    """
    行階段形を逐次維持するGF(2)基底

    各行は追加時に既存行で簡約済みなので、挿入順に簡約すれば全ピボットが消える。
    combos[i] は行 i を元のサイクル（members）の組合せで表したビットマスク。
    """

    def __init__(self, cycles: Iterable[Cycle] = ()):
        self.rows: List[int] = []
        self.pivots: List[int] = []
        self.combos: List[int] = []
        self.members: List[Cycle] = []
        for c in cycles:
            self.add(c)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> "GF2Basis":
        clone = GF2Basis()
        clone.rows = self.rows[:]
        clone.pivots = self.pivots[:]
        clone.combos = self.combos[:]
        clone.members = self.members[:]
        return clone

    def reduce(self, bits: int) -> Tuple[int, int]:
        """
        既存行で簡約

        Returns:
            (残差, 使った元サイクルの組合せマスク)
        """
        combo = 0
        for row, pivot, row_combo in zip(self.rows, self.pivots, self.combos):
            if (bits >> pivot) & 1:
                bits ^= row
                combo ^= row_combo
        return bits, combo

    def add(self, c: Cycle) -> bool:
        """独立なら追加して True、従属なら何もせず False"""
        if c.is_zero():
            raise CycleFormatError("ゼロベクトルは基底の要素になれません")
        residual, combo = self.reduce(c.bits)
        if residual == 0:
            return False
        index = len(self.members)
        self.rows.append(residual)
        self.pivots.append((residual & -residual).bit_length() - 1)
        self.combos.append(combo ^ (1 << index))
        self.members.append(c)
        return True

    def contains(self, c: Cycle) -> Tuple[bool, Tuple[Cycle, ...]]:
        """span所属判定と、所属する場合は和が c になる元サイクルの部分集合"""
        residual, combo = self.reduce(c.bits)
        if residual != 0:
            return False, ()
        witness = tuple(m for i, m in enumerate(self.members) if (combo >> i) & 1)
        return True, witness

    def spans(self, c: Cycle) -> bool:
        return self.reduce(c.bits)[0] == 0


@dataclass(frozen=True)
class SpanResult:
    contained: bool
    witness: Tuple[Cycle, ...]

    def __bool__(self) -> bool:
        return self.contained


def independent(cycles: Iterable[Cycle]) -> bool:
    """線形独立か（どの非空部分集合の和も0でない）"""
    basis = GF2Basis()
    for c in cycles:
        if c.is_zero() or not basis.add(c):
            return False
    return True


def span_contains(basis: GF2Basis, c: Cycle) -> SpanResult:
    contained, witness = basis.contains(c)
    return SpanResult(contained, witness)


def lambda_coefficient(basis_cycles: Sequence[Cycle], c: Cycle, d: Cycle) -> int:
    """
    λ_B(c, d): d を B で一意に表したときの c の係数

    Args:
        basis_cycles: 線形独立なサイクル列 B
        c: B の要素
        d: span(B) に含まれるサイクル

    Returns:
        0 または 1
    """
    if c not in basis_cycles:
        raise ValueError("c は B の要素である必要があります")
    basis = GF2Basis()
    for b in basis_cycles:
        if not basis.add(b):
            raise DependentSetError("B が線形独立ではありません")
    contained, witness = basis.contains(d)
    if not contained:
        raise NotSpannedError("d は B で張られません")
    return 1 if c in witness else 0


# ---- テキスト形式 'c u1 v1 u2 v2 ...' ----

def format_cycle(universe: EdgeUniverse, c: Cycle) -> str:
    parts = ["c"]
    for eid in c.edge_ids:
        u, v = universe.edges[eid]
        parts.append(f"{u + 1} {v + 1}")
    return " ".join(parts)


def parse_cycle(universe: EdgeUniverse, text: str, require_cycle: bool = True) -> Cycle:
    """
    サイクルのテキスト形式を解析

    Raises:
        CycleFormatError: 形式不正、ユニバース外の辺、重複辺、ゼロ、非サイクル
    """
    tokens = text.split("#", 1)[0].split()
    if not tokens or tokens[0] != "c":
        raise CycleFormatError(f"サイクル行は 'c' で始まります: '{text.strip()}'")
    values = tokens[1:]
    if len(values) % 2:
        raise CycleFormatError("端点の数が奇数です")
    try:
        numbers = [int(x) for x in values]
    except ValueError:
        raise CycleFormatError(f"端点が整数ではありません: '{text.strip()}'") from None
    bits = 0
    for u, v in zip(numbers[0::2], numbers[1::2]):
        eid = universe.edge_id(u - 1, v - 1)
        if eid is None:
            raise CycleFormatError(f"辺 ({u}, {v}) はインスタンスに存在しません")
        if (bits >> eid) & 1:
            raise CycleFormatError(f"辺 ({u}, {v}) が重複しています")
        bits |= 1 << eid
    if require_cycle:
        if bits == 0:
            raise CycleFormatError("空のサイクルです")
        if not is_cycle(universe, bits):
            raise CycleFormatError(f"次数が奇数の頂点があります: '{text.strip()}'")
    return Cycle(bits)
