#!/usr/bin/env python3
"""
共有頂点集合上のグラフ表現とファイル入出力
全グラフの辺はインスタンス共通の辺インデックス（EdgeUniverse）で表し、
異なるグラフのサイクルをビット列の一致で比較できるようにする
"""

import io
import re
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import networkx as nx
import numpy as np

from core.errors import FrameRangeError, InstanceParseError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Source = Union[str, TextIO, Iterable[str]]


@dataclass(frozen=True)
class EdgeUniverse:
    """インスタンス共通の辺インデックス（EdgeId = ソート済みリスト内の位置）"""
    n: int
    edges: Tuple[Edge, ...]
    _index: Dict[Edge, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        index = {}
        for i, (u, v) in enumerate(self.edges):
            if u == v:
                raise ValueError(f"自己ループは不可: ({u}, {v})")
            if not (0 <= u < v < self.n):
                raise ValueError(f"辺 ({u}, {v}) が正規形でないか範囲外です (n={self.n})")
            if (u, v) in index:
                raise ValueError(f"辺 ({u}, {v}) が重複しています")
            index[(u, v)] = i
        if list(self.edges) != sorted(self.edges):
            raise ValueError("辺リストは辞書順にソートされている必要があります")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "EdgeUniverse":
        """任意順・向きの辺集合から正規化して作成"""
        canonical = sorted({(min(u, v), max(u, v)) for u, v in edges})
        return cls(n=n, edges=tuple(canonical))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> Optional[int]:
        """頂点対の辺ID（存在しなければNone）"""
        return self._index.get((min(u, v), max(u, v)))

    def edge_bit(self, u: int, v: int) -> int:
        eid = self.edge_id(u, v)
        if eid is None:
            raise KeyError(f"辺 ({u}, {v}) はユニバースにありません")
        return 1 << eid

    @cached_property
    def endpoints(self) -> np.ndarray:
        """(m, 2) の端点配列"""
        if not self.edges:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array(self.edges, dtype=np.int64)

    def ids_of(self, bits: int) -> List[int]:
        """ビット列に含まれる辺IDの昇順リスト"""
        ids = []
        while bits:
            low = bits & -bits
            ids.append(low.bit_length() - 1)
            bits ^= low
        return ids

    def full_mask(self) -> int:
        return (1 << self.m) - 1


@dataclass(frozen=True)
class Graph:
    """ユニバース上の単純グラフ（辺メンバーシップのビット列）"""
    universe: EdgeUniverse
    mask: int

    def __post_init__(self):
        if self.mask & ~self.universe.full_mask():
            raise ValueError("ユニバース外の辺が含まれています")

    @property
    def n(self) -> int:
        return self.universe.n

    @cached_property
    def edge_ids(self) -> Tuple[int, ...]:
        return tuple(self.universe.ids_of(self.mask))

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(self.universe.edges[i] for i in self.edge_ids)

    @property
    def edge_count(self) -> int:
        return self.mask.bit_count()

    @cached_property
    def adjacency(self) -> Tuple[Tuple[int, ...], ...]:
        """昇順の隣接リスト"""
        adj: List[List[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degrees(self) -> np.ndarray:
        ends = self.universe.endpoints[list(self.edge_ids)].ravel()
        return np.bincount(ends, minlength=self.n)

    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def has_edge(self, u: int, v: int) -> bool:
        eid = self.universe.edge_id(u, v)
        return eid is not None and bool((self.mask >> eid) & 1)

    def contains(self, bits: int) -> bool:
        """ビット列の辺がすべてこのグラフにあるか"""
        return bits & ~self.mask == 0

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    @cached_property
    def components(self) -> Tuple[Tuple[int, ...], ...]:
        """連結成分（孤立頂点を含む）を最小頂点順に"""
        comps = [tuple(sorted(c)) for c in nx.connected_components(self.to_networkx())]
        return tuple(sorted(comps))

    def cyclomatic_number(self) -> int:
        """サイクル空間の次元 ν = |E| - |V| + 連結成分数"""
        return self.edge_count - self.n + len(self.components)


@dataclass(frozen=True)
class Instance:
    """同じ頂点集合を共有する k 個のグラフ"""
    universe: EdgeUniverse
    graphs: Tuple[Graph, ...]
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.graphs:
            raise ValueError("グラフが1つ以上必要です (k >= 1)")
        union = 0
        for g in self.graphs:
            if g.universe != self.universe:
                raise ValueError("全グラフは同じユニバース上にある必要があります")
            union |= g.mask
        if union != self.universe.full_mask():
            raise ValueError("ユニバースは全グラフの辺の和集合と一致する必要があります")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"G{i + 1}" for i in range(len(self.graphs))))
        elif len(self.names) != len(self.graphs):
            raise ValueError("名前の数がグラフ数と一致しません")
        for name in self.names:
            # ファイル形式では空白で区切られ、# 以降はコメント
            if not name or "#" in name or name != " ".join(name.split()):
                raise ValueError(f"グラフ名に使えない文字や空白があります: {name!r}")

    @property
    def k(self) -> int:
        return len(self.graphs)

    @property
    def n(self) -> int:
        return self.universe.n

    @classmethod
    def from_edge_lists(cls, n: int, edge_lists: Sequence[Iterable[Edge]],
                        names: Optional[Sequence[str]] = None) -> "Instance":
        """辺リスト（0始まり）の列からインスタンスを構築"""
        lists = [[(min(u, v), max(u, v)) for u, v in edges] for edges in edge_lists]
        universe = EdgeUniverse.from_edges(n, (e for edges in lists for e in edges))
        graphs = []
        for edges in lists:
            mask = 0
            for u, v in edges:
                mask |= universe.edge_bit(u, v)
            graphs.append(Graph(universe, mask))
        return cls(universe=universe, graphs=tuple(graphs), names=tuple(names or ()))


@dataclass(frozen=True)
class GraphStats:
    """グラフ単位の統計"""
    name: str
    edges: int
    nu: int
    gamma: int
    delta: int
    components: int


@dataclass(frozen=True)
class InstanceStats:
    """インスタンス全体の統計 (k, Δ, γ, 次元)"""
    k: int
    n: int
    delta: int
    gamma: int
    per_graph: Tuple[GraphStats, ...]

    def to_dict(self) -> Dict:
        return {
            "k": self.k,
            "n": self.n,
            "delta": self.delta,
            "gamma": self.gamma,
            "graphs": [vars(g).copy() for g in self.per_graph],
        }


def intersection_graph(instance: Instance) -> Graph:
    """全グラフの辺集合のビットごとAND"""
    mask = instance.universe.full_mask()
    for g in instance.graphs:
        mask &= g.mask
    return Graph(instance.universe, mask)


def instance_stats(instance: Instance) -> InstanceStats:
    """
    k, Δ, γ と各グラフのサイクル空間次元を計算

    γ_i は1つのMCBの最大重みから求める（MCBの重み列は一意なので well-defined）
    """
    from core.mcb_horton import minimum_cycle_basis

    per_graph = []
    for name, g in zip(instance.names, instance.graphs):
        mcb = minimum_cycle_basis(g)
        gamma = max((c.weight for c in mcb.basis), default=0)
        per_graph.append(GraphStats(
            name=name,
            edges=g.edge_count,
            nu=g.cyclomatic_number(),
            gamma=gamma,
            delta=g.max_degree(),
            components=len(g.components),
        ))
    return InstanceStats(
        k=instance.k,
        n=instance.n,
        delta=max(s.delta for s in per_graph),
        gamma=max(s.gamma for s in per_graph),
        per_graph=tuple(per_graph),
    )


# ---- ファイル入出力 ----

_TOKEN = re.compile(r"\S+")


def _content_lines(source: Source):
    """コメントと空行を除いた (行番号, トークン列) を返す"""
    if isinstance(source, str):
        source = io.StringIO(source)
    for line_no, raw in enumerate(source, 1):
        text = raw.split("#", 1)[0]
        tokens = _TOKEN.findall(text)
        if tokens:
            yield line_no, tokens


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceParseError(f"{what}が整数ではありません: '{token}'", line_no, "syntax") from None


def _parse_edge_line(tokens: List[str], line_no: int, n: int) -> Edge:
    if len(tokens) != 3:
        raise InstanceParseError("辺行は 'e <u> <v>' の形式です", line_no, "syntax")
    u = _parse_int(tokens[1], line_no, "頂点番号")
    v = _parse_int(tokens[2], line_no, "頂点番号")
    for x in (u, v):
        if not 1 <= x <= n:
            raise InstanceParseError(f"頂点番号 {x} が範囲外です (1..{n})", line_no, "vertex_range")
    if u == v:
        raise InstanceParseError(f"自己ループ ({u}, {v}) は許可されていません", line_no, "self_loop")
    return (min(u, v) - 1, max(u, v) - 1)


def _parse_header(lines, keyword: str) -> Tuple[int, int, int]:
    first = next(lines, None)
    if first is None:
        raise InstanceParseError(f"ヘッダー '{keyword} <n> <count>' がありません", 1, "header")
    line_no, tokens = first
    if len(tokens) != 3 or tokens[0] != keyword:
        raise InstanceParseError(f"ヘッダーは '{keyword} <n> <count>' の形式です", line_no, "header")
    a = _parse_int(tokens[1], line_no, "ヘッダー値")
    b = _parse_int(tokens[2], line_no, "ヘッダー値")
    if a < 0 or b < 0:
        raise InstanceParseError("ヘッダー値は非負です", line_no, "header")
    return line_no, a, b


def _parse_sections(source: Source, header: str, section: str):
    """ヘッダー + セクション列の共通パーサー"""
    lines = _content_lines(source)
    _, n, count = _parse_header(lines, header)
    sections: List[Tuple[str, List[Edge]]] = []
    seen: set = set()
    last_line = 1
    for line_no, tokens in lines:
        last_line = line_no
        head = tokens[0]
        if head == section:
            if len(sections) == count:
                raise InstanceParseError(
                    f"{section} セクションが宣言数 {count} を超えています", line_no, "k_mismatch")
            name = " ".join(tokens[1:]) or f"{section}{len(sections) + 1}"
            sections.append((name, []))
            seen = set()
        elif head == "e":
            if not sections:
                raise InstanceParseError(f"辺行の前に '{section}' 行が必要です", line_no, "syntax")
            edge = _parse_edge_line(tokens, line_no, n)
            if edge in seen:
                raise InstanceParseError(
                    f"辺 ({edge[0] + 1}, {edge[1] + 1}) が同じセクション内で重複しています",
                    line_no, "duplicate_edge")
            seen.add(edge)
            sections[-1][1].append(edge)
        else:
            raise InstanceParseError(f"不明な行種別 '{head}'", line_no, "syntax")
    if len(sections) != count:
        raise InstanceParseError(
            f"{section} セクション数 {len(sections)} が宣言数 {count} と一致しません",
            last_line, "k_mismatch")
    return n, sections


def parse_instance(source: Source) -> Instance:
    """
    インスタンスファイルを読み込み

    Args:
        source: ファイルオブジェクト、行の反復子、または文字列

    Returns:
        Instance（ファイル上は1始まり、メモリ上は0始まり）
    """
    n, sections = _parse_sections(source, "mcbi", "graph")
    if not sections:
        raise InstanceParseError("k >= 1 が必要です", 1, "header")
    instance = Instance.from_edge_lists(n, [edges for _, edges in sections],
                                        names=[name for name, _ in sections])
    logger.info(f"インスタンス読み込み完了: n={n}, k={instance.k}, |U|={instance.universe.m}")
    return instance


def parse_frame_range(text: str) -> Tuple[int, int]:
    """'a..b'（1始まり、両端含む）を解析"""
    match = re.fullmatch(r"\s*(\d+)\.\.(\d+)\s*", text)
    if not match:
        raise FrameRangeError(f"フレーム範囲は 'a..b' の形式です: '{text}'")
    return int(match.group(1)), int(match.group(2))


def parse_trajectory(source: Source, frame_range: Optional[Tuple[int, int]] = None) -> Instance:
    """
    軌跡ファイルから指定フレームを抜き出してインスタンス化

    Args:
        source: 軌跡ファイル
        frame_range: (a, b) 1始まり両端含む。Noneなら全フレーム

    Returns:
        選択フレームを順に並べたInstance
    """
    n, frames = _parse_sections(source, "traj", "frame")
    total = len(frames)
    first, last = frame_range if frame_range is not None else (1, total)
    if first > last or total == 0:
        raise FrameRangeError(f"フレーム範囲 {first}..{last} が空です")
    if first < 1 or last > total:
        raise FrameRangeError(f"フレーム範囲 {first}..{last} が範囲外です (1..{total})")
    selected = frames[first - 1:last]
    logger.info(f"軌跡読み込み: {total}フレーム中 {first}..{last} を使用")
    return Instance.from_edge_lists(
        n, [edges for _, edges in selected],
        names=[f"frame {name}" if not name.startswith("frame") else name for name, _ in selected])


def parse_host_graph(source: Source) -> Tuple[int, List[Edge]]:
    """安定集合帰着用のホストグラフファイル ('host <n>' + 'e u v') を読み込み"""
    lines = _content_lines(source)
    first = next(lines, None)
    if first is None or len(first[1]) != 2 or first[1][0] != "host":
        raise InstanceParseError("ヘッダーは 'host <n>' の形式です",
                                 first[0] if first else 1, "header")
    n = _parse_int(first[1][1], first[0], "頂点数")
    edges: List[Edge] = []
    seen = set()
    for line_no, tokens in lines:
        if tokens[0] != "e":
            raise InstanceParseError(f"不明な行種別 '{tokens[0]}'", line_no, "syntax")
        edge = _parse_edge_line(tokens, line_no, n)
        if edge in seen:
            raise InstanceParseError("辺が重複しています", line_no, "duplicate_edge")
        seen.add(edge)
        edges.append(edge)
    return n, sorted(edges)


def serialize_instance(instance: Instance) -> str:
    """インスタンスファイル形式で書き出し（parse_instance の逆）"""
    out = [f"mcbi {instance.n} {instance.k}"]
    for name, g in zip(instance.names, instance.graphs):
        out.append(f"graph {name}")
        out.extend(f"e {u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def serialize_trajectory(instance: Instance) -> str:
    """軌跡ファイル形式で書き出し"""
    out = [f"traj {instance.n} {instance.k}"]
    for t, g in enumerate(instance.graphs, 1):
        out.append(f"frame {t}")
        out.extend(f"e {u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(out) + "\n"
