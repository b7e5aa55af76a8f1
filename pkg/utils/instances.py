#!/usr/bin/env python3
"""
テスト・ベンチマーク用インスタンス生成
CONN ガジェット、最大安定集合からの帰着、ランダム軌跡
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from core.graph_core import Edge, Instance, serialize_trajectory

logger = logging.getLogger(__name__)

GROUP_PER_EDGE = "per-edge"
GROUP_PER_MATCHING = "per-matching"


@dataclass(frozen=True)
class HostGraph:
    """帰着元の単純グラフ H"""
    n: int
    edges: Tuple[Edge, ...]

    @classmethod
    def from_edges(cls, n: int, edges) -> "HostGraph":
        canonical = sorted({(min(u, v), max(u, v)) for u, v in edges})
        for u, v in canonical:
            if u == v:
                raise ValueError(f"ホストグラフに自己ループ ({u}, {v}) があります")
            if not 0 <= u < v < n:
                raise ValueError(f"頂点番号が範囲外です: ({u}, {v})")
        return cls(n, tuple(canonical))

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "HostGraph":
        mapping = {v: i for i, v in enumerate(sorted(g.nodes()))}
        return cls.from_edges(len(mapping), ((mapping[u], mapping[v]) for u, v in g.edges()))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


@dataclass(frozen=True)
class ReductionSpec:
    host: HostGraph
    l: int = 4
    grouping: str = GROUP_PER_EDGE

    def __post_init__(self):
        if self.l not in (4, 5):
            raise ValueError(f"l は 4 か 5 です (l = {self.l})")
        if self.grouping not in (GROUP_PER_EDGE, GROUP_PER_MATCHING):
            raise ValueError(f"不明なグループ化: {self.grouping}")


def node_cycle(v: int, l: int) -> List[int]:
    """ホスト頂点 v のサイクル c_v の頂点（連続ブロック v·l … v·l + l - 1）"""
    return list(range(v * l, v * l + l))


def cycle_edges(nodes: Sequence[int]) -> List[Edge]:
    return [(min(a, b), max(a, b)) for a, b in zip(nodes, list(nodes[1:]) + [nodes[0]])]


def conn(c1: Sequence[int], c2: Sequence[int], l: int) -> List[Edge]:
    """
    2つの長さ l のサイクルをつなぐ辺集合

    (u_i, v_i) を全 i について、l = 4 ならさらに (u_1, v_2), (u_2, v_3), (u_3, v_4), (u_4, v_1)
    """
    if l not in (4, 5):
        raise ValueError(f"l は 4 か 5 です (l = {l})")
    if len(c1) != l or len(c2) != l:
        raise ValueError(f"サイクルの長さは {l} である必要があります")
    if set(c1) & set(c2):
        raise ValueError("2つのサイクルは頂点素である必要があります")
    edges = [(u, v) for u, v in zip(c1, c2)]
    if l == 4:
        edges.extend((c1[i], c2[(i + 1) % 4]) for i in range(4))
    return sorted((min(u, v), max(u, v)) for u, v in edges)


def greedy_matching_cover(edges: Sequence[Edge]) -> List[List[Edge]]:
    """貪欲辺彩色（両端で未使用の最小色）による互いに素なマッチングへの分割"""
    used = {}
    classes: List[List[Edge]] = []
    for u, v in sorted(edges):
        taken = used.setdefault(u, set()) | used.setdefault(v, set())
        color = 0
        while color in taken:
            color += 1
        used[u].add(color)
        used[v].add(color)
        if color == len(classes):
            classes.append([])
        classes[color].append((u, v))
    return classes


def stable_set_instance(spec: ReductionSpec) -> Instance:
    """
    最大安定集合から max-MCBI への帰着インスタンス

    全グラフに全頂点のサイクル c_v を置き、グループ内のホスト辺ごとに CONN でつなぐ。
    ホスト辺がない場合はサイクルだけのグラフ1つ（k = 1）になる。
    """
    host, l = spec.host, spec.l
    base = [e for v in range(host.n) for e in cycle_edges(node_cycle(v, l))]
    if spec.grouping == GROUP_PER_EDGE:
        groups = [[e] for e in host.edges]
    else:
        groups = greedy_matching_cover(host.edges)
    if not groups:
        groups = [[]]
    edge_lists, names = [], []
    for j, group in enumerate(groups, 1):
        edges = list(base)
        for u, v in group:
            edges.extend(conn(node_cycle(u, l), node_cycle(v, l), l))
        edge_lists.append(edges)
        if spec.grouping == GROUP_PER_EDGE and group:
            u, v = group[0]
            names.append(f"G_({u + 1},{v + 1})")
        else:
            names.append(f"M{j}")
    instance = Instance.from_edge_lists(host.n * l, edge_lists, names)
    logger.info(f"帰着インスタンス生成: |V(H)|={host.n}, |E(H)|={len(host.edges)}, l={l}, k={instance.k}")
    return instance


def conn_gadget(l: int) -> Instance:
    """2つのサイクルを CONN でつないだ単一グラフ（k = 1）"""
    return stable_set_instance(ReductionSpec(HostGraph(2, ((0, 1),)), l))


def path_host(n: int) -> HostGraph:
    return HostGraph.from_networkx(nx.path_graph(n))


def cycle_host(n: int) -> HostGraph:
    return HostGraph.from_networkx(nx.cycle_graph(n))


def star_host(n: int) -> HostGraph:
    """頂点数 n のスター（中心 + 葉 n - 1 個）"""
    return HostGraph.from_networkx(nx.star_graph(n - 1))


def random_host(n: int, p: float, seed: int) -> HostGraph:
    return HostGraph.from_networkx(nx.gnp_random_graph(n, p, seed=seed))


def _check_probability(name: str, value: float):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} は [0, 1] の確率です ({name} = {value})")


def random_instance(n: int, p: float, k: int, perturb: float, seed: Optional[int]) -> Instance:
    """
    ランダムな軌跡風インスタンス

    Args:
        n: 頂点数
        p: 基本グラフの辺確率
        k: フレーム数
        perturb: 各フレームで頂点対ごとに基本グラフから反転させる確率
        seed: 乱数シード（同じシードなら同じインスタンス）
    """
    _check_probability("p", p)
    _check_probability("perturb", perturb)
    if n < 0 or k < 1:
        raise ValueError(f"n >= 0, k >= 1 が必要です (n={n}, k={k})")
    rng = np.random.default_rng(seed)
    pairs = list(combinations(range(n), 2))
    base = rng.random(len(pairs)) < p
    frames = []
    for _ in range(k):
        flips = rng.random(len(pairs)) < perturb
        present = base ^ flips
        frames.append([pairs[i] for i in np.flatnonzero(present)])
    return Instance.from_edge_lists(n, frames, [f"frame {t}" for t in range(1, k + 1)])


def random_trajectory(n: int, p: float, frames: int, perturb: float, seed: Optional[int]) -> str:
    """ランダム軌跡を軌跡ファイル形式の文字列で返す"""
    return serialize_trajectory(random_instance(n, p, frames, perturb, seed))


def random_triangle_rich_instance(seed: int, n: int = 6, k: int = 2, keep: float = 0.7) -> Instance:
    """
    全フレームが弦グラフ（γ ≤ 3）のランダムインスタンス

    頂点を順に追加し、既存頂点のクリークに接続する。各フレームは基本のクリークの
    部分集合を使い、フレーム内でクリークでなくなった頂点は貪欲に落とす。
    """
    rng = np.random.default_rng(seed)
    attach: List[List[int]] = [[]]
    adj = [set() for _ in range(n)]
    for v in range(1, n):
        anchor = int(rng.integers(0, v))
        clique = [anchor] + sorted(u for u in adj[anchor] if u < v)
        size = int(rng.integers(1, min(3, len(clique)) + 1))
        chosen = clique[:1] + [int(u) for u in rng.permutation(clique[1:])[:size - 1]]
        # 選んだ頂点どうしが隣接している部分だけ残す
        members: List[int] = []
        for u in chosen:
            if all(u in adj[w] for w in members):
                members.append(u)
        attach.append(members)
        for u in members:
            adj[u].add(v)
            adj[v].add(u)
    frames = []
    for _ in range(k):
        fadj = [set() for _ in range(n)]
        edges = []
        for v in range(1, n):
            subset = [u for u in attach[v] if rng.random() < keep]
            members = []
            for u in subset:
                if all(u in fadj[w] for w in members):
                    members.append(u)
            for u in members:
                fadj[u].add(v)
                fadj[v].add(u)
                edges.append((u, v))
        frames.append(edges)
    return Instance.from_edge_lists(n, frames)


SUBCUBIC_BASES = {
    "cube": nx.hypercube_graph(3),
    "prism": nx.circular_ladder_graph(3),
    "k33": nx.complete_bipartite_graph(3, 3),
    "k4": nx.complete_graph(4),
}


def _relabelled(g: nx.Graph) -> List[Edge]:
    mapping = {v: i for i, v in enumerate(sorted(g.nodes()))}
    return sorted((min(mapping[u], mapping[v]), max(mapping[u], mapping[v])) for u, v in g.edges())


def random_subcubic_instance(seed: int, k: int = 2, drop: float = 0.15) -> Instance:
    """
    部分3正則グラフ（立方体、三角柱、K3,3、K4）から辺をランダムに落としたフレーム列

    γ ≤ 4 になるとは限らないので、使う側で統計を確認すること
    """
    rng = np.random.default_rng(seed)
    names = sorted(SUBCUBIC_BASES)
    base = _relabelled(SUBCUBIC_BASES[names[int(rng.integers(0, len(names)))]])
    n = 1 + max(v for e in base for v in e)
    frames = []
    for _ in range(k):
        frames.append([e for e in base if rng.random() >= drop])
    return Instance.from_edge_lists(n, frames)
