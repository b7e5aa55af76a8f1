#!/usr/bin/env python3
"""
テスト共通のフィクスチャとhypothesis戦略
"""

import sys
from itertools import combinations
from pathlib import Path

import networkx as nx
import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

# プロジェクトルートパスを追加
project_root = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(project_root))

from core.graph_core import Instance  # noqa: E402
from utils.instances import ReductionSpec, conn_gadget, path_host, stable_set_instance  # noqa: E402

settings.register_profile(
    "mcbi",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("mcbi")


def single(n, edges, name=None):
    """グラフ1つ（k = 1）のインスタンス"""
    return Instance.from_edge_lists(n, [edges], [name] if name else None)


def from_networkx(*graphs):
    """networkxグラフ（頂点は 0..n-1 に振り直す）からインスタンスを作る"""
    nodes = sorted(set().union(*(g.nodes() for g in graphs)))
    mapping = {v: i for i, v in enumerate(nodes)}
    lists = [[(mapping[u], mapping[v]) for u, v in g.edges()] for g in graphs]
    return Instance.from_edge_lists(len(nodes), lists)


def cyclomatic(n, edges):
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    return g.number_of_edges() - n + nx.number_connected_components(g)


def dense_gf2_rank(vectors, width):
    """numpy の 0/1 行列を行簡約した GF(2) ランク（増分基底との照合用）"""
    if not vectors or width == 0:
        return 0
    mat = np.array([[(v >> j) & 1 for j in range(width)] for v in vectors], dtype=np.uint8)
    rank = 0
    for col in range(width):
        rows = np.flatnonzero(mat[rank:, col])
        if rows.size == 0:
            continue
        pivot = rank + int(rows[0])
        mat[[rank, pivot]] = mat[[pivot, rank]]
        below = np.flatnonzero(mat[:, col])
        for r in below[below != rank]:
            mat[r] ^= mat[rank]
        rank += 1
        if rank == len(vectors):
            break
    return rank


def trim_to_dimension(n, edges, max_nu):
    """ν ≤ max_nu になるまで末尾の辺を落とす"""
    edges = list(edges)
    while edges and cyclomatic(n, edges) > max_nu:
        edges.pop()
    return edges


@st.composite
def small_graphs(draw, min_n=3, max_n=6, max_nu=5):
    """ν ≤ max_nu の小さな単純グラフ（k = 1 のインスタンス）"""
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=n - 1, max_size=len(pairs)))
    return single(n, trim_to_dimension(n, edges, max_nu))


@st.composite
def small_instances(draw, min_k=1, max_k=3, max_n=6, max_nu=5):
    """共通部分の ν ≤ max_nu になる k グラフのインスタンス"""
    n = draw(st.integers(3, max_n))
    k = draw(st.integers(min_k, max_k))
    pairs = list(combinations(range(n), 2))
    core = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=n - 1, max_size=len(pairs)))
    core = trim_to_dimension(n, core, max_nu)
    lists = []
    for _ in range(k):
        extra = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=4))
        lists.append(sorted(set(core) | set(extra)))
    return Instance.from_edge_lists(n, lists)


@pytest.fixture
def triangle():
    return single(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def k4():
    return from_networkx(nx.complete_graph(4))


@pytest.fixture
def c4():
    return from_networkx(nx.cycle_graph(4))


@pytest.fixture
def diamond():
    """C4 (0-1-2-3) + 弦 (0, 2)"""
    return single(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])


@pytest.fixture
def cube():
    return from_networkx(nx.hypercube_graph(3))


@pytest.fixture
def prism():
    return from_networkx(nx.circular_ladder_graph(3))


@pytest.fixture
def conn4():
    return conn_gadget(4)


@pytest.fixture
def conn5():
    return conn_gadget(5)


@pytest.fixture
def p3_instance():
    """P3 ホスト（辺ごと、l = 4）の帰着インスタンス: k = 2、最適値 2"""
    return stable_set_instance(ReductionSpec(path_host(3), 4))
