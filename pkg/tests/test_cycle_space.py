#!/usr/bin/env python3
"""
GF(2) サイクル空間演算のテスト
"""

import pytest
from hypothesis import given, strategies as st

from conftest import dense_gf2_rank, single
from core.cycle_space import (ZERO, Cycle, GF2Basis, canonical_sorted, cycle_from_vertices,
                              cycle_sum, format_cycle, independent,
                              is_cycle, is_elementary, lambda_coefficient, parse_cycle,
                              span_contains, sum_of)
from core.errors import CycleFormatError, DependentSetError, NotSpannedError


def k4_triangles(k4):
    u = k4.universe
    return [cycle_from_vertices(u, t) for t in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))]


def test_weight_and_sum(k4):
    t1, t2, _, _ = k4_triangles(k4)
    assert t1.weight == 3
    square = cycle_sum(t1, t2)
    assert square.weight == 4
    assert (t1 ^ t2) == square
    assert is_cycle(k4.universe, square.bits)


def test_sum_of_all_k4_triangles_is_zero(k4):
    assert sum_of(k4_triangles(k4)) == ZERO
    assert sum_of([]) == ZERO


def test_negative_bits_rejected():
    with pytest.raises(CycleFormatError):
        Cycle(-1)


def test_is_cycle_and_elementary():
    inst = single(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    u = inst.universe
    t1 = cycle_from_vertices(u, (0, 1, 2))
    t2 = cycle_from_vertices(u, (3, 4, 5))
    path = Cycle(u.edge_bit(0, 1) | u.edge_bit(1, 2))
    assert is_cycle(u, t1.bits)
    assert is_elementary(u, t1)
    assert not is_cycle(u, path.bits)
    both = t1 ^ t2
    assert is_cycle(u, both.bits)
    assert not is_elementary(u, both)
    with pytest.raises(CycleFormatError):
        is_elementary(u, ZERO)


def test_bowtie_is_cycle_but_not_elementary():
    # 頂点 2 で2つの三角形が接する（次数4）
    inst = single(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    u = inst.universe
    bowtie = Cycle(u.full_mask())
    assert is_cycle(u, bowtie.bits)
    assert not is_elementary(u, bowtie)


def test_canonical_order(k4):
    triangles = k4_triangles(k4)
    square = triangles[0] ^ triangles[1]
    ordered = canonical_sorted([square] + triangles[::-1])
    assert ordered[-1] == square
    assert [c.edge_ids for c in ordered[:4]] == sorted(c.edge_ids for c in triangles)


def test_basis_rank_and_witness(k4):
    triangles = k4_triangles(k4)
    basis = GF2Basis()
    assert all(basis.add(t) for t in triangles[:3])
    assert basis.rank == 3
    assert not basis.add(triangles[3])
    assert basis.rank == 3
    contained, witness = basis.contains(triangles[3])
    assert contained
    assert set(c.bits for c in witness) == set(t.bits for t in triangles[:3])
    assert sum_of(witness) == triangles[3]


def test_basis_rejects_zero():
    with pytest.raises(CycleFormatError):
        GF2Basis().add(ZERO)


def test_basis_copy_is_independent(k4):
    t = k4_triangles(k4)
    basis = GF2Basis(t[:2])
    clone = basis.copy()
    clone.add(t[2])
    assert basis.rank == 2
    assert clone.rank == 3


def test_span_contains(k4):
    t = k4_triangles(k4)
    basis = GF2Basis(t[:2])
    assert span_contains(basis, t[0] ^ t[1])
    result = span_contains(basis, t[2])
    assert not result
    assert result.witness == ()


def test_independent(k4):
    t = k4_triangles(k4)
    assert independent(t[:3])
    assert not independent(t)
    assert not independent([t[0], t[0]])
    assert not independent([ZERO])
    assert independent([])


def test_lambda_coefficient(k4):
    t = k4_triangles(k4)
    basis = t[:3]
    for c in basis:
        assert lambda_coefficient(basis, c, t[3]) == 1
    assert lambda_coefficient(basis, t[0], t[1] ^ t[2]) == 0
    assert lambda_coefficient(basis, t[1], t[1] ^ t[2]) == 1


def test_lambda_coefficient_errors(k4):
    t = k4_triangles(k4)
    with pytest.raises(ValueError):
        lambda_coefficient(t[:2], t[2], t[0])
    with pytest.raises(NotSpannedError):
        lambda_coefficient(t[:2], t[0], t[2])
    with pytest.raises(DependentSetError):
        lambda_coefficient(t, t[0], t[1])


def test_format_cycle(k4):
    u = k4.universe
    t = cycle_from_vertices(u, (2, 0, 1))
    assert format_cycle(u, t) == "c 1 2 1 3 2 3"
    assert parse_cycle(u, "c 2 3 1 2 3 1") == t


@pytest.mark.parametrize("text", [
    "1 2 2 3 1 3",        # 'c' がない
    "c 1 2 2",            # 端点が奇数個
    "c 1 2 2 x",          # 整数でない
    "c 1 2 2 5",          # ユニバース外の辺
    "c 1 2 1 2",          # 重複辺
    "c 1 2 2 3",          # 次数が奇数
    "c",                  # 空
])
def test_parse_cycle_errors(k4, text):
    with pytest.raises(CycleFormatError):
        parse_cycle(k4.universe, text)


def test_parse_cycle_without_cycle_check(k4):
    path = parse_cycle(k4.universe, "c 1 2 2 3", require_cycle=False)
    assert path.weight == 2


@given(st.lists(st.integers(1, (1 << 10) - 1), max_size=8))
def test_dense_rank_matches_incremental_basis(vectors):
    basis = GF2Basis()
    for v in vectors:
        basis.add(Cycle(v))
    assert dense_gf2_rank(vectors, 10) == basis.rank


@given(st.lists(st.integers(1, (1 << 8) - 1), min_size=1, max_size=6), st.integers(0, (1 << 8) - 1))
def test_reduce_witness_sums_to_target(vectors, target):
    basis = GF2Basis(Cycle(v) for v in vectors)
    contained, witness = basis.contains(Cycle(target))
    if contained:
        assert sum_of(witness).bits == target
    else:
        assert basis.reduce(target)[0] != 0
