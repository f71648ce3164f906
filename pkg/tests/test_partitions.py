# -*- coding: utf-8 -*-
from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf

from hypergeometric.partitions import Partition, PartitionTools


def test_enumeration_small():
    assert PartitionTools.partitions_up_to(0, 4) == [Partition()]
    parts = [p.parts for p in PartitionTools.partitions_up_to(2, 2)]
    assert parts == [(), (1,), (2,), (1, 1)]


def test_enumeration_counts():
    # p(0..6) = 1, 1, 2, 3, 5, 7, 11
    assert len(PartitionTools.partitions_up_to(6, 6)) == 30
    assert len(PartitionTools.partitions_up_to(5, 5)) == 19
    assert len(PartitionTools.partitions_of(6, 2)) == 4
    assert [p.parts for p in PartitionTools.partitions_of(3, 3)] == [(3,), (2, 1), (1, 1, 1)]


def test_enumeration_is_unique():
    found = PartitionTools.partitions_up_to(7, 3)
    assert len(found) == len(set(found))
    assert all(p.length <= 3 for p in found)


def test_partition_validation():
    assert Partition(parts=(2, 1, 0, 0)).parts == (2, 1)
    with pytest.raises(ValueError):
        Partition(parts=(1, 2))
    with pytest.raises(ValueError):
        Partition(parts=(2, -1))


def test_conjugate_round_trip():
    for kappa in PartitionTools.partitions_up_to(6, 6):
        assert kappa.conjugate().conjugate() == kappa
        assert kappa.conjugate().weight == kappa.weight
    assert Partition(parts=(3, 1)).conjugate().parts == (2, 1, 1)


@pytest.mark.parametrize("parts, expected", [((), 1), ((1,), 1), ((2, 1), 3), ((3, 2), 24), ((2, 2), 12)])
def test_hook_product(parts, expected):
    assert PartitionTools.hook_product(Partition(parts=parts)) == expected


def test_gen_pochhammer(ctx):
    a = mpc("0.7", "0.2")
    assert PartitionTools.gen_pochhammer(a, Partition(), ctx=ctx) == 1
    assert PartitionTools.gen_pochhammer(a, Partition(parts=(1,)), ctx=ctx) == a
    assert abs(PartitionTools.gen_pochhammer(a, Partition(parts=(1, 1)), ctx=ctx) - a * (a - 1)) < mpf(10) ** -55
    expected = a * (a + 1) * (a - 1)
    assert abs(PartitionTools.gen_pochhammer(a, Partition(parts=(2, 1)), ctx=ctx) - expected) < mpf(10) ** -55
    assert PartitionTools.gen_pochhammer(1, Partition(parts=(1, 1, 1)), ctx=ctx) == 0


def _jacobi_trudi(kappa: Partition, t, N: int):
    """s_κ = det[h_{κ_i - i + j}]，h_k(t,…,t) = C(N+k-1, k) t^k"""
    size = kappa.length
    if size == 0:
        return mpc(1)
    matrix = mp.matrix(size, size)
    for i in range(size):
        for j in range(size):
            k = kappa.parts[i] - i + j
            matrix[i, j] = 0 if k < 0 else mp.binomial(N + k - 1, k) * t ** k
    return mp.det(matrix)


def test_schur_equal_args(ctx):
    t = mpc("0.4", "0.3")
    assert abs(PartitionTools.schur_equal_args(Partition(parts=(1,)), t, 3, ctx=ctx) - 3 * t) < mpf(10) ** -55
    assert PartitionTools.schur_equal_args(Partition(parts=(2,)), 1, 2, ctx=ctx) == 3
    assert PartitionTools.schur_equal_args(Partition(parts=(1, 1, 1)), t, 2, ctx=ctx) == 0
    for N in range(1, 5):
        for kappa in PartitionTools.partitions_up_to(6, N):
            value = PartitionTools.schur_equal_args(kappa, t, N, ctx=ctx)
            assert abs(value - _jacobi_trudi(kappa, t, N)) < mpf(10) ** -45


def test_hook_content_ratio():
    assert PartitionTools.hook_content_ratio(Partition(parts=(2,)), 2) == Fraction(3)
    assert PartitionTools.hook_content_ratio(Partition(parts=(2, 1)), 3) == Fraction(8)
    assert PartitionTools.hook_content_ratio(Partition(parts=(1, 1, 1)), 2) == 0
