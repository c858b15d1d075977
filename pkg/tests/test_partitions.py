from collections import Counter
from math import prod

import pytest
from hypothesis import given, strategies as st

from severi_fock.partitions import (
    EMPTY,
    Partition,
    WeightedPartition,
    aut_eta,
    aut_size,
    dual,
    enumerate_partitions,
    format_partition,
    m_eta,
    parse_partition,
    partitions_of,
    sub_multisets,
    zfactor,
)

parts = st.lists(st.integers(1, 4), max_size=6).map(Partition)


def test_partition_counts():
    assert [len(partitions_of(n)) for n in range(10)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]
    assert all(p.size == 5 for p in partitions_of(5))


def test_enumerate_small():
    assert enumerate_partitions(0) == [EMPTY]
    assert enumerate_partitions(2) == [EMPTY, Partition((1,)), Partition((2,)), Partition((1, 1))]


def test_zfactor_and_aut():
    assert zfactor(EMPTY) == 1
    assert zfactor(Partition((2, 1, 1))) == 4
    assert zfactor(Partition((3,))) == 3
    assert aut_size(Partition((1, 1, 1))) == 6
    assert aut_size(Partition((2, 1))) == 1


def test_weighted_partitions():
    eta = WeightedPartition(Partition((2, 1, 1)), Partition((3,)))
    assert m_eta(eta) == 6
    assert aut_eta(eta) == 2
    assert m_eta(WeightedPartition(EMPTY, EMPTY)) == 1
    assert m_eta(WeightedPartition(Partition((2,)), Partition((2,)))) == 4
    assert dual(WeightedPartition(Partition((2,)), Partition((1,)))) == \
        WeightedPartition(Partition((1,)), Partition((2,)))


def test_parse_and_format():
    assert parse_partition("2+1+1") == Partition((1, 2, 1))
    assert parse_partition("") == EMPTY
    assert format_partition(Partition((3, 1))) == "3+1"
    with pytest.raises(ValueError):
        parse_partition("2+x")
    with pytest.raises(ValueError):
        Partition((0, 1))


def test_remove_requires_containment():
    p = Partition((2, 1, 1))
    assert p.remove((1,)) == Partition((2, 1))
    with pytest.raises(ValueError):
        p.remove((3,))


@given(parts)
def test_sub_multisets_are_distinct_and_complete(p):
    subs = list(sub_multisets(p))
    assert len(subs) == len(set(subs)) == prod(m + 1 for m in Counter(p).values())
    assert all(p.contains(s) for s in subs)


@given(parts, parts)
def test_union_remove_roundtrip(a, b):
    assert a.union(b).remove(b) == a
    assert parse_partition(format_partition(a)) == a
