from hypothesis import given
from hypothesis import strategies as st

from matbeta.partitions import conjugate, enumerate_partitions, is_partition, partition_array
from oracles import brute_partitions, partition_count


def test_small_cases():
    assert enumerate_partitions(0, 3) == [()]
    assert enumerate_partitions(3, 2) == [(3,), (2, 1)]
    assert len(enumerate_partitions(8, 4)) == 15


def test_count_matches_recurrence():
    for k in range(21):
        assert len(enumerate_partitions(k, k if k else 1)) == partition_count(k)


@given(st.integers(0, 12), st.integers(1, 6))
def test_matches_brute_force(k, m):
    parts = enumerate_partitions(k, m)
    assert len(parts) == len(set(parts))
    assert set(parts) == brute_partitions(k, m)
    assert all(sum(p) == k and len(p) <= m and is_partition(p) for p in parts)


@given(st.integers(1, 15), st.integers(1, 5))
def test_reverse_lexicographic(k, m):
    parts = enumerate_partitions(k, m)
    assert parts == sorted(parts, reverse=True)


def test_array_form():
    arr = partition_array(4, 3)
    assert arr.tolist() == [[4, 0, 0], [3, 1, 0], [2, 2, 0], [2, 1, 1]]


def test_conjugate_examples():
    assert conjugate((3,)) == (1, 1, 1)
    assert conjugate((2, 1)) == (2, 1)
    assert conjugate(()) == ()


@given(st.integers(0, 12).flatmap(lambda k: st.sampled_from(enumerate_partitions(k, k or 1))))
def test_conjugate_involution(kappa):
    assert conjugate(conjugate(kappa)) == kappa
    assert sum(conjugate(kappa)) == sum(kappa)
