import pytest
from hypothesis import given, strategies as st

from gtpoly.partition import (
    MultiplicityVector,
    Partition,
    PartitionError,
    aut_order_formula,
    compositions,
    diameter_formula,
    dimension,
    is_reverse_symmetric,
    normalize,
    parse_mv,
    parse_partition,
    reverse,
)

mvs = st.lists(st.integers(1, 4), min_size=1, max_size=6).map(MultiplicityVector.of)


def MV(*a):
    return MultiplicityVector.of(a)


def test_parse_plain_and_caret():
    assert parse_partition("1,2,3").parts == (1, 2, 3)
    assert parse_partition("1^2,2^1,4^2,7^3,8^1").parts == (1, 1, 2, 4, 4, 7, 7, 7, 8)
    assert parse_partition(" 2 ^ 3 ").parts == (2, 2, 2)


@pytest.mark.parametrize("text,fragment", [
    ("3,2,1", "decreasing"),
    ("1,x", "malformed"),
    ("0,1", "non-positive"),
    ("1^0", "non-positive"),
    ("", "empty"),
    ("1,,2", "malformed"),
])
def test_parse_errors_name_the_token(text, fragment):
    with pytest.raises(PartitionError, match=fragment):
        parse_partition(text)


def test_partition_invariants():
    with pytest.raises(PartitionError):
        Partition(())
    with pytest.raises(PartitionError):
        Partition((2, 1))
    with pytest.raises(PartitionError):
        MultiplicityVector((1, 0))


def test_normalize_examples():
    assert normalize(Partition((1, 1, 2, 4, 4))) == MV(2, 1, 2)
    assert normalize(Partition((1, 2, 3))) == MV(1, 1, 1)
    assert normalize(Partition((5, 5, 5))) == MV(3)


def test_reverse_and_symmetry_examples():
    assert reverse(MV(2, 1, 2)) == MV(2, 1, 2)
    assert reverse(MV(1, 2, 3)) == MV(3, 2, 1)
    assert reverse(MV(2, 1, 2, 3, 1)) == MV(1, 3, 2, 1, 2)
    assert is_reverse_symmetric(MV(1, 1, 1))
    assert not is_reverse_symmetric(MV(2, 1, 2, 3, 1))
    assert is_reverse_symmetric(MV(2, 3, 3, 2))


def test_prefix_sums():
    mv = MV(2, 1, 2, 3, 1)
    assert mv.prefix_sums == (0, 2, 3, 5, 8, 9)
    assert (mv.n, mv.m, mv.a(0), mv.a(4)) == (9, 5, 0, 3)


def test_dimension_examples():
    assert dimension(MV(1, 1, 1)) == 3
    assert dimension(MV(3)) == 0
    assert dimension(MV(2, 2)) == 4


def test_diameter_formula_examples():
    assert diameter_formula(MV(1, 1, 1)) == 2
    assert diameter_formula(MV(2, 1, 2, 3, 1)) == 7
    assert diameter_formula(MV(1, 1)) == 0  # the segment; see known exceptions
    assert diameter_formula(MV(4)) == 0


def test_aut_order_formula_examples():
    assert aut_order_formula(MV(1, 1, 1)) == 4
    assert aut_order_formula(MV(2, 2)) == 16
    assert aut_order_formula(MV(2, 2, 2)) == 16
    assert aut_order_formula(MV(3, 3)) == 32
    assert aut_order_formula(MV(2, 1, 2)) == 4
    assert aut_order_formula(MV(5)) == 1
    # simplex cases: (d+1)!
    assert aut_order_formula(MV(1, 2)) == 6
    assert aut_order_formula(MV(1, 1)) == 2


def test_compositions_count():
    for n in range(1, 8):
        assert len(compositions(n)) == 2 ** (n - 1)


def test_parse_mv():
    assert parse_mv("1^2,2,3^2,4^3,5") == MV(2, 1, 2, 3, 1)


@given(mvs)
def test_formulas_palindromic(mv):
    r = reverse(mv)
    assert dimension(mv) == dimension(r)
    assert diameter_formula(mv) == diameter_formula(r)
    assert aut_order_formula(mv) == aut_order_formula(r)


@given(mvs)
def test_label_round_trip(mv):
    assert parse_mv(mv.label()) == mv
    assert normalize(mv.as_partition()) == mv


@given(mvs)
def test_reverse_values_commutes_with_normalize(mv):
    # values 1..m reversed and re-sorted: v -> m + 1 - v
    parts = sorted(mv.m + 1 - v for v in mv.as_partition().parts)
    assert normalize(Partition(tuple(parts))) == reverse(mv)
