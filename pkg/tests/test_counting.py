from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from petlab.counting import (DensitySet, balanced_expansion, balanced_function, count_in_set,
                             count_operator, lacks, naive_count, trivial_count)
from petlab.grid import GridFunction
from petlab.poly_config import Configuration, ConfigurationError
from petlab.polynomials import IntPoly

SQ3AP = Configuration.power(2, [1, 2])

configs = st.builds(
    Configuration.power, st.integers(1, 3),
    st.lists(st.sampled_from([-3, -2, -1, 1, 2, 3]), min_size=1, max_size=3, unique=True))


@st.composite
def sets(draw, n_max=60):
    N = draw(st.integers(1, n_max))
    return DensitySet.from_members(N, draw(st.sets(st.integers(1, N))))


def test_count_examples():
    box9 = GridFunction.box(9)
    assert count_operator([box9] * 3, SQ3AP).value == 8
    assert count_operator([GridFunction.box(3)] * 2, Configuration.power(2, [1])).value == 2
    assert count_operator([box9, GridFunction.zero(), box9], SQ3AP).value == 0


def test_count_rejects_arity():
    with pytest.raises(ValueError):
        count_operator([GridFunction.box(3)] * 2, SQ3AP)


def test_count_in_set_examples():
    assert count_in_set(DensitySet.full(9), SQ3AP) == 8
    assert count_in_set(DensitySet.from_members(9, [1, 2]), SQ3AP) == 0
    odd = DensitySet.from_members(9, range(1, 10, 2))
    assert count_in_set(odd, SQ3AP) >= 1
    assert not lacks(odd, SQ3AP)


def test_trivial_count_examples():
    assert trivial_count(9, SQ3AP) == 8
    assert trivial_count(2, SQ3AP) == 0
    assert trivial_count(10, Configuration.power(1, [1])) == 45


def test_trivial_count_rejects():
    with pytest.raises(ConfigurationError):
        trivial_count(10, Configuration.power(2, [2, 1]))
    with pytest.raises(ConfigurationError):
        trivial_count(10, Configuration.general([IntPoly([0, 1, 1])]))


def test_trivial_count_matches_up_to_100():
    for N in range(1, 101):
        assert trivial_count(N, SQ3AP) == count_in_set(DensitySet.full(N), SQ3AP)


def test_balanced_examples():
    assert balanced_function(DensitySet.from_members(2, [1])) == GridFunction(1, [Fraction(1, 2), Fraction(-1, 2)])
    assert balanced_function(DensitySet.full(7)).is_zero()
    h = Fraction(1, 2)
    assert balanced_function(DensitySet.from_members(4, [1, 4])) == GridFunction(1, [h, -h, -h, h])


def test_expansion_examples():
    full = DensitySet.full(9)
    terms = balanced_expansion(full, SQ3AP)
    assert len(terms) == 8 and sum(t.balanced_slots > 0 for t in terms) == 7
    assert [t.value for t in terms if t.balanced_slots] == [0] * 7
    assert terms[0].label == "ddd" and terms[0].value == 8
    one = balanced_expansion(DensitySet.from_members(2, [1]), Configuration.power(2, [1]))
    assert len(one) == 4 and sum(t.value for t in one) == 0


@settings(max_examples=60, deadline=None)
@given(sets(), configs)
def test_count_matches_naive(A, c):
    fs = [A.indicator()] * (c.n + 1)
    assert count_operator(fs, c).value == naive_count(fs, c, A.N)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.builds(GridFunction, st.integers(-5, 5),
                          st.lists(st.fractions(min_value=-1, max_value=1, max_denominator=3),
                                   max_size=15)), min_size=4, max_size=4),
       configs, st.booleans())
def test_count_operator_rational(funcs, c, both):
    fs = funcs[:c.n + 1]
    # supports lie in [-5, 19] and |P_i(y)| >= |y|, so |y| <= 30 is enough
    assert count_operator(fs, c, both).value == naive_count(fs, c, 30, both)


@settings(max_examples=60, deadline=None)
@given(sets(), configs)
def test_indicator_counts_are_integers(A, c):
    r = count_operator([A.indicator()] * (c.n + 1), c)
    assert r.value.denominator == 1 and r.value >= 0


def test_both_signs_even_power():
    for N in (5, 12, 30):
        A = DensitySet.full(N)
        c = Configuration.power(2, [1, 3])
        assert count_in_set(A, c, both_signs=True) == 2 * count_in_set(A, c)


@settings(max_examples=60, deadline=None)
@given(sets(n_max=40), configs)
def test_expansion_identity(A, c):
    if c.n > 2:
        c = Configuration.power(c.k, c.coefficients[:2])
    terms = balanced_expansion(A, c)
    assert len(terms) == 2 ** (c.n + 1)
    assert sum((t.value for t in terms), Fraction(0)) == count_in_set(A, c)
    dense = next(t for t in terms if t.balanced_slots == 0)
    assert dense.value == A.density ** (c.n + 1) * count_in_set(DensitySet.full(A.N), c)


@given(sets())
def test_balanced_sums_to_zero(A):
    assert balanced_function(A).total() == 0


@settings(max_examples=60, deadline=None)
@given(sets(), st.data(), configs)
def test_monotone_under_inclusion(B, data, c):
    A = DensitySet.from_members(B.N, data.draw(st.sets(st.sampled_from(list(B) or [1]))) & set(B))
    assert A.issubset(B)
    assert count_in_set(A, c) <= count_in_set(B, c)


def test_density_set_basics():
    A = DensitySet.from_members(10, [3, 1, 7])
    assert list(A) == [1, 3, 7] and len(A) == 3 and A.density == Fraction(3, 10)
    assert 3 in A and 4 not in A and 11 not in A
    with pytest.raises(ValueError):
        DensitySet.from_members(5, [6])
