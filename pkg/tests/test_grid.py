from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from petlab.grid import GridFunction, interval_points

vals = st.dictionaries(st.integers(-20, 20), st.fractions(max_denominator=7), max_size=12)


def test_trimming_and_access():
    f = GridFunction(5, [0, 0, 1, Fraction(1, 2), 0])
    assert (f.lo, f.hi, f.width) == (7, 8, 2)
    assert f(7) == 1 and f(6) == 0 and f(100) == 0
    z = GridFunction(3, [0, 0])
    assert z.is_zero() and z.width == 0 and z == GridFunction.zero()


def test_constructors():
    assert GridFunction.box(3).support() == [1, 2, 3]
    assert GridFunction.interval(-1, 1, 2).total() == 6
    assert GridFunction.interval(3, 2).is_zero()
    assert GridFunction.indicator([4, 1]).support() == [1, 4]


def test_one_bounded():
    assert GridFunction(0, [1, -1, Fraction(1, 2)]).is_one_bounded()
    with pytest.raises(ValueError):
        GridFunction(0, [2]).check_one_bounded()


@given(vals, vals)
def test_pointwise_ops(a, b):
    f, g = GridFunction.from_dict(a), GridFunction.from_dict(b)
    for x in range(-25, 26):
        assert (f + g)(x) == f(x) + g(x)
        assert (f - g)(x) == f(x) - g(x)
        assert (f * g)(x) == f(x) * g(x)


@given(vals, st.integers(-30, 30), st.integers(-30, 30))
def test_translate_and_delta(a, t, h):
    f = GridFunction.from_dict(a)
    for x in range(-25, 26):
        assert f.translate(t)(x) == f(x + t)
        assert f.delta(h)(x) == f(x + h) * f(x)


@given(vals, st.integers(-20, 20), st.integers(-20, 20))
def test_restrict(a, lo, hi):
    f = GridFunction.from_dict(a)
    r = f.restrict_interval(lo, hi)
    assert r == f.restrict(range(lo, hi + 1))
    assert all(lo <= x <= hi for x in r.support())


@given(vals)
def test_dict_round_trip(a):
    f = GridFunction.from_dict(a)
    assert GridFunction.from_dict(f.to_dict()) == f
    assert f.total() == sum(a.values(), Fraction(0))


def test_interval_points():
    assert interval_points((3, 2)) == [4, 5]
    assert interval_points(range(1, 4)) == [1, 2, 3]
    assert interval_points({5, 2}) == [2, 5]
