import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from petlab.diophantine import (BohrSpec, PowerProgression, bohr_contains, bohr_power_progression,
                                brute_force_recurrence, iroot, min_power_distance,
                                nearest_int_distance, power_budget, rationalize,
                                simultaneous_power_recurrence, theory_Q)

rats = st.fractions(min_value=-5, max_value=5, max_denominator=200)
unit_rats = st.fractions(min_value=0, max_value=1, max_denominator=500).filter(lambda a: a < 1)


def test_nearest_int_examples():
    assert nearest_int_distance(Fraction(7, 3)) == Fraction(1, 3)
    assert nearest_int_distance(Fraction(-1, 2)) == Fraction(1, 2)
    assert nearest_int_distance(2) == 0


@given(rats)
def test_nearest_int_definition(x):
    d = nearest_int_distance(x)
    assert 0 <= d <= Fraction(1, 2)
    assert d == min(abs(x - m) for m in (math.floor(x), math.ceil(x)))


def test_min_power_examples():
    assert min_power_distance(Fraction(1, 3), 2, 3) == (3, 0)
    assert min_power_distance(Fraction(1, 2), 2, 2) == (2, 0)
    assert min_power_distance(Fraction(5, 7), 2, 6) == (2, Fraction(1, 7))


@settings(max_examples=100)
@given(rats, st.integers(1, 4), st.integers(1, 60))
def test_min_power_is_true_minimum(a, k, Q):
    q, d = min_power_distance(a, k, Q)
    vals = [nearest_int_distance(a * p ** k) for p in range(1, Q + 1)]
    assert d == min(vals) and q == vals.index(d) + 1
    assert min_power_distance(a, k, Q + 1)[1] <= d


def test_recurrence_examples():
    tr = simultaneous_power_recurrence([Fraction(1, 2), Fraction(1, 3)], 2, 36)
    assert tr.steps[0].q == 2 and tr.steps[1].q == 1
    assert tr.q == 2 and tr.max_distance == Fraction(1, 3)
    tr = simultaneous_power_recurrence([0], 3, 50)
    assert tr.q == 1 and tr.max_distance == 0
    # one frequency: a single min_power_distance call with budget Q_1
    tr = simultaneous_power_recurrence([Fraction(1, 3)], 2, 3)
    assert tr.steps[0].budget == 2
    assert (tr.q, tr.max_distance) == min_power_distance(Fraction(1, 3), 2, 2)
    # q = 3 would break q <= Q^(1 - 1/17) ~ 2.81
    assert tr.within_budget() and not (3 ** 17 <= 3 ** 16)
    tr = simultaneous_power_recurrence([Fraction(1, 3)], 2, 9)
    assert tr.q == 3 and tr.max_distance == 0


def test_recurrence_rejects():
    with pytest.raises(ValueError):
        simultaneous_power_recurrence([], 2, 10)
    with pytest.raises(ValueError):
        simultaneous_power_recurrence([Fraction(1, 2)], 2, 0)


def test_power_budget():
    # floor(Q^(k^4 / (k^4 + 1)^i)), never below 1
    assert power_budget(36, 2, 1) == math.floor(36 ** (16 / 17))
    assert power_budget(2, 3, 3) == 1
    for Q in (2, 100, 10 ** 4):
        for i in (1, 2, 3):
            b = power_budget(Q, 2, i)
            assert b >= 1 and b <= Q


@given(st.integers(0, 10 ** 12), st.integers(1, 6))
def test_iroot(x, n):
    r = iroot(x, n)
    assert r ** n <= x < (r + 1) ** n


@settings(max_examples=80, deadline=None)
@given(st.lists(unit_rats, min_size=1, max_size=3), st.integers(1, 3), st.integers(2, 3000))
def test_recurrence_properties(alphas, k, Q):
    tr = simultaneous_power_recurrence(alphas, k, Q)
    assert tr.q <= Q and tr.within_budget()
    assert tr.q == math.prod(s.q for s in tr.steps)
    assert tr.inflation_holds()
    assert all(d <= b for d, b in zip(tr.distances, tr.composed_bounds()))
    _, opt = brute_force_recurrence(alphas, k, Q)
    assert opt <= tr.max_distance


@settings(max_examples=50, deadline=None)
@given(st.lists(unit_rats, min_size=1, max_size=3), st.integers(1, 3), st.integers(1, 200))
def test_brute_force_matches_definition(alphas, k, Q):
    q, d = brute_force_recurrence(alphas, k, Q)
    vals = [max(nearest_int_distance(a * p ** k) for a in alphas) for p in range(1, Q + 1)]
    assert d == min(vals) and q == vals.index(d) + 1


@given(rats, st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_inflation_inequality(alpha, a, b):
    assert nearest_int_distance(alpha * a * b) <= b * nearest_int_distance(alpha * a)


def test_bohr_contains_examples():
    spec = BohrSpec((Fraction(1, 4),), Fraction(3, 10), 100)
    assert bohr_contains(0, spec)
    assert not bohr_contains(2, spec)
    assert bohr_contains(4, spec)
    assert not bohr_contains(52, spec) and bohr_contains(-48, spec) and not bohr_contains(50, spec)


def test_bohr_spec_validation():
    with pytest.raises(ValueError):
        BohrSpec((), Fraction(0), 10)
    with pytest.raises(ValueError):
        BohrSpec((), Fraction(3, 4), 10)
    assert BohrSpec((Fraction(5, 4),), Fraction(1, 4), 10).K == (Fraction(1, 4),)


def test_bohr_progression_examples():
    spec = BohrSpec((Fraction(1, 4),), Fraction(3, 10), 100)
    p = bohr_power_progression(spec, 2, "optimal")
    assert p.q == 2 and p.step == 4 and p.length == 25 and p.L == 12
    for mode in ("theory", "optimal"):
        p = bohr_power_progression(BohrSpec((), Fraction(1, 10), 100), 2, mode)
        assert p.q == 1 and p.L == 49
        p0 = bohr_power_progression(BohrSpec((Fraction(0),), Fraction(1, 10), 100), 2, mode)
        assert (p0.q, p0.L) == (p.q, p.L)


def test_bohr_progression_bad_mode():
    with pytest.raises(ValueError):
        bohr_power_progression(BohrSpec((), Fraction(1, 4), 10), 2, "fastest")


@settings(max_examples=80, deadline=None)
@given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=40), max_size=3),
       st.fractions(min_value=Fraction(1, 100), max_value=Fraction(1, 2), max_denominator=100),
       st.integers(1, 300), st.integers(1, 3), st.sampled_from(["theory", "optimal"]))
def test_bohr_progression_verified(K, eta, N, k, mode):
    spec = BohrSpec(tuple(K), eta, N)
    p = bohr_power_progression(spec, k, mode)
    assert p.step == p.q ** k and p.q >= 1
    assert all(bohr_contains(x, spec) for x in p)
    if mode == "optimal":
        # L is maximal for the returned q
        x = (p.L + 1) * p.step
        assert not bohr_contains(x, spec) or not bohr_contains(-x, spec)


def test_theory_Q_default_constant():
    spec = BohrSpec((Fraction(1, 4),), Fraction(3, 10), 100)
    expo = 1 / (1 + math.exp(-5 * math.log(2)))
    assert theory_Q(spec, 2) == math.ceil((100 / 0.3) ** expo)
    assert theory_Q(spec, 2, C=0) == math.ceil((1000 / 3) ** 0.5)


def test_progression_elements():
    p = PowerProgression(1, 2, 2, 3)
    assert p.elements() == [1, 5, 9]
    s = PowerProgression.symmetric(2, 2, 2)
    assert s.elements() == [-8, -4, 0, 4, 8] and s.L == 2


def test_rationalize():
    assert rationalize(0.25) == Fraction(1, 4)
    assert rationalize(1 / 3, 100) == Fraction(1, 3)
