from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from petlab.counting import DensitySet, balanced_function, count_in_set
from petlab.diophantine import PowerProgression
from petlab.grid import GridFunction
from petlab.increment import (density_iteration, exhaustive_increment_oracle, find_power_increment,
                              local_von_neumann_probe, partition_increment, rescale)
from petlab.poly_config import Configuration, ConfigurationError
from petlab.polynomials import IntPoly
from petlab.verify import SplitMix64, random_lacking_set

SQ3AP = Configuration.power(2, [1, 2])


@st.composite
def sets(draw, n_max=80):
    N = draw(st.integers(1, n_max))
    return DensitySet.from_members(N, draw(st.sets(st.integers(1, N))))


def test_increment_examples():
    odd = DensitySet.from_members(10, range(1, 11, 2))
    inc = find_power_increment(odd, 2, 3)
    assert inc.progression.elements() == [1, 5, 9]
    assert inc.relative_density == 1 and inc.increment == Fraction(1, 2)
    assert find_power_increment(DensitySet.full(12), 2) is None
    assert find_power_increment(DensitySet(12), 2) is None


def test_increment_rejects_min_len():
    with pytest.raises(ValueError):
        find_power_increment(DensitySet.full(3), 1, 0)


@settings(max_examples=150, deadline=None)
@given(sets(), st.integers(1, 3), st.integers(1, 5))
def test_increment_matches_oracle(A, k, m):
    got = find_power_increment(A, k, m)
    want = exhaustive_increment_oracle(A, k, m)
    if want is None:
        assert got is None
        return
    p = got.progression
    assert (p.start, p.q, p.length, got.hits, got.relative_density) == want
    assert 1 <= p.start and p.elements()[-1] <= A.N and p.length >= m
    assert got.hits == sum(x in A for x in p)


def test_rescale_definition():
    A = DensitySet.from_members(20, [1, 5, 9, 13, 6])
    B = rescale(A, PowerProgression(1, 2, 2, 5))
    assert B.N == 5 and list(B) == [1, 2, 3, 4]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(3, 120), st.integers(1, 3), st.data())
def test_rescale_preserves_lacking(seed, N, k, data):
    c = Configuration.power(k, [1, 2])
    A = random_lacking_set(SplitMix64(seed), N, c)
    q = data.draw(st.integers(1, 3))
    a = data.draw(st.integers(1, N))
    L = data.draw(st.integers(1, (N - a) // q ** k + 1))
    assert count_in_set(A, c) == 0
    assert count_in_set(rescale(A, PowerProgression(a, q, k, L)), c) == 0


def test_partition_examples():
    pick = partition_increment(GridFunction(1, [1, -1]), [[1], [2]])
    assert (pick.index, pick.piece_sum) == (0, 1)
    h = Fraction(1, 2)
    assert partition_increment(GridFunction(1, [h, -h, -h, h]), [[1, 2], [3, 4]]) is None
    pick = partition_increment(GridFunction(1, [1, 1, -2]), [[1, 2], [3]])
    assert (pick.index, pick.piece_sum) == (0, 2)


def test_partition_rejects():
    with pytest.raises(ValueError):
        partition_increment(GridFunction(1, [1, 1]), [[1], [2]])
    with pytest.raises(ValueError):
        partition_increment(GridFunction(1, [1, -1]), [[1, 2], [2]])
    with pytest.raises(ValueError):
        partition_increment(GridFunction(1, [1, -1]), [[1]])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=1,
                max_size=40), st.data())
def test_partition_share(raw, data):
    N = len(raw)
    mean = sum(raw, Fraction(0)) / N
    f = GridFunction(1, [v - mean for v in raw])
    cuts = sorted(data.draw(st.sets(st.integers(2, N), max_size=N))) if N > 1 else []
    bounds = [1] + cuts + [N + 1]
    pieces = [list(range(a, b)) for a, b in zip(bounds, bounds[1:])]
    theta = sum(abs(sum((f(x) for x in p), Fraction(0))) for p in pieces) / N
    pick = partition_increment(f, pieces)
    if theta:
        assert pick is not None and pick.piece_sum >= theta / 2 * pick.size
    else:
        assert pick is None


def test_iteration_examples():
    empty = density_iteration(DensitySet(20), SQ3AP)
    assert len(empty.entries) == 1 and empty.stop_reason == "no increment"
    full = density_iteration(DensitySet.full(20), SQ3AP)
    assert full.stop_reason == "contains configuration" and not full.entries[0].lacks


def test_iteration_on_maximal_set_in_20():
    # largest square-3AP-free subsets of [20] have 12 elements (exhaustive search)
    A = DensitySet.from_members(20, [1, 3, 4, 6, 8, 9, 11, 13, 14, 16, 18, 19])
    assert count_in_set(A, SQ3AP) == 0
    tr = density_iteration(A, SQ3AP)
    assert tr.strictly_increasing()
    assert all(e.lacks for e in tr.entries)
    assert len(tr.entries) >= 2 or tr.stop_reason == "no increment"


def test_iteration_rejects_general_form():
    with pytest.raises(ConfigurationError):
        density_iteration(DensitySet.full(5), Configuration.general([IntPoly([0, 1, 1])]))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(3, 60), st.integers(1, 3))
def test_iteration_invariants(seed, N, min_len):
    A = random_lacking_set(SplitMix64(seed), N, SQ3AP)
    tr = density_iteration(A, SQ3AP, min_len)
    assert tr.strictly_increasing()
    for e in tr.entries:
        B = DensitySet.from_members(e.N, e.members)
        assert e.lacks and count_in_set(B, SQ3AP) == 0 and B.density == e.density
    assert tr.stop_reason in {"no increment", "N below min_len", "max_steps"}


def test_probe_all_ones():
    r = local_von_neumann_probe([GridFunction.box(60)] * 3, SQ3AP, 60, 3, 3)
    assert r.experimental and r.count > 0 and r.lhs_float > 0 and r.rhs_float > 0
    assert r.local_sum_bounds[0] <= r.local_sum_bounds[1]
    assert r.H_used >= 3 and r.M >= r.H_used


def test_probe_zero_last():
    fs = [GridFunction.box(60)] * 2 + [GridFunction.zero()]
    r = local_von_neumann_probe(fs, SQ3AP, 60, 4, 2)
    assert r.count == 0 and r.rhs_float == 0


def test_probe_balanced_smoke():
    A = DensitySet.from_members(60, [x for x in range(1, 61) if (x * 7) % 5 < 3])
    f = balanced_function(A)
    r = local_von_neumann_probe([f] * 3, SQ3AP, 60, 3, 2)
    assert r.to_json()["experimental"] is True
