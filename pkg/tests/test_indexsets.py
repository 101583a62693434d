from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lacunary.errors import BoundExceeded, ConfigError
from lacunary.indexsets import (
    ALL,
    EVENS,
    Complement,
    Explicit,
    Intervals,
    Primes,
    Progression,
    Union,
    coefficient_level_set,
    count_upto,
    density_profile,
    from_spec,
    parse_set,
    partial_sumset,
    sumset,
)

SQUARES = Explicit([k * k for k in range(40)], bound=1521)


def brute_sum(xs, ys, bound):
    return sorted({x + y for x in xs for y in ys if x + y <= bound})


def brute_partial(xs, ys, bound):
    return sorted({xs[i] + ys[j] for i in range(len(xs)) for j in range(len(ys))
                   if i < j and xs[i] + ys[j] <= bound})


def test_sumset_examples():
    assert sumset(EVENS, Explicit([1]), 10).members_upto(10) == [1, 3, 5, 7, 9]
    b = Progression(2, 3)
    assert sumset(Explicit([0]), b, 30).members_upto(30) == b.members_upto(30)
    expected = brute_sum(SQUARES.members_upto(10), SQUARES.members_upto(10), 10)
    assert expected == [0, 1, 2, 4, 5, 8, 9, 10]
    assert sumset(SQUARES, SQUARES, 10).members_upto(10) == expected


def test_sumset_bound():
    s = sumset(EVENS, Explicit([1]), 10)
    with pytest.raises(BoundExceeded, match="bound exceeded"):
        s.contains(11)
    with pytest.raises(BoundExceeded, match="bound exceeded"):
        sumset(SQUARES, ALL, 2000)


def test_partial_sumset_examples():
    assert partial_sumset(ALL, ALL, 5).members_upto(5) == [1, 2, 3, 4, 5]
    assert partial_sumset(Progression(5, 5), Explicit([1, 2]), 10).members_upto(10) == [7]
    assert partial_sumset(EVENS, EVENS, 8).members_upto(8) == [2, 4, 6, 8]


def test_partial_witnesses():
    s = partial_sumset(ALL, ALL, 5)
    # 4 = a_i + b_j needs i + j = 6 with i < j; the smallest such j is 4
    i, j = s.witness(4)
    assert i < j and (i - 1) + (j - 1) == 4
    assert (i, j) == (2, 4)
    with pytest.raises(KeyError):
        s.witness(0)


def test_count_examples():
    assert count_upto(EVENS, 10) == 6
    assert count_upto(Primes(100), 10) == 4
    assert count_upto(Explicit([]), 100) == 0


def test_density_examples():
    prof = density_profile(Progression(0, 3), [9])
    assert prof.checkpoints[0][2] == Fraction(4, 9)
    for x in (1, 7, 100):
        assert density_profile(ALL, [x]).checkpoints[0][2] == Fraction(x + 1, x)
    assert prof.to_dict() == {"checkpoints": [{"x": 9, "count": 4, "ratio": "4/9"}]}


def test_level_set_examples():
    assert coefficient_level_set([(0, 1), (1, 5), (2, 0), (3, 0)], 1, 3).members_upto(3) == [0, 2, 3]
    with pytest.raises(ConfigError, match="incomplete stream"):
        coefficient_level_set([(0, 1), (2, 0), (3, 0)], 1, 3)
    with pytest.raises(ConfigError, match="incomplete stream"):
        coefficient_level_set([(0, 1)], 1, 3)
    with pytest.raises(ValueError):
        coefficient_level_set([(0, 1)], None, 0)


def test_primes_against_trial_division():
    expected = [n for n in range(2, 500) if all(n % d for d in range(2, int(n ** 0.5) + 1))]
    assert Primes(499).members_upto(499) == expected


def test_parse_shorthand():
    assert parse_set("odds").members_upto(7) == [1, 3, 5, 7]
    assert parse_set("list:1,4,9").members_upto(20) == [1, 4, 9]
    assert parse_set("primes:30").count_upto(30) == 10
    assert parse_set("ap:1:4").members_upto(13) == [1, 5, 9, 13]
    assert parse_set("sumset(evens; list:1; 10)").members_upto(10) == [1, 3, 5, 7, 9]
    assert parse_set("partial(all; all; 5)").members_upto(5) == [1, 2, 3, 4, 5]
    nested = parse_set('{"kind":"sumset","a":{"kind":"progression","offset":0,"step":2},"b":{"kind":"list","elements":[1]},"bound":10}')
    assert nested.members_upto(10) == [1, 3, 5, 7, 9]
    with pytest.raises(ConfigError):
        parse_set("bogus")
    with pytest.raises(ConfigError):
        parse_set("sumset(all; all)")


def test_spec_round_trip():
    for s in (EVENS, Primes(50), Explicit([2, 3], bound=10), sumset(EVENS, EVENS, 20),
              partial_sumset(ALL, EVENS, 12), Union([EVENS, Explicit([3])]),
              Complement(EVENS, 20), Intervals([(2, 4), (9, 9)])):
        t = from_spec(s.to_spec())
        x = 20 if s.bound is None else s.bound
        assert t.members_upto(x) == s.members_upto(x)


small_sets = st.lists(st.integers(0, 60), max_size=25).map(lambda xs: Explicit(xs, bound=60))


@given(small_sets, small_sets, st.integers(0, 60))
def test_sumset_commutative_and_oracle(a, b, x):
    ab = sumset(a, b, 60)
    assert ab.members_upto(x) == sumset(b, a, 60).members_upto(x)
    assert ab.members_upto(x) == brute_sum(a.elements, b.elements, x)
    # membership before materialization agrees with the bitset
    fresh = sumset(a, b, 60)
    assert [n for n in range(x + 1) if fresh.contains(n)] == ab.members_upto(x)


@given(small_sets, small_sets, small_sets)
def test_sumset_monotone(a, extra, b):
    bigger = Explicit(a.elements + extra.elements, bound=60)
    assert set(sumset(a, b, 60).members_upto(60)) <= set(sumset(bigger, b, 60).members_upto(60))


@given(small_sets, small_sets, st.integers(0, 60))
def test_partial_inside_sumset(a, b, x):
    p = partial_sumset(a, b, 60)
    got = p.members_upto(x)
    assert got == brute_partial(a.elements, b.elements, x)
    assert set(got) <= set(sumset(a, b, 60).members_upto(x))
    fresh = partial_sumset(a, b, 60)
    for n in got:
        i, j = fresh.witness(n)
        assert i < j and a.nth(i) + b.nth(j) == n


specs = st.one_of(
    st.builds(Progression, st.integers(0, 20), st.integers(1, 12)),
    st.builds(Primes, st.just(2000)),
    small_sets.map(lambda s: Explicit(s.elements)),
    st.builds(lambda a, b: sumset(a, b, 60), small_sets, small_sets),
    st.builds(lambda a, b: partial_sumset(a, b, 60), small_sets, small_sets),
    st.builds(lambda s: Union([s, Progression(1, 7)]), small_sets),
    st.builds(lambda s: Complement(s, 60), small_sets),
)


@given(specs, st.integers(0, 2000))
def test_count_matches_membership_scan(s, x):
    if s.bound is not None:
        x = min(x, s.bound)
    assert s.count_upto(x) == sum(1 for n in range(x + 1) if s.contains(n))
    members = s.members_upto(x)
    assert all(u < v for u, v in zip(members, members[1:]))


@given(st.integers(0, 30), st.integers(1, 30), st.lists(st.integers(1, 10 ** 4), min_size=1, max_size=8))
def test_progression_density_converges(offset, step, xs):
    prof = density_profile(Progression(offset, step), sorted(xs))
    counts = [c for _, c, _ in prof.checkpoints]
    assert counts == sorted(counts)
    for x, _, ratio in prof.checkpoints:
        assert abs(ratio - Fraction(1, step)) <= Fraction(2, x) + Fraction(offset, x)
        if offset < step:
            assert abs(ratio - Fraction(1, step)) <= Fraction(2, x)
