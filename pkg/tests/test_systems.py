from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from meanlab.configs import Periodic, SeededRandom, translate
from meanlab.group import Window
from meanlab.systems import (
    SFT,
    CylinderSet,
    FullShift,
    PeriodicOrbit,
    cylinder_nonempty,
    distance,
    pattern_count,
    transitivity_check,
)
from meanlab.zoo import system


def brute_sft_words(A, n):
    k = A.shape[0]
    return sum(all(A[w[i], w[i + 1]] for i in range(n - 1)) for w in product(range(k), repeat=n))


@pytest.mark.parametrize("k,n", [(2, 1), (2, 6), (3, 4)])
def test_full_shift_counts(k, n):
    assert pattern_count(FullShift(k), Window.interval(0, n)) == k**n


def test_golden_counts_are_fibonacci():
    X = system("sft:golden")
    fib = [2, 3]
    while len(fib) < 20:
        fib.append(fib[-1] + fib[-2])
    assert [pattern_count(X, Window.interval(0, n)) for n in range(1, 21)] == fib


@given(st.lists(st.lists(st.integers(0, 1), min_size=3, max_size=3), min_size=3, max_size=3), st.integers(1, 6))
def test_sft_counts_match_brute_force_on_essential_part(rows, n):
    A = np.array(rows)
    X = SFT(A, "random")
    ess = sorted(X.essential)
    B = A[np.ix_(ess, ess)]
    # only symbols on bi-infinite paths occur in the shift
    expect = brute_sft_words(B, n) if ess else 0
    assert pattern_count(X, Window.interval(0, n)) == expect


def test_sturmian_complexity():
    X = system("sturmian:golden")
    assert [pattern_count(X, Window.interval(0, n)) for n in range(1, 31)] == list(range(2, 32))


def test_periodic_orbit_counts():
    X = PeriodicOrbit(Periodic("001"))
    assert pattern_count(X, Window.interval(0, 5)) == 3


def test_transitivity():
    assert transitivity_check(FullShift(2)).verdict == "transitive"
    assert transitivity_check(system("sft:golden")).verdict == "transitive"
    assert transitivity_check(system("sft:01,10")).verdict != "transitive"


def test_cylinders_in_golden_mean():
    X = system("sft:golden")
    assert cylinder_nonempty(X, CylinderSet((((0,), 1), ((2,), 1))))
    assert not cylinder_nonempty(X, CylinderSet((((0,), 1), ((1,), 1))))


@given(st.integers(0, 100), st.integers(0, 100), st.integers(1, 30))
def test_truncated_distance_brackets_the_metric(s1, s2, K):
    x, y = SeededRandom(2, s1), SeededRandom(2, s2)
    lo, hi = distance(x, y, K)
    lo2, hi2 = distance(x, y, K + 5)
    assert lo <= lo2 <= hi2 <= hi
    assert distance(x, x, K)[0] == 0


def test_distance_detects_shift():
    x = Periodic("01")
    lo, _ = distance(x, translate(x, (1,)), 10)
    assert lo > 0
