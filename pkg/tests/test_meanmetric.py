from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given, strategies as st

from meanlab.configs import Periodic, SeededRandom, translate
from meanlab.meanmetric import (
    EXACT,
    DichotomyError,
    MeanDistanceEstimate,
    WindowParams,
    banach_mean_distance,
    besicovitch_distance,
    classify_system,
    exact_mean,
    weighted_mismatch,
    weyl_distance,
)
from meanlab.group import CenteredBoxes
from meanlab.systems import distance
from meanlab.zoo import point, system

words = st.text("012", min_size=1, max_size=8)


def brute_mean(u, v):
    # density of the mismatch set over one common period
    m = lcm(len(u), len(v))
    return Fraction(sum(u[i % len(u)] != v[i % len(v)] for i in range(m)), m)


def test_spec_pair():
    b = banach_mean_distance(Periodic("01"), Periodic("0011"))
    assert b.mode == EXACT and b.lower == b.upper == Fraction(1, 2)


@given(words, words)
def test_periodic_pairs_exact(u, v):
    x, y = Periodic(u), Periodic(v)
    b, w = banach_mean_distance(x, y), weyl_distance(x, y)
    assert b.is_exact and w.is_exact
    assert b.lower == w.lower == brute_mean(u, v)


@given(words, words, st.integers(-20, 20))
def test_mean_distance_is_shift_invariant(u, v, s):
    x, y = Periodic(u), Periodic(v)
    assert banach_mean_distance(translate(x, (s,)), translate(y, (s,))).lower == brute_mean(u, v)


@given(st.integers(0, 50), st.integers(0, 50), st.integers(-30, 30), st.integers(1, 16))
def test_weighted_mismatch_is_truncated_distance(s1, s2, g, K):
    x, y = SeededRandom(2, s1), SeededRandom(2, s2)
    w = weighted_mismatch(x, y, g, g + 1, K)
    lo, _ = distance(translate(x, (g,)), translate(y, (g,)), K)
    assert Fraction(int(w[0]), 2**K) == lo


def test_windowed_estimates_overlap_and_are_tight():
    p = WindowParams(n_max=200, K=20)
    for i in range(5):
        x, y = SeededRandom(2, 2 * i), SeededRandom(2, 2 * i + 1)
        b, w = banach_mean_distance(x, y, p), weyl_distance(x, y, p)
        assert b.lower <= b.upper and w.lower <= w.upper
        assert max(b.lower, w.lower) <= min(b.upper, w.upper)
        assert b.upper - b.lower <= Fraction(1, 20)
        # independent fair coins: each metric digit mismatches with probability 1/2, so the
        # mean of d is 1/2; the windowed supremum sits a little above it
        assert Fraction(2, 5) < b.upper < Fraction(7, 10)


def test_windowed_is_g_invariant():
    x, y = SeededRandom(2, 11), SeededRandom(2, 12)
    p = WindowParams(n_max=64, radius=512, K=16)
    a = banach_mean_distance(x, y, p)
    b = banach_mean_distance(translate(x, (3,)), translate(y, (3,)), WindowParams(n_max=64, radius=512, K=16, center=-3))
    assert (a.lower, a.upper) == (b.lower, b.upper)


def test_estimate_validation():
    with pytest.raises(ValueError):
        MeanDistanceEstimate(Fraction(1, 2), Fraction(1, 3), EXACT, {})


def test_besicovitch_periodic():
    est = besicovitch_distance(Periodic("01"), Periodic("0"), CenteredBoxes(1), range(50, 60))
    assert est.lower == est.upper == Fraction(1, 2)


def test_point_parser_round_trip():
    X = system("fullshift:2")
    x = point("shift:1:periodic:011", X)  # (s.x)(g) = x(g + s)
    assert [x.symbol_at((i,)) for i in range(3)] == [1, 1, 0]


def test_exact_mean_tails():
    em = exact_mean(Periodic("01"), Periodic("0011"))
    assert em.left == em.right == Fraction(1, 2)


def test_classification_examples():
    full = classify_system(system("fullshift:2"))
    assert full.verdict == "sensitive" and full.grade == "certified"
    assert full.points[0].delta0 >= Fraction(1, 4)
    assert classify_system(system("sft:golden")).verdict == "sensitive"
    assert classify_system(system("periodic:001")).label == "equicontinuous-exact"


def test_non_transitive_rejected():
    with pytest.raises(DichotomyError, match="dichotomy requires transitivity"):
        classify_system(system("sft:01,10"))
