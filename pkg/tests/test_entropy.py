from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from meanlab.entropy import (
    DIGITS,
    Bernoulli,
    Markov,
    Parry,
    check_variational,
    fekete_check,
    measure_entropy,
    nonincreasing_rates,
    parse_measure,
    perron_root,
    topological_entropy,
    word_masses,
)
from meanlab.zoo import system

matrices = st.integers(1, 8).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 2), min_size=n, max_size=n), min_size=n, max_size=n))


@given(matrices)
def test_perron_enclosure_contains_numpy_radius(rows):
    A = np.array(rows)
    enc = perron_root(A)
    rho = max(abs(np.linalg.eigvals(A))) if A.any() else 0.0
    assert enc.lo <= enc.hi
    assert float(enc.lo) - 1e-9 <= rho <= float(enc.hi) + 1e-9


@pytest.mark.parametrize("k", range(2, 7))
def test_full_shift_entropy(k):
    est = topological_entropy(system(f"fullshift:{k}"), n_max=4)
    with mpmath.workdps(DIGITS):
        assert abs(est.value - mpmath.log(k)) < mpmath.mpf(10) ** -40
    assert est.claim == "exact" and est.note == f"log {k}"


def test_golden_entropy():
    est = topological_entropy(system("sft:golden"), n_max=20)
    assert abs(est.value - mpmath.log((1 + mpmath.sqrt(5)) / 2)) < 1e-10
    assert abs(est.rows[-1][3] - est.value) < 0.01


def test_sturmian_and_periodic_entropy():
    st_ = topological_entropy(system("sturmian:golden"), n_max=30)
    assert st_.claim == "bounded" and st_.interval[1] <= 0.12
    assert topological_entropy(system("periodic:001")).value == 0


@pytest.mark.parametrize("name", ["fullshift:2", "sft:golden", "sturmian:golden"])
def test_fekete(name):
    assert all(ok for *_, ok in fekete_check(system(name), 12))


probs = st.lists(st.integers(1, 9), min_size=2, max_size=3).map(lambda ws: tuple(Fraction(w, sum(ws)) for w in ws))


@given(probs)
def test_bernoulli_measure(p):
    X = system(f"fullshift:{len(p)}")
    mu = Bernoulli(p)
    assert sum(word_masses(mu, 3).values()) == 1
    est = measure_entropy(X, mu, n_max=4)
    with mpmath.workdps(DIGITS):
        assert all(abs(r[3] - est.value) < mpmath.mpf(10) ** -40 for r in est.rows)
    assert check_variational(X, [mu], n_max=6).passed


def test_markov_stationary_and_rates():
    P = ((Fraction(1, 2), Fraction(1, 2)), (Fraction(1), Fraction(0)))
    mu = Markov.stationary(P)
    assert mu.pi == (Fraction(2, 3), Fraction(1, 3))
    X = system("sft:golden")
    est = measure_entropy(X, mu, n_max=8)
    assert nonincreasing_rates(est)
    with mpmath.workdps(DIGITS):
        assert abs(est.value - mpmath.mpf(2) / 3 * mpmath.log(2)) < mpmath.mpf(10) ** -40
    with pytest.raises(ValueError):
        Markov(P, (Fraction(1, 2), Fraction(1, 2)))


def test_parry_attains_topological_entropy():
    X = system("sft:golden")
    rep = check_variational(X, [Parry.of(X), Markov.stationary(((Fraction(1, 2), Fraction(1, 2)), (1, 0)))])
    assert rep.passed and abs(rep.gap) < 1e-10


def test_measure_support_checked():
    with pytest.raises(ValueError):
        measure_entropy(system("sft:golden"), Markov.stationary(((Fraction(1, 2), Fraction(1, 2)),) * 2))
    with pytest.raises(ValueError):
        parse_measure("parry", system("fullshift:2"))


def test_orbit_measure():
    X = system("periodic:001")
    assert measure_entropy(X, parse_measure("orbit", X)).value == 0
