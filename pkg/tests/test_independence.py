from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from meanlab.independence import (
    find_ie_pair,
    independence_density,
    is_independent,
    is_independent_exhaustive,
    periodic_certificate,
    phi,
    phi_exhaustive,
)
from meanlab.systems import CylinderSet
from meanlab.zoo import system

A = (CylinderSet.origin(0), CylinderSet.origin(1))
NAMES = ["fullshift:2", "sft:golden", "periodic:01", "periodic:001", "sturmian:golden"]
sites = st.lists(st.integers(0, 11), min_size=1, max_size=8, unique=True)


def J(*ts):
    return [(t,) for t in ts]


def brute_independent_golden(ts):
    # oracle from the definition: every 0/1 assignment on J extends to a word with no "11"
    lo, hi = min(ts), max(ts)
    words = [w for w in product((0, 1), repeat=hi - lo + 1) if all(not (a and b) for a, b in zip(w, w[1:]))]
    seen = {tuple(w[t - lo] for t in ts) for w in words}
    return len(seen) == 2 ** len(ts)


def test_examples():
    assert is_independent(system("fullshift:2"), A, J(0, 1, 2))
    assert not is_independent(system("sft:golden"), A, J(0, 1))
    assert not is_independent(system("periodic:01"), A, J(0, 1))


def test_phi_examples():
    assert phi(system("fullshift:2"), A, J(*range(6))).phi == 6
    r = phi(system("sft:golden"), A, J(0, 1, 2, 3))
    assert r.phi == 2 and r.best_J.to_json() == [[0], [2]]
    assert phi(system("periodic:01"), A, J(0, 1, 2, 3)).phi == 1


@given(sites)
def test_golden_independence_matches_definition(ts):
    X = system("sft:golden")
    assert is_independent(X, A, J(*ts)) == brute_independent_golden(sorted(ts))


@pytest.mark.parametrize("name", NAMES)
@given(F=sites)
def test_phi_matches_exhaustive(name, F):
    X = system(name)
    a, b = phi(X, A, J(*F)), phi_exhaustive(X, A, J(*F))
    assert (a.phi, a.best_J) == (b.phi, b.best_J)
    assert is_independent(X, A, [tuple(g) for g in a.best_J.elems])


@given(sites)
def test_independence_is_hereditary(ts):
    X = system("sft:golden")
    if is_independent_exhaustive(X, A, J(*ts)):
        for r in range(len(ts)):
            for sub in combinations(ts, r):
                assert is_independent(X, A, J(*sub))


def test_density_intervals():
    full = independence_density(system("fullshift:2"), A, range(1, 9))
    assert full.lower == full.upper == 1
    gold = independence_density(system("sft:golden"), A, range(1, 9))
    assert gold.lower == gold.upper == Fraction(1, 2)
    per = independence_density(system("periodic:01"), A, range(1, 15))
    assert per.lower == 0 and per.upper == Fraction(1, 14)
    ub = per.upper_bounds
    assert all(min(ub[: i + 1]) >= per.upper for i in range(len(ub)))


def test_periodic_certificate():
    cert = periodic_certificate(system("sft:golden"), A)
    assert cert["period"] == 2 and Fraction(cert["density"]) == Fraction(1, 2)
    assert periodic_certificate(system("periodic:01"), A) is None


def test_ie_search():
    assert find_ie_pair(system("fullshift:2")).found
    assert find_ie_pair(system("sft:golden")).found
    r = find_ie_pair(system("periodic:001"))
    assert not r.found and r.to_json()["verdict"] == "none found at this scale"
