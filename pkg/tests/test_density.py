from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from meanlab.density import (
    asymptotic_density,
    banach_lower_density,
    banach_upper_density,
    verify_density_calculus,
)
from meanlab.dsl import parse_set
from meanlab.group import CenteredBoxes
from meanlab.sets import Periodic, Shift


def brute_periodic_density(m, residues):
    return Fraction(len({r % m for r in residues}), m)


periodic_sets = st.integers(1, 12).flatmap(
    lambda m: st.builds(lambda rs: (m, rs), st.frozensets(st.integers(0, m - 1), max_size=m)))


@pytest.mark.parametrize("a", range(2, 13))
def test_progressions_exact(a):
    for b in range(a):
        E = parse_set(f"{a}Z+{b}")
        up, lo = banach_upper_density(E), banach_lower_density(E)
        assert up.is_exact and up.lower == Fraction(1, a)
        assert lo.lower == lo.upper == Fraction(1, a)


@given(periodic_sets, st.integers(-100, 100))
def test_periodic_density_and_shift_invariance(ms, s):
    m, rs = ms
    E = Periodic((m,), frozenset((r,) for r in rs))
    d = banach_upper_density(E)
    assert d.lower == d.upper == brute_periodic_density(m, rs)
    assert banach_upper_density(Shift(E, (s,))).lower == d.lower


@given(periodic_sets, periodic_sets, st.integers(-30, 30))
def test_density_calculus(a, b, s):
    E = Periodic((a[0],), frozenset((r,) for r in a[1]))
    F = Periodic((b[0],), frozenset((r,) for r in b[1]))
    assert verify_density_calculus(E, F, (s,)).passed


def test_windowed_interval_contains_brute_window_max():
    E = parse_set("blocks(j=1..inf: 2^j, j)")
    est = banach_upper_density(E, n=12, radius=2**13)
    assert est.lower <= est.upper
    assert est.lower >= Fraction(11, 12)
    # oracle: the best 12-window near 4096 is the j=12 block itself
    best = max(sum(E.contains((t,)) for t in range(a, a + 12)) for a in range(4090, 4100))
    assert Fraction(best, 12) == 1


def test_banach_and_asymptotic_separate():
    E = parse_set("blocks(j=1..inf: 2^j, j)")
    asym = asymptotic_density(E, CenteredBoxes(1), [2**14])
    assert asym.ratios[-1][1] < Fraction(1, 100)


def test_finite_sets_have_density_zero():
    E = parse_set("{1,2,3,500}")
    assert banach_upper_density(E).upper == 0
