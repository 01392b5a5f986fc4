from fractions import Fraction
from itertools import combinations

import numpy as np
from hypothesis import given, strategies as st

from meanlab.configs import Constant, Periodic
from meanlab.correspondence import (
    FiniteMeasureSpace,
    correspondence_rows,
    empirical_measure,
    finite_intersection_checker,
    indicator_config,
    invariance_defect_measure,
    multi_intersection_search,
    origin_cylinder,
    pair_density_lemma,
    finite_intersection_instances,
    random_space,
)
from meanlab.dsl import parse_set
from meanlab.group import Window
from meanlab.systems import CylinderSet


def test_indicator_is_zero_on_the_set():
    xi = indicator_config(parse_set("3Z+1"))
    assert isinstance(xi, Periodic)
    assert [xi.symbol_at((i,)) for i in range(6)] == [1, 0, 1, 1, 0, 1]
    assert indicator_config(parse_set("{}")) == Constant(1, 1)
    assert indicator_config(parse_set("union(2Z, 2Z+1)")) == Constant(0, 1)


@given(st.integers(1, 9), st.integers(0, 8), st.integers(-50, 50), st.integers(1, 40))
def test_empirical_mass_counts_visits(m, r, a, L):
    E = parse_set(f"{m}Z+{r % m}")
    xi = indicator_config(E)
    mass = empirical_measure(xi, Window.interval(a, a + L)).mass(origin_cylinder())
    assert mass == Fraction(sum((t - r) % m == 0 for t in range(a, a + L)), L)


@given(st.integers(1, 9), st.integers(0, 8), st.integers(-50, 50), st.integers(1, 40),
       st.integers(-15, 15), st.lists(st.integers(0, 1), min_size=1, max_size=3))
def test_invariance_defect_bound(m, r, a, L, g, pattern):
    xi = indicator_config(parse_set(f"{m}Z+{r % m}"))
    B = CylinderSet(tuple(((i,), v) for i, v in enumerate(pattern)))
    defect, bound = invariance_defect_measure(empirical_measure(xi, Window.interval(a, a + L)), g, B)
    assert defect <= bound == Fraction(min(2 * abs(g), 2 * L), L)


def test_rows_for_progression():
    rows = correspondence_rows(parse_set("3Z+1"), [3, 6, 12], radius=64)
    assert all(r.inside and r.mass == Fraction(1, 3) for r in rows)


def test_rows_for_blocks_reach_the_block():
    rows = correspondence_rows(parse_set("blocks(j=1..inf: 2^j, j)"), [8], radius=512)
    assert rows[0].mass == 1 and rows[0].inside


def test_intersection_demonstrators():
    S = parse_set("union(5Z, 5Z+1)")
    w = pair_density_lemma(S, range(1, 7))
    assert w.met and w.density.lower >= Fraction(2, 25)
    assert multi_intersection_search(S, range(1, 7), 2, Fraction(1, 20)).met


def brute_best_pair(space):
    best = None
    for i, j in combinations(range(len(space.subsets)), 2):
        m = space.mass(space.subsets[i] & space.subsets[j])
        best = m if best is None or m > best else best
    return best


@given(st.integers(0, 10**6))
def test_finite_checker_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    space = random_space(rng, 8, Fraction(2, 5), 12, tight=bool(seed % 2))
    w = finite_intersection_checker(space, 2, Fraction(1, 20), Fraction(2, 5))
    assert w.found == (brute_best_pair(space) >= Fraction(4, 25) - Fraction(1, 20))
    if w.found:
        i, j = w.indices
        assert space.mass(space.subsets[i] & space.subsets[j]) == w.mass >= w.target


def test_finite_example():
    sp = FiniteMeasureSpace.uniform(4, [{0, 1}, {1, 2}, {2, 3}])
    w = finite_intersection_checker(sp, 2, Fraction(1, 20))
    assert w.found and w.indices == (0, 1) and w.target == Fraction(1, 5)


def test_finite_intersection_batch():
    for tight in (False, True):
        ws = finite_intersection_instances(7, count=20, tight=tight)
        assert all(w.found for w in ws)
