from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from meanlab.group import (
    CenteredBoxes,
    ShiftedBoxes,
    Window,
    enumerate_group,
    folner_window,
    invariance_defect,
    is_invariant,
    sup_norm,
)


def test_enumeration_starts_at_identity_and_zigzags():
    assert enumerate_group(1, 7) == [(0,), (1,), (-1,), (2,), (-2,), (3,), (-3,)]


@pytest.mark.parametrize("dim,r", [(1, 5), (2, 3), (3, 2)])
def test_enumeration_is_shell_ordered_and_exhaustive(dim, r):
    count = (2 * r + 1) ** dim
    seq = enumerate_group(dim, count)
    assert len(set(seq)) == count
    # oracle: the ball of radius r, brute-forced
    assert set(seq) == set(product(range(-r, r + 1), repeat=dim))
    norms = [sup_norm(g) for g in seq]
    assert norms == sorted(norms)


def test_window_interval_and_translate():
    W = Window.interval(0, 10)
    assert len(W) == 10 and W.bounds() == (0, 10) and W.is_interval()
    assert W.translate((3,)).bounds() == (3, 13)


@given(st.integers(1, 40), st.integers(-60, 60), st.integers(-100, 100))
def test_invariance_defect_matches_set_arithmetic(n, g, a):
    W = Window.interval(a, a + n)
    brute = set(range(a, a + n)) ^ set(range(a + g, a + g + n))
    assert invariance_defect(W, (g,)) == Fraction(len(brute), n)


def test_centered_and_shifted_boxes():
    assert folner_window(CenteredBoxes(1), 3).bounds() == (-3, 4)
    assert folner_window(ShiftedBoxes(1, "2^n"), 3).bounds() == (8, 11)


def test_boxes_become_invariant():
    F = folner_window(CenteredBoxes(1), 200)
    assert is_invariant(F, Window.of([(-1,), (0,), (1,)]), Fraction(1, 50))
    assert not is_invariant(folner_window(CenteredBoxes(1), 2), Window.of([(3,)]), Fraction(1, 50))
