import pytest
from hypothesis import given, strategies as st

from meanlab.dsl import DSLSyntaxError, parse_set, to_text
from meanlab.sets import BlockUnion, Periodic


@pytest.mark.parametrize("text,canon", [
    ("2Z+1", "2Z+1"),
    ("union(3Z, shift(3Z, 1))", "union(3Z, 3Z+1)"),
    ("compl(2Z)", "2Z+1"),
    ("inter(2Z,3Z)", "6Z"),
    ("{1,5,7}", "{1,5,7}"),
    ("{}", "{}"),
])
def test_canonical_text(text, canon):
    assert to_text(parse_set(text)) == canon


def test_normalized_forms():
    E = parse_set("union(3Z, shift(3Z, 1))")
    assert isinstance(E, Periodic) and E.modulus == (3,) and E.residues == frozenset({(0,), (1,)})
    assert isinstance(parse_set("blocks(j=1..12: 2^j, j)"), BlockUnion)


def test_blocks_membership():
    E = parse_set("blocks(j=1..inf: 2^j, j)")
    members = [n for n in range(0, 70) if E.contains((n,))]
    assert members == [2, 4, 5, 8, 9, 10, 16, 17, 18, 19, 32, 33, 34, 35, 36, 64, 65, 66, 67, 68, 69]


def test_errors_carry_position_and_expected():
    with pytest.raises(DSLSyntaxError) as e:
        parse_set("2Z+")
    assert e.value.pos == 3 and "integer" in e.value.expected
    with pytest.raises(ValueError):
        parse_set("union(2Z")
    with pytest.raises(ValueError):
        parse_set("")


progressions = st.builds(lambda a, b: f"{a}Z+{b % a}", st.integers(1, 9), st.integers(0, 20))


def compose(children):
    return st.one_of(
        st.builds(lambda a, b: f"union({a}, {b})", children, children),
        st.builds(lambda a, b: f"inter({a}, {b})", children, children),
        st.builds(lambda a: f"compl({a})", children),
        st.builds(lambda a, s: f"shift({a}, {s})", children, st.integers(-5, 5)),
    )


expressions = st.recursive(progressions, compose, max_leaves=4)


def _members(E, lo=-40, hi=40):
    return [n for n in range(lo, hi) if E.contains((n,))]


@given(expressions)
def test_round_trip_preserves_the_set(text):
    E = parse_set(text)
    assert _members(parse_set(to_text(E))) == _members(E)
    assert _members(parse_set(text, normalize_result=False)) == _members(E)
