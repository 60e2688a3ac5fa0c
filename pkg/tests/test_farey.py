import operator
from functools import reduce

import pytest
from hypothesis import given, strategies as st

from forkcalc.farey import (
    HYPERBOLIC,
    MappingClass,
    Slope,
    act,
    adjacent,
    box,
    certify_witnesses,
    disjoint_ball_witnesses,
    distance,
    naive_distances,
    slope_to_word,
)
from forkcalc.whitehead import is_part_of_basis

S = Slope.parse
slopes = st.tuples(st.integers(-40, 40), st.integers(-40, 40)).filter(lambda t: t != (0, 0)).map(
    lambda t: Slope(*t))
matrices = st.sampled_from([MappingClass(1, 1, 0, 1), MappingClass(1, 0, 1, 1), MappingClass(0, -1, 1, 0),
                            MappingClass(-1, 0, 0, 1), HYPERBOLIC])
products = st.lists(matrices, min_size=1, max_size=6).map(lambda ms: reduce(operator.matmul, ms))


def test_canonical_sign():
    assert Slope(2, -4) == Slope(-1, 2)
    assert Slope(-3, 0) == Slope(1, 0)
    assert str(S("inf")) == "1/0"
    with pytest.raises(ValueError):
        Slope(0, 0)


def test_adjacency_examples():
    assert adjacent(S("0/1"), S("1/0"))
    assert adjacent(S("0/1"), S("1/1"))
    assert not adjacent(S("0/1"), S("2/5"))


def test_distance_examples():
    assert distance(S("0/1"), S("0/1")) == 0
    assert distance(S("0/1"), S("1/0")) == 1
    assert distance(S("0/1"), S("2/5")) == 2


def test_action_examples():
    assert act(MappingClass.identity(), S("3/7")) == S("3/7")
    assert act(MappingClass(1, 1, 0, 1), S("0/1")) == S("1/1")
    assert act(HYPERBOLIC, S("0/1")) == S("1/1")


def test_determinant_checked():
    with pytest.raises(ValueError):
        MappingClass(2, 0, 0, 1)


def test_distance_matches_naive_bfs_small_box():
    pts = box(5)
    for s in pts:
        ref = naive_distances(s, 12)
        assert all(distance(s, t) == ref[t] for t in pts)


@given(slopes, slopes, slopes)
def test_triangle_inequality(s, t, u):
    assert distance(s, u) <= distance(s, t) + distance(t, u)


@given(slopes, slopes)
def test_distance_one_iff_adjacent(s, t):
    if s != t:
        assert (distance(s, t) == 1) == adjacent(s, t)
    assert distance(s, t) == distance(t, s)


@given(products, slopes, slopes)
def test_action_is_isometric(m, s, t):
    assert adjacent(act(m, s), act(m, t)) == adjacent(s, t)
    assert distance(act(m, s), act(m, t)) == distance(s, t)


@given(products, products, slopes)
def test_group_action(m1, m2, s):
    assert act(m1 @ m2, s) == act(m1, act(m2, s))
    assert act(m1.inverse(), act(m1, s)) == s


@pytest.mark.parametrize("R,n", [(0, 2), (1, 3), (2, 4), (3, 5)])
def test_witnesses_certified(R, n):
    x = S("0/1")
    maps = disjoint_ball_witnesses(x, R, n)
    assert len(maps) == n and certify_witnesses(x, R, maps)
    images = [act(m, x) for m in maps]
    assert all(distance(images[i], images[j]) > 2 * R for i in range(n) for j in range(i + 1, n))


def test_slope_words():
    assert str(slope_to_word(S("0/1"))) == "a"
    assert str(slope_to_word(S("1/0"))) == "b"
    assert str(slope_to_word(S("1/1"))) == "ab"


@given(slopes)
def test_slope_word_is_primitive_with_matching_abelianization(s):
    w = slope_to_word(s)
    assert is_part_of_basis((w,), 2)[0]
    ea = sum(1 if x == 1 else -1 if x == -1 else 0 for x in w.letters)
    eb = sum(1 if x == 2 else -1 if x == -2 else 0 for x in w.letters)
    assert Slope(eb, ea) == s


@given(slopes, slopes)
def test_adjacent_slopes_give_bases(s, t):
    if adjacent(s, t):
        assert is_part_of_basis((slope_to_word(s), slope_to_word(t)), 2)[0]
