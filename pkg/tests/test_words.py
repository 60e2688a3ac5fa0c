import pytest
from hypothesis import given

from conftest import W, letters, words
from forkcalc.words import (
    RankError,
    Word,
    ball,
    conjugator,
    least_rotation,
    parse_tuple,
    power_exponent,
)


def naive_reduce(xs):
    xs = list(xs)
    changed = True
    while changed:
        changed = False
        for i in range(len(xs) - 1):
            if xs[i] == -xs[i + 1]:
                del xs[i : i + 2]
                changed = True
                break
    return tuple(xs)


def test_parse_and_print():
    assert str(W("abAB")) == "abAB"
    assert str(W("aA")) == "1"
    assert W("1") == Word.identity(2)
    assert W("[1,-2]") == W("aB")
    assert W("1 -2") == W("aB")


def test_large_rank_uses_integer_syntax():
    w = Word((27, -1), 30)
    assert str(w) == "[27,-1]"
    assert Word.parse(str(w), 30) == w


def test_letters_out_of_rank_rejected():
    with pytest.raises(ValueError):
        W("c", 2)


def test_mixed_rank_product_rejected():
    with pytest.raises(RankError):
        W("a", 2) * W("a", 3)


def test_parse_tuple():
    assert parse_tuple("", 2) == ()
    assert parse_tuple("ab, B", 2) == (W("ab"), W("B"))


def test_cyclic_reduction():
    assert W("abaB").cyclic_reduce() == (W("abaB"), W("1"))
    core, c = W("baaB").cyclic_reduce()
    assert (core, c) == (W("aa"), W("b"))
    assert core.conjugate_by(c) == W("baaB")


def test_max_root():
    assert W("abab").max_root() == (W("ab"), 2)
    assert W("abAB").max_root() == (W("abAB"), 1)
    root, k = W("BAbbaB").max_root()
    assert root ** k == W("BAbbaB")


def test_conjugator_examples():
    u, v = W("ab"), W("ba")
    g = conjugator(u, v)
    assert g is not None and u.conjugate_by(g) == v
    assert conjugator(W("a"), W("b")) is None


def test_power_exponent():
    assert power_exponent(W("ababab"), W("ab")) == 3
    assert power_exponent(W("BABA"), W("ab")) == -2


def test_least_rotation_is_minimal():
    xs = (2, 1, -2, 1)
    rots = [xs[i:] + xs[:i] for i in range(len(xs))]
    assert least_rotation(xs) == min(rots)


def test_ball_counts():
    # 1 + 4 + 12 + 36 reduced words of length <= 3 in F_2
    assert len(list(ball(2, 3))) == 1 + 4 + 12 + 36


@given(letters(3, 10))
def test_least_rotation_matches_sorting(xs):
    xs = tuple(xs)
    if xs:
        assert least_rotation(xs) == min(xs[i:] + xs[:i] for i in range(len(xs)))


@given(letters(3))
def test_reduction_matches_naive(xs):
    assert Word(xs, 3).letters == naive_reduce(xs)


@given(words(3), words(3), words(3))
def test_group_axioms(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert u * u.inverse() == Word.identity(3)
    assert (u * v).inverse() == v.inverse() * u.inverse()


@given(words(2))
def test_print_parse_roundtrip(w):
    assert Word.parse(str(w), 2) == w


@given(words(2), words(2, 6))
def test_canonical_conjugate_is_class_invariant(w, g):
    assert w.conjugate_by(g).canonical_conjugate() == w.canonical_conjugate()
    assert w.is_conjugate(w.conjugate_by(g))


@given(words(2, 8), words(2, 5))
def test_conjugator_solves(w, g):
    v = w.conjugate_by(g)
    h = conjugator(w, v)
    assert h is not None and w.conjugate_by(h) == v


def test_tuple_of_large_rank_words():
    t = parse_tuple("[27,-1],[1],1", 30)
    assert t == (Word((27, -1), 30), Word((1,), 30), Word((), 30))
    assert parse_tuple(",".join(map(str, t)), 30) == t
