import pytest
from hypothesis import given, settings, strategies as st

from morphic.engine import (
    Diverges,
    Finite,
    Infinite,
    MorphicSystem,
    fixpoint_letters,
    fixpoint_prefix,
    is_prolongable,
    limit_status,
    mortal_letters,
)
from morphic.errors import AlphabetMismatch, FiniteLimit, NoLimit
from morphic.words import Coding, Morphism, apply_morphism
from strategies import FIB, THUE_MORSE, TRIB, codings, iterate_literal, prolongable_morphisms, word


def m(**rules):
    return Morphism.from_strings(rules)


def test_mortal_letters():
    assert mortal_letters(m(a="ab", b="")) == {"b"}
    assert mortal_letters(FIB) == frozenset()
    assert mortal_letters(m(a="bc", b="c", c="")) == {"a", "b", "c"}


def test_prolongable():
    assert is_prolongable(FIB, "a")
    assert not is_prolongable(FIB, "b")
    assert is_prolongable(THUE_MORSE, "0")
    assert not is_prolongable(m(a="a"), "a")


def test_limit_status_examples():
    assert isinstance(limit_status(FIB, "a"), Infinite)
    assert limit_status(m(a="ab", b=""), "a") == Finite(word("ab"))
    assert isinstance(limit_status(m(a="ba", b="ab"), "a"), Diverges)


def test_limit_of_non_prolongable_start():
    # first letter a -> bc..., b -> b...: stabilizes although h(a) does not start with a
    h = m(a="bc", b="bc", c="cc")
    assert isinstance(limit_status(h, "a"), Infinite)
    assert fixpoint_prefix(MorphicSystem.pure(h, "a"), 6) == word("bccccc")


def test_limit_with_mortal_growth_is_finite():
    h = m(a="ab", b="c", c="")
    # a, ab, abc, abc: the growth letters die out
    assert limit_status(h, "a") == Finite(word("abc"))


def test_fixpoint_prefix_examples():
    assert fixpoint_prefix(MorphicSystem.pure(FIB, "a"), 20) == word("abaababaabaababaabab")
    assert fixpoint_prefix(MorphicSystem.pure(THUE_MORSE, "0"), 16) == word("0110100110010110")
    assert fixpoint_prefix(MorphicSystem.pure(TRIB, "a"), 14) == word("abacabaabacaba")


def test_fixpoint_prefix_with_coding():
    c = Coding.from_mapping({"a": "x", "b": "y"})
    assert fixpoint_prefix(MorphicSystem(FIB, c, "a"), 5) == word("xyxxy")


def test_fixpoint_prefix_errors():
    with pytest.raises(FiniteLimit) as info:
        fixpoint_prefix(MorphicSystem.pure(m(a="ab", b=""), "a"), 5)
    assert info.value.word == word("ab")
    with pytest.raises(NoLimit):
        fixpoint_prefix(MorphicSystem.pure(m(a="ba", b="ab"), "a"), 5)


def test_system_validation():
    with pytest.raises(AlphabetMismatch):
        MorphicSystem(FIB, Coding.from_mapping({"a": "x"}), "a")
    with pytest.raises(ValueError):
        MorphicSystem.pure(FIB, "z")


def test_fixpoint_letters_examples():
    assert fixpoint_letters(TRIB, "a") == {"a", "b", "c"}
    assert fixpoint_letters(m(a="aa", b="b"), "a") == {"a"}
    assert fixpoint_letters(FIB, "a") == {"a", "b"}


def test_stream_indexing_and_iteration():
    stream = MorphicSystem.pure(FIB, "a").stream()
    assert stream[7] == "a"
    it = iter(stream)
    assert tuple(next(it) for _ in range(5)) == word("abaab")


@given(prolongable_morphisms(), st.integers(0, 300), st.integers(0, 300))
def test_prefix_stability(h, n, k):
    sys = MorphicSystem.pure(h, "a")
    assert fixpoint_prefix(sys, n + k)[:n] == fixpoint_prefix(sys, n)


@given(prolongable_morphisms(), st.integers(1, 6))
def test_iterates_are_nested(h, n):
    w = ("a",)
    for _ in range(n):
        nxt = apply_morphism(h, w)
        assert nxt[:len(w)] == w
        w = nxt


@given(prolongable_morphisms())
def test_fixpoint_letters_closed(h):
    letters = fixpoint_letters(h, "a")
    for b in letters:
        assert set(h[b]) <= letters


@settings(max_examples=50)
@given(prolongable_morphisms(erasing=False), st.data())
def test_agrees_with_literal_iteration(h, data):
    c = data.draw(codings(h.source))
    rules = {a: "".join(w) for a, w in h.rules.items()}
    n = 2000
    expected = iterate_literal(rules, "a", n)
    got = fixpoint_prefix(MorphicSystem(h, c, "a"), n)
    assert got == tuple(c.letter(x) for x in expected)


@settings(max_examples=50)
@given(prolongable_morphisms(erasing=True))
def test_erasing_fixpoints_agree_with_literal_iteration(h):
    rules = {a: "".join(w) for a, w in h.rules.items()}
    expected = iterate_literal(rules, "a", 300)
    assert fixpoint_prefix(MorphicSystem.pure(h, "a"), 300) == tuple(expected)
