import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from lambdatree.freegrp import (
    Alphabet,
    CyclicWord,
    Word,
    WordParseError,
    abelianization,
    all_reduced_words,
    commutator,
    commutator_power,
    conjugate_to_inverse,
    cyclic_reduce,
    is_conjugate,
    is_proper_power,
    least_rotation,
    power_of,
    random_reduced_word,
    reduce,
    root_of,
    word_product,
)

XY = Alphabet.of("xy")
x, y = XY.gens()


def test_reduce_examples():
    assert reduce(Word((1, -1, 2))) == Word((2,))
    assert reduce(Word((1, 2, -2, -1))) == Word()
    assert word_product(x, x.inverse()) == Word()


def test_commutator_convention():
    assert commutator(x, y).letters == (-1, -2, 1, 2)
    assert XY("[x,y]") == commutator(x, y)
    assert len(commutator_power(x, y, 2, -3)) == 10
    with pytest.raises(ValueError):
        commutator_power(x, y, 0, 1)


def test_bad_letters():
    with pytest.raises(ValueError):
        Word((1, 0))


def test_cyclic_reduce_example():
    conj, core = cyclic_reduce(XY("y x^2 y^-1"))
    assert conj == y
    assert core.letters == (1, 1)


def test_conjugacy_examples():
    assert is_conjugate(XY("x y"), XY("y x")) is not None
    assert is_conjugate(x, y) is None
    assert is_conjugate(XY("x^2"), x) is None
    # free groups have no nontrivial element conjugate to its inverse
    assert not conjugate_to_inverse(commutator(x, y))
    assert conjugate_to_inverse(Word())


def test_proper_power_examples():
    root, k = is_proper_power(XY("y (x y)^3 y^-1"))
    assert k == 3
    assert root == XY("y x y y^-1")
    assert is_proper_power(commutator(x, y)) is None
    assert root_of(x ** 4) == (x, 4)
    with pytest.raises(ValueError):
        is_proper_power(Word())


def test_power_of_examples():
    assert power_of(x ** -3, x) == -3
    assert power_of(Word(), y) == 0
    assert power_of(XY("x y"), x) is None


def test_abelianization():
    assert abelianization(commutator(x, y), 2) == (0, 0)
    assert abelianization(XY("x^3 y^-1 x"), 2) == (4, -1)


def test_least_rotation():
    assert least_rotation((3, 1, 2, 1, 1)) == 3
    assert CyclicWord((1, 2, 1, 2)) == CyclicWord((2, 1, 2, 1))
    with pytest.raises(ValueError):
        CyclicWord((1, 2, -1))


def test_parser_forms():
    assert XY("x^-2 y") == Word((-1, -1, 2))
    assert XY("(x y)^2") == Word((1, 2, 1, 2))
    assert XY("1") == Word()
    assert XY("X Y x y") == commutator(x, y)
    assert XY("x*y.x") == Word((1, 2, 1))
    longer = Alphabet(("a1", "a"))
    assert longer("a1 a") == Word((1, 2))


@pytest.mark.parametrize("text,pos", [("x ^", 3), ("x q", 2), ("[x y]", 4), ("(x", 2)])
def test_parser_errors_carry_position(text, pos):
    with pytest.raises(WordParseError) as err:
        XY(text)
    assert err.value.position == pos


def test_alphabet_validation():
    with pytest.raises(ValueError):
        Alphabet(("x", "x"))
    with pytest.raises(ValueError):
        Alphabet(("1x",))
    assert Alphabet.of("x, y ,z").names == ("x", "y", "z")


def test_all_reduced_words_count():
    # 1 + 4 + 12 + 36 reduced words of length <= 3 in rank 2
    assert sum(1 for _ in all_reduced_words(2, 3)) == 53


# -- properties ---------------------------------------------------------------------

raw_words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=14).map(tuple)


@given(raw_words)
def test_reduce_matches_naive(ls):
    r = reduce(Word(ls))
    assert r.letters == oracles.naive_reduce(ls)
    assert reduce(r) == r
    assert r.is_reduced()


@given(raw_words, raw_words, raw_words)
def test_product_is_associative_with_inverses(a, b, c):
    A, B, C = Word(a), Word(b), Word(c)
    assert word_product(word_product(A, B), C) == word_product(A, word_product(B, C))
    assert word_product(A, A.inverse()) == Word()
    assert word_product(A, B).letters == oracles.mul(a, b)


@given(raw_words, raw_words)
def test_conjugacy_against_rotations(a, b):
    c = is_conjugate(Word(a), Word(b))
    assert (c is not None) == oracles.naive_conjugate(a, b)
    if c is not None:
        assert word_product(c, Word(a), c.inverse()) == reduce(Word(b))


@given(raw_words, st.lists(st.sampled_from([1, -1, 2, -2]), max_size=5).map(tuple))
def test_conjugates_are_detected(a, g):
    b = oracles.mul(g, a, oracles.inv(g))
    c = is_conjugate(Word(a), Word(b))
    assert c is not None
    assert word_product(c, Word(a), c.inverse()).letters == b


def test_conjugacy_against_exhaustive_search():
    rng = random.Random(7)
    for _ in range(40):
        u = random_reduced_word(rng, 2, rng.randint(1, 3))
        v = random_reduced_word(rng, 2, rng.randint(1, 3))
        found = oracles.search_conjugator(u.letters, v.letters, 2, 3)
        mine = is_conjugate(u, v)
        if found is not None:
            assert mine is not None
        if mine is not None:
            assert word_product(mine, u, mine.inverse()) == v


@given(raw_words.filter(lambda w: oracles.naive_reduce(w)), st.integers(1, 4))
def test_proper_power_against_naive(w, k):
    word = Word(w) ** k
    root, e = root_of(word)
    assert e == oracles.naive_power_root(word.letters)
    assert root ** e == reduce(word)
    assert power_of(word, root) == e


@given(raw_words)
def test_format_parse_round_trip(ls):
    alph = Alphabet.of("xyz")
    w = reduce(Word(ls))
    assert alph(alph.format(w)) == w
    assert alph(alph.format(w, compact=True)) == w


@given(st.integers(0, 10_000), st.integers(0, 12))
def test_random_words_are_reduced(seed, n):
    w = random_reduced_word(random.Random(seed), 3, n)
    assert len(w) == n and w.is_reduced()
