from __future__ import annotations

import pytest

from pkg.braid.artin import (
    BraidWord,
    FreeAutomorphism,
    aij_word,
    artin_act,
    braid_equal,
    cycle_notation,
    exponent_sum,
    garside,
    permutation,
)
from pkg.braid.words import (
    concat,
    cyclically_reduce,
    format_word,
    generators_of,
    inverse_word,
    parse_word,
    power,
    reduce_word,
    substitute,
)


def test_parse_and_format_words():
    word = parse_word("alpha^2 beta^-1 1 gamma")
    assert word == (("alpha", 1), ("alpha", 1), ("beta", -1), ("gamma", 1))
    assert format_word(word) == "alpha alpha beta^-1 gamma"
    assert format_word(()) == "1"
    with pytest.raises(ValueError):
        parse_word("x^y")


def test_free_and_cyclic_reduction():
    assert reduce_word(parse_word("a b b^-1 a^-1 c")) == (("c", 1),)
    assert cyclically_reduce(parse_word("a b c a^-1")) == parse_word("b c")
    assert concat(parse_word("a b"), parse_word("b^-1 a")) == parse_word("a a")


def test_inverse_power_and_substitution():
    word = parse_word("a b^-1")
    assert inverse_word(word) == parse_word("b a^-1")
    assert power(word, -2) == parse_word("b a^-1 b a^-1")
    assert substitute(word, {"b": parse_word("c d")}) == parse_word("a d^-1 c^-1")
    assert generators_of(word) == {"a", "b"}


def test_braid_word_validates_letters():
    with pytest.raises(ValueError):
        BraidWord(3, ((3, 1),))
    with pytest.raises(ValueError):
        BraidWord.parse(3, "y1")
    assert len(BraidWord.parse(3, "x1 x1^-1 x2")) == 1


def test_braid_relation_holds_and_commutation_fails():
    assert braid_equal(BraidWord.parse(3, "x1 x2 x1"), BraidWord.parse(3, "x2 x1 x2"))
    assert not braid_equal(BraidWord.parse(3, "x1 x2"), BraidWord.parse(3, "x2 x1"))
    assert braid_equal(BraidWord.parse(4, "x1 x3"), BraidWord.parse(4, "x3 x1"))


def test_braid_equal_rejects_strand_mismatch():
    with pytest.raises(ValueError):
        braid_equal(BraidWord(3), BraidWord(4))


def test_full_twist_is_central():
    twist = garside(4) ** 2
    for index in range(1, 4):
        generator = BraidWord.generator(4, index)
        assert braid_equal(twist * generator, generator * twist)
    assert not braid_equal(garside(4) * BraidWord.generator(4, 1), BraidWord.generator(4, 1) * garside(4))


def test_garside_conjugates_generators():
    delta = garside(3)
    assert braid_equal(delta * BraidWord.generator(3, 1) * delta.inverse(), BraidWord.generator(3, 2))


def test_pure_generators():
    assert braid_equal(aij_word(1, 2, 3), BraidWord.parse(3, "x1 x1"))
    assert braid_equal(aij_word(1, 3, 3), BraidWord.parse(3, "x2 x1 x1 x2^-1"))
    assert permutation(aij_word(1, 3, 4)) == (0, 1, 2, 3)
    with pytest.raises(ValueError):
        aij_word(2, 2, 3)


def test_full_twist_factors_through_pure_generators():
    product = aij_word(1, 2, 3) * aij_word(1, 3, 3) * aij_word(2, 3, 3)
    assert braid_equal(product, garside(3) ** 2)


def test_permutation_and_cycles():
    assert permutation(BraidWord.parse(3, "x1")) == (1, 0, 2)
    assert permutation(garside(3)) == (2, 1, 0)
    assert cycle_notation((1, 0, 2)) == "(12)"
    assert cycle_notation((0, 1, 2)) == "()"


def test_artin_action_identity_and_exponent_sum():
    assert artin_act(BraidWord.parse(3, "x1 x2 x1 x2^-1 x1^-1 x2^-1")).is_identity
    assert artin_act(BraidWord(3)) == FreeAutomorphism.identity(3)
    assert exponent_sum(BraidWord.parse(3, "x1 x2^-1 x1")) == (2, -1)
