from __future__ import annotations

import pytest

from pkg.braid.groups import (
    BraidGroupSpec,
    FreeGroupSpec,
    SemidirectSpec,
    UnknownGeneratorError,
    commutator,
    decide_equal,
    is_identity,
    map_word,
    preset,
)
from pkg.braid.words import parse_word


def test_rb3_conjugation_swaps_free_generators():
    group = preset("RB3")
    assert decide_equal(group, parse_word("gamma alpha gamma^-1"), parse_word("beta"))
    assert decide_equal(group, parse_word("gamma^-1 beta gamma"), parse_word("alpha"))
    assert not decide_equal(group, parse_word("alpha beta"), parse_word("beta alpha"))


def test_rb3_gamma_squared_is_central():
    group = preset("RB3")
    square = parse_word("gamma gamma")
    for name in ("alpha", "beta", "gamma"):
        assert is_identity(group, commutator(square, parse_word(name)))
    assert not is_identity(group, commutator(parse_word("gamma"), parse_word("alpha")))


def test_semidirect_normal_form_splits_word():
    group = preset("RB3")
    assert group.normal_form(parse_word("gamma alpha")) == (parse_word("beta"), parse_word("gamma"))


def test_semidirect_rejects_non_inverse_rules():
    with pytest.raises(ValueError):
        SemidirectSpec(
            free=("a", "b"),
            acting=("g",),
            action={"g": {"a": parse_word("a b"), "b": parse_word("b")}},
            inverse_action={"g": {"a": parse_word("a"), "b": parse_word("b")}},
        )


def test_braid_preset_decides_braid_relation():
    group = preset("B3")
    assert isinstance(group, BraidGroupSpec)
    assert decide_equal(group, parse_word("x1 x2 x1"), parse_word("x2 x1 x2"))
    assert not decide_equal(group, parse_word("x1"), parse_word("x2"))


def test_free_group_is_free():
    group = FreeGroupSpec(("a", "b"))
    assert decide_equal(group, parse_word("a b b^-1"), parse_word("a"))
    assert not is_identity(group, commutator(parse_word("a"), parse_word("b")))


def test_unknown_generators_are_reported():
    with pytest.raises(UnknownGeneratorError):
        decide_equal(preset("F2"), parse_word("a c"), parse_word("a"))
    with pytest.raises(ValueError):
        preset("B9")


def test_map_word_applies_homomorphism():
    images = {"alpha": parse_word("x2^-1"), "beta": parse_word("x1^-1"), "gamma": parse_word("x1 x2 x1")}
    image = map_word(parse_word("gamma alpha gamma^-1 beta^-1"), images)
    assert is_identity(preset("B3"), image)
    with pytest.raises(UnknownGeneratorError):
        map_word(parse_word("delta"), images)
