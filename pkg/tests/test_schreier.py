from __future__ import annotations

import pytest

from app.entities.entity import Presentation
from app.service.schreier_service import NotInSubgroupError, b3_case, cycles_to_permutation, rb3_case, schreier_name
from pkg.braid.artin import BraidWord, aij_word, braid_equal, permutation
from pkg.braid.groups import decide_equal, preset
from pkg.braid.words import parse_word

SURVIVORS = {
    "s[alpha,alpha]": "alpha alpha",
    "s[alpha,gamma]": "alpha gamma alpha^-1 beta^-1",
    "s[beta,beta]": "beta beta",
    "s[beta,gamma]": "beta gamma beta^-1 alpha^-1",
    "s[gamma,gamma]": "gamma gamma",
}


@pytest.fixture
def rb3(schreier):
    presentation, images, representatives = rb3_case()
    quotient = schreier.quotient(presentation, images, 3)
    transversal = schreier.schreier_transversal(presentation, quotient, representatives)
    return presentation, quotient, transversal


def test_schreier_names():
    assert schreier_name((), "gamma") == "s[1,gamma]"
    assert schreier_name(parse_word("alpha beta^-1"), "gamma") == "s[alpha*beta^-1,gamma]"


def test_cycles_are_one_based():
    assert cycles_to_permutation([[2, 3]], 3).array_form == [0, 2, 1]
    assert cycles_to_permutation([], 3).is_Identity


def test_quotient_rejects_bad_images(schreier):
    presentation, _ = b3_case()
    with pytest.raises(ValueError, match="no image"):
        schreier.quotient(presentation, {"x1": cycles_to_permutation([[1, 2]], 3)}, 3)
    images = {"x1": cycles_to_permutation([[1, 2]], 3), "x2": cycles_to_permutation([[1, 2, 3]], 3)}
    with pytest.raises(ValueError, match="does not map to the identity"):
        schreier.quotient(presentation, images, 3)


def test_given_transversal_is_checked(schreier):
    presentation, images, representatives = rb3_case()
    quotient = schreier.quotient(presentation, images, 3)
    with pytest.raises(ValueError, match="5 representatives for 6 cosets"):
        schreier.schreier_transversal(presentation, quotient, representatives[:-1])
    with pytest.raises(ValueError, match="share a coset"):
        schreier.schreier_transversal(presentation, quotient, representatives[:-1] + [parse_word("alpha alpha")])


def test_rewrite_follows_cosets(schreier, rb3):
    _, quotient, transversal = rb3
    assert schreier.rewrite(parse_word("alpha alpha"), transversal, quotient) == (("s[alpha,alpha]", 1),)
    with pytest.raises(NotInSubgroupError):
        schreier.rewrite(parse_word("alpha"), transversal, quotient)


def test_rb3_raw_presentation(schreier, rb3):
    presentation, quotient, transversal = rb3
    raw = schreier.subgroup_presentation(presentation, quotient, transversal)
    assert len(raw.presentation.generators) == 13
    assert len(raw.presentation.relators) == 12
    assert schreier.is_sound(raw.presentation, raw.definitions, preset("RB3"))


def test_rb3_simplifies_to_five_generators(schreier, rb3):
    presentation, quotient, transversal = rb3
    raw = schreier.subgroup_presentation(presentation, quotient, transversal)
    result = schreier.tietze_simplify(raw.presentation)
    assert not result.partial
    assert sorted(result.presentation.generators) == sorted(SURVIVORS)
    assert len(result.presentation.relators) == 4
    assert schreier.is_sound(result.presentation, raw.definitions, preset("RB3"))
    group = preset("RB3")
    for name, text in SURVIVORS.items():
        assert decide_equal(group, raw.definitions[name], parse_word(text)), name


def test_tietze_eliminates_single_occurrences(schreier):
    presentation = Presentation(("a", "b", "c"), (parse_word("a b^-1"),))
    result = schreier.tietze_simplify(presentation)
    assert result.presentation.generators == ("a", "c")
    assert result.presentation.relators == ()
    assert result.eliminated == [("b", parse_word("a"))]
    assert schreier.expand(parse_word("b c"), dict(result.eliminated)) == parse_word("a c")


def test_tietze_budget_stops_early(schreier):
    presentation = Presentation(("a", "b"), (parse_word("a b^-1"),))
    result = schreier.tietze_simplify(presentation, budget=0)
    assert result.partial
    assert result.presentation.generators == ("a", "b")


def test_b3_kernel_is_pure(schreier):
    presentation, images = b3_case()
    quotient = schreier.quotient(presentation, images, 3)
    transversal = schreier.schreier_transversal(presentation, quotient)
    assert len(transversal.representatives) == 6
    assert all(len(word) <= 3 for word in transversal.representatives.values())
    result = schreier.subgroup_presentation(presentation, quotient, transversal)
    words = [BraidWord.from_word(3, word) for word in result.definitions.values()]
    assert all(permutation(word) == (0, 1, 2) for word in words)
    assert any(braid_equal(word, aij_word(1, 2, 3)) for word in words)
    assert schreier.is_sound(result.presentation, result.definitions, preset("B3"))
