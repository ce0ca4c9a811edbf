from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from pkg.braid.artin import BraidWord, braid_equal
from pkg.braid.words import Word, concat, generators_of, inverse_word, reduce_word, substitute


class UnknownGeneratorError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class FreeGroupSpec:
    generators: tuple[str, ...]

    def normal_form(self, word: Word) -> Word:
        return reduce_word(word)


@dataclass(frozen=True, slots=True)
class BraidGroupSpec:
    n: int

    @property
    def generators(self) -> tuple[str, ...]:
        return tuple(f"x{k}" for k in range(1, self.n))

    def as_braid(self, word: Word) -> BraidWord:
        return BraidWord.from_word(self.n, word)


@dataclass(frozen=True, slots=True)
class SemidirectSpec:
    """F(free) x| F(acting); ``action[g]`` maps each free generator to its image under conjugation by g."""

    free: tuple[str, ...]
    acting: tuple[str, ...]
    action: Mapping[str, Mapping[str, Word]]
    inverse_action: Mapping[str, Mapping[str, Word]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        inverse_action = dict(self.inverse_action)
        for name in self.acting:
            if name not in self.action:
                raise ValueError(f"acting generator {name!r} has no rule")
            if name not in inverse_action:
                inverse_action[name] = _invert_permutation_action(self.action[name])
        object.__setattr__(self, "inverse_action", inverse_action)
        self._check_critical_pairs()

    @property
    def generators(self) -> tuple[str, ...]:
        return self.free + self.acting

    def _check_critical_pairs(self) -> None:
        # g g^-1 x and g^-1 g x must both rewrite back to x.
        for name in self.acting:
            forward, backward = self.action[name], self.inverse_action[name]
            for generator in self.free:
                there_and_back = substitute(substitute(((generator, 1),), backward), forward)
                back_and_there = substitute(substitute(((generator, 1),), forward), backward)
                if there_and_back != ((generator, 1),) or back_and_there != ((generator, 1),):
                    raise ValueError(f"rules for {name!r} are not mutually inverse on {generator!r}")

    def normal_form(self, word: Word) -> tuple[Word, Word]:
        """Push acting letters to the right: returns (free part, acting part)."""
        free_part: Word = ()
        acting_part: Word = ()
        for name, exponent in word:
            if name in self.acting:
                acting_part = reduce_word(acting_part + ((name, exponent),))
                continue
            image: Word = ((name, exponent),)
            for acting_name, acting_exponent in reversed(acting_part):
                rules = self.action[acting_name] if acting_exponent > 0 else self.inverse_action[acting_name]
                image = substitute(image, rules)
            free_part = reduce_word(free_part + image)
        return free_part, acting_part


def _invert_permutation_action(rules: Mapping[str, Word]) -> dict[str, Word]:
    inverse: dict[str, Word] = {}
    for source, image in rules.items():
        if len(image) != 1:
            raise ValueError("inverse rules must be given explicitly for non-permutation actions")
        name, exponent = image[0]
        inverse[name] = ((source, exponent),)
    return inverse


GroupSpec = FreeGroupSpec | BraidGroupSpec | SemidirectSpec


def decide_equal(group: GroupSpec, w1: Word, w2: Word) -> bool:
    allowed = set(group.generators)
    unknown = (generators_of(w1) | generators_of(w2)) - allowed
    if unknown:
        raise UnknownGeneratorError(f"unknown generators {sorted(unknown)}")
    if isinstance(group, BraidGroupSpec):
        return braid_equal(group.as_braid(w1), group.as_braid(w2))
    return group.normal_form(w1) == group.normal_form(w2)


def is_identity(group: GroupSpec, word: Word) -> bool:
    return decide_equal(group, word, ())


def map_word(word: Word, images: Mapping[str, Word]) -> Word:
    """Homomorphic image; every generator of ``word`` must be mapped."""
    missing = generators_of(word) - set(images)
    if missing:
        raise UnknownGeneratorError(f"no image for {sorted(missing)}")
    return substitute(word, images)


RB3 = SemidirectSpec(
    free=("alpha", "beta"),
    acting=("gamma",),
    action={"gamma": {"alpha": (("beta", 1),), "beta": (("alpha", 1),)}},
)

PRESETS: dict[str, GroupSpec] = {
    "B3": BraidGroupSpec(3),
    "B4": BraidGroupSpec(4),
    "RB3": RB3,
    "F2": FreeGroupSpec(("a", "b")),
}


def preset(name: str) -> GroupSpec:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown group preset {name!r}; available: {', '.join(PRESETS)}") from None


def commutator(a: Word, b: Word) -> Word:
    return concat(a, b, inverse_word(a), inverse_word(b))
