from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from sympy.combinatorics import Permutation

from pkg.braid.words import Word, format_word, parse_word

# Free words for the Artin action: nonzero ints, +k is y_k and -k its inverse.
FreeWord = tuple[int, ...]


def _reduce_free(letters: Iterable[int]) -> FreeWord:
    stack: list[int] = []
    for value in letters:
        if stack and stack[-1] == -value:
            stack.pop()
        else:
            stack.append(value)
    return tuple(stack)


def _invert_free(word: FreeWord) -> FreeWord:
    return tuple(-value for value in reversed(word))


@dataclass(frozen=True, slots=True)
class BraidWord:
    n: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("braid group needs at least one strand")
        stack: list[tuple[int, int]] = []
        for index, exponent in self.letters:
            if not 1 <= index <= self.n - 1:
                raise ValueError(f"generator x{index} outside B_{self.n}")
            if exponent not in (1, -1):
                raise ValueError(f"exponent {exponent} is not +1/-1")
            if stack and stack[-1] == (index, -exponent):
                stack.pop()
            else:
                stack.append((index, exponent))
        object.__setattr__(self, "letters", tuple(stack))

    @classmethod
    def generator(cls, n: int, index: int, exponent: int = 1) -> BraidWord:
        return cls(n, tuple((index, 1 if exponent > 0 else -1) for _ in range(abs(exponent))))

    @classmethod
    def parse(cls, n: int, text: str) -> BraidWord:
        return cls.from_word(n, parse_word(text))

    @classmethod
    def from_word(cls, n: int, word: Word) -> BraidWord:
        letters = []
        for name, exponent in word:
            if not (name.startswith("x") and name[1:].isdigit()):
                raise ValueError(f"{name!r} is not a braid generator")
            letters.append((int(name[1:]), exponent))
        return cls(n, tuple(letters))

    def to_word(self) -> Word:
        return tuple((f"x{index}", exponent) for index, exponent in self.letters)

    def __mul__(self, other: BraidWord) -> BraidWord:
        if self.n != other.n:
            raise ValueError(f"strand mismatch: {self.n} vs {other.n}")
        return BraidWord(self.n, self.letters + other.letters)

    def __pow__(self, exponent: int) -> BraidWord:
        base = self if exponent >= 0 else self.inverse()
        return BraidWord(self.n, base.letters * abs(exponent))

    def inverse(self) -> BraidWord:
        return BraidWord(self.n, tuple((index, -exponent) for index, exponent in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self.to_word())


@dataclass(frozen=True, slots=True)
class FreeAutomorphism:
    rank: int
    images: tuple[FreeWord, ...]

    @classmethod
    def identity(cls, rank: int) -> FreeAutomorphism:
        return cls(rank, tuple((k,) for k in range(1, rank + 1)))

    def apply(self, word: Iterable[int]) -> FreeWord:
        letters: list[int] = []
        for value in word:
            image = self.images[abs(value) - 1]
            letters.extend(image if value > 0 else _invert_free(image))
        return _reduce_free(letters)

    def compose(self, inner: FreeAutomorphism) -> FreeAutomorphism:
        """self o inner."""
        return FreeAutomorphism(self.rank, tuple(self.apply(image) for image in inner.images))

    @property
    def is_identity(self) -> bool:
        return all(image == (k,) for k, image in enumerate(self.images, start=1))


def _generator_action(rank: int, index: int, exponent: int) -> FreeAutomorphism:
    images = [(k,) for k in range(1, rank + 1)]
    i, j = index, index + 1
    if exponent > 0:
        images[i - 1] = (i, j, -i)
        images[j - 1] = (i,)
    else:
        images[i - 1] = (j,)
        images[j - 1] = (-j, i, j)
    return FreeAutomorphism(rank, tuple(images))


def artin_act(w: BraidWord) -> FreeAutomorphism:
    """x_i: y_i -> y_i y_(i+1) y_i^-1, y_(i+1) -> y_i; composed left to right."""
    result = FreeAutomorphism.identity(w.n)
    for index, exponent in w.letters:
        result = result.compose(_generator_action(w.n, index, exponent))
    return result


def braid_equal(w1: BraidWord, w2: BraidWord) -> bool:
    if w1.n != w2.n:
        raise ValueError(f"strand mismatch: {w1.n} vs {w2.n}")
    return artin_act(w1) == artin_act(w2)


def permutation(w: BraidWord) -> tuple[int, ...]:
    """Entry k is the final position of the strand starting at position k (0-based)."""
    order = list(range(w.n))
    for index, _ in w.letters:
        order[index - 1], order[index] = order[index], order[index - 1]
    final = [0] * w.n
    for position, strand in enumerate(order):
        final[strand] = position
    return tuple(final)


def cycle_notation(perm: tuple[int, ...]) -> str:
    cycles = Permutation(list(perm)).cyclic_form
    if not cycles:
        return "()"
    return "".join("(" + "".join(str(point + 1) for point in cycle) + ")" for cycle in cycles)


def aij_word(i: int, j: int, n: int) -> BraidWord:
    if not 1 <= i < j <= n:
        raise ValueError(f"A_{i}{j} needs 1 <= i < j <= n={n}")
    head = tuple((k, 1) for k in range(j - 1, i, -1))
    tail = tuple((k, -1) for k in range(i + 1, j))
    return BraidWord(n, head + ((i, 1), (i, 1)) + tail)


def garside(n: int) -> BraidWord:
    """x_1 (x_2 x_1) ... (x_(n-1) ... x_1)."""
    if n < 2:
        raise ValueError("Garside element needs n >= 2")
    letters = []
    for top in range(1, n):
        letters.extend((k, 1) for k in range(top, 0, -1))
    return BraidWord(n, tuple(letters))


def exponent_sum(w: BraidWord) -> tuple[int, ...]:
    sums = [0] * (w.n - 1)
    for index, exponent in w.letters:
        sums[index - 1] += exponent
    return tuple(sums)
