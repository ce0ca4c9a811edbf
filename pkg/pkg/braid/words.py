from __future__ import annotations

import re
from typing import Iterable, Mapping

# A word is a tuple of (generator name, exponent +1/-1) letters.
Letter = tuple[str, int]
Word = tuple[Letter, ...]

EMPTY: Word = ()

_TOKEN = re.compile(r"^(?P<name>[^\s^]+?)(?:\^(?P<power>[+-]?\d+))?$")


def reduce_word(letters: Iterable[Letter]) -> Word:
    """Free reduction with a stack."""
    stack: list[Letter] = []
    for name, exponent in letters:
        if stack and stack[-1][0] == name and stack[-1][1] == -exponent:
            stack.pop()
        else:
            stack.append((name, exponent))
    return tuple(stack)


def cyclically_reduce(word: Word) -> Word:
    word = reduce_word(word)
    start, end = 0, len(word)
    while end - start > 1 and word[start][0] == word[end - 1][0] and word[start][1] == -word[end - 1][1]:
        start += 1
        end -= 1
    return word[start:end]


def inverse_word(word: Word) -> Word:
    return tuple((name, -exponent) for name, exponent in reversed(word))


def concat(*words: Word) -> Word:
    return reduce_word(letter for word in words for letter in word)


def power(word: Word, exponent: int) -> Word:
    base = word if exponent >= 0 else inverse_word(word)
    return reduce_word(base * abs(exponent))


def letter(name: str, exponent: int = 1) -> Word:
    return tuple((name, 1 if exponent > 0 else -1) for _ in range(abs(exponent)))


def parse_word(text: str) -> Word:
    """Space-separated tokens such as ``x1 x2^-1``; ``1`` or an empty string is the identity."""
    letters: list[Letter] = []
    for token in text.split():
        if token == "1":
            continue
        match = _TOKEN.match(token)
        if not match:
            raise ValueError(f"bad word token {token!r}")
        exponent = int(match.group("power") or 1)
        letters.extend(letter(match.group("name"), exponent))
    return reduce_word(letters)


def format_word(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(name if exponent > 0 else f"{name}^-1" for name, exponent in word)


def generators_of(word: Word) -> set[str]:
    return {name for name, _ in word}


def substitute(word: Word, images: Mapping[str, Word]) -> Word:
    """Replace each generator by its image word; unmapped generators are kept."""
    letters: list[Letter] = []
    for name, exponent in word:
        image = images.get(name)
        if image is None:
            letters.append((name, exponent))
        elif exponent > 0:
            letters.extend(image)
        else:
            letters.extend(inverse_word(image))
    return reduce_word(letters)
