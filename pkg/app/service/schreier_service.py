from __future__ import annotations

from collections import Counter, deque
from typing import Mapping, Sequence

from loguru import logger
from sympy.combinatorics import Permutation, PermutationGroup

from app.entities.entity import FiniteQuotient, Presentation, SubgroupPresentation, TietzeResult, Transversal
from pkg.braid.groups import GroupSpec, is_identity
from pkg.braid.words import Word, concat, cyclically_reduce, format_word, inverse_word, parse_word, reduce_word, substitute

TIETZE_BUDGET = 1000


class NotInSubgroupError(ValueError):
    pass


def schreier_name(representative: Word, generator: str) -> str:
    head = "*".join(name if exponent > 0 else f"{name}^-1" for name, exponent in representative) or "1"
    return f"s[{head},{generator}]"


def cycles_to_permutation(cycles: Sequence[Sequence[int]], degree: int) -> Permutation:
    """1-based cycles such as [[2, 3]] to a sympy permutation on ``degree`` points."""
    return Permutation([[point - 1 for point in cycle] for cycle in cycles if cycle], size=degree)


class SchreierService:
    """Reidemeister-Schreier rewriting for preimages of finite permutation quotients, plus Tietze elimination."""

    def quotient(self, presentation: Presentation, images: Mapping[str, Permutation], degree: int) -> FiniteQuotient:
        missing = set(presentation.generators) - set(images)
        if missing:
            raise ValueError(f"no image for generators {sorted(missing)}")
        quotient = FiniteQuotient(degree=degree, images=dict(images))
        for relator in presentation.relators:
            if not self.image(relator, quotient).is_Identity:
                raise ValueError(f"relator {format_word(relator)} does not map to the identity")
        return quotient

    def image(self, word: Word, quotient: FiniteQuotient) -> Permutation:
        # sympy multiplies left to right: p*q applies p first.
        result = Permutation(quotient.degree - 1)
        for name, exponent in word:
            value = quotient.images[name]
            result = result * (value if exponent > 0 else value**-1)
        return result

    def _letters(self, presentation: Presentation) -> list[tuple[str, int]]:
        return [(name, exponent) for name in presentation.generators for exponent in (1, -1)]

    def schreier_transversal(
        self,
        presentation: Presentation,
        quotient: FiniteQuotient,
        representatives: Sequence[Word] | None = None,
    ) -> Transversal:
        target = PermutationGroup([quotient.images[name] for name in presentation.generators]) if presentation.generators else None
        order = target.order() if target is not None else 1
        if representatives is not None:
            return self._check_transversal(representatives, quotient, order)

        found: dict[Permutation, Word] = {Permutation(quotient.degree - 1): ()}
        queue = deque(found)
        letters = self._letters(presentation)
        while queue:
            element = queue.popleft()
            for name, exponent in letters:
                value = quotient.images[name]
                following = element * (value if exponent > 0 else value**-1)
                if following not in found:
                    found[following] = found[element] + ((name, exponent),)
                    queue.append(following)
        if len(found) != order:
            raise ValueError(f"images reach {len(found)} of {order} elements")
        logger.debug("Breadth-first transversal with {count} cosets", count=len(found))
        return Transversal(found)

    def _check_transversal(self, representatives: Sequence[Word], quotient: FiniteQuotient, order: int) -> Transversal:
        table: dict[Permutation, Word] = {}
        for word in representatives:
            word = reduce_word(word)
            element = self.image(word, quotient)
            if element in table:
                raise ValueError(f"representatives {format_word(table[element])} and {format_word(word)} share a coset")
            table[element] = word
        if len(table) != order:
            raise ValueError(f"transversal has {len(table)} representatives for {order} cosets")
        identity = Permutation(quotient.degree - 1)
        if table.get(identity) != ():
            raise ValueError("the identity coset must be represented by the empty word")
        for word in table.values():
            for cut in range(1, len(word)):
                prefix = word[:cut]
                if table.get(self.image(prefix, quotient)) != prefix:
                    raise ValueError(f"prefix {format_word(prefix)} of {format_word(word)} is not a representative")
        return Transversal(table)

    def _symbol(self, representative: Word, name: str, transversal: Transversal, quotient: FiniteQuotient) -> tuple[str, Word]:
        element = self.image(representative + ((name, 1),), quotient)
        definition = concat(representative, ((name, 1),), inverse_word(transversal.representatives[element]))
        return schreier_name(representative, name), definition

    def rewrite(self, word: Word, transversal: Transversal, quotient: FiniteQuotient) -> Word:
        """tau(word) over the nontrivial Schreier generators."""
        element = Permutation(quotient.degree - 1)
        output: list[tuple[str, int]] = []
        for name, exponent in word:
            value = quotient.images[name]
            if exponent > 0:
                representative = transversal.representatives[element]
                element = element * value
            else:
                element = element * value**-1
                representative = transversal.representatives[element]
            symbol, definition = self._symbol(representative, name, transversal, quotient)
            if definition:
                output.append((symbol, exponent))
        if not element.is_Identity:
            raise NotInSubgroupError(f"{format_word(word)} does not lie in the subgroup")
        return reduce_word(output)

    def subgroup_presentation(
        self,
        presentation: Presentation,
        quotient: FiniteQuotient,
        transversal: Transversal,
    ) -> SubgroupPresentation:
        definitions: dict[str, Word] = {}
        for representative in transversal.representatives.values():
            for name in presentation.generators:
                symbol, definition = self._symbol(representative, name, transversal, quotient)
                if definition:
                    definitions[symbol] = definition
        relators = []
        for representative in transversal.representatives.values():
            for relator in presentation.relators:
                rewritten = self.rewrite(concat(representative, relator, inverse_word(representative)), transversal, quotient)
                if rewritten:
                    relators.append(rewritten)
        logger.info(
            "Rewrote {relators} relators over {generators} Schreier generators",
            relators=len(relators),
            generators=len(definitions),
        )
        return SubgroupPresentation(Presentation(tuple(definitions), tuple(relators)), definitions)

    def tietze_simplify(self, presentation: Presentation, budget: int = TIETZE_BUDGET) -> TietzeResult:
        """Eliminate generators that occur exactly once in some relator, shortest relator first."""
        generators = list(presentation.generators)
        relators = [word for word in (cyclically_reduce(relator) for relator in presentation.relators) if word]
        eliminated: list[tuple[str, Word]] = []
        partial = False
        while True:
            rank = {name: index for index, name in enumerate(generators)}
            candidates = []
            for relator in relators:
                counts = Counter(name for name, _ in relator)
                singles = [name for name in generators if counts.get(name) == 1]
                if singles:
                    key = (len(relator), tuple((rank[name], exponent) for name, exponent in relator))
                    candidates.append((key, relator, singles))
            if not candidates:
                break
            if len(eliminated) >= budget:
                partial = True
                logger.warning("Tietze budget of {budget} eliminations exhausted", budget=budget)
                break
            _, relator, singles = min(candidates, key=lambda item: item[0])
            target = max(singles, key=rank.__getitem__)
            cut = next(index for index, (name, _) in enumerate(relator) if name == target)
            rotated = relator[cut:] + relator[:cut]
            rest = rotated[1:]
            value = inverse_word(rest) if rotated[0][1] > 0 else reduce_word(rest)
            eliminated.append((target, value))
            relators.remove(relator)
            relators = [word for word in (cyclically_reduce(substitute(item, {target: value})) for item in relators) if word]
            generators.remove(target)
            logger.debug("Eliminated {name} = {value}", name=target, value=format_word(value))
        return TietzeResult(Presentation(tuple(generators), tuple(relators)), eliminated, partial)

    def expand(self, word: Word, definitions: Mapping[str, Word]) -> Word:
        return substitute(word, definitions)

    def is_sound(self, presentation: Presentation, definitions: Mapping[str, Word], group: GroupSpec) -> bool:
        """Every relator, written back in ambient generators, is trivial in ``group``."""
        return all(is_identity(group, self.expand(relator, definitions)) for relator in presentation.relators)


def rb3_case() -> tuple[Presentation, dict[str, Permutation], list[Word]]:
    """RB_3 with gamma swapping alpha and beta, mapped onto the symmetric group on three points."""
    presentation = Presentation(
        ("alpha", "beta", "gamma"),
        (parse_word("alpha gamma beta^-1 gamma^-1"), parse_word("beta gamma alpha^-1 gamma^-1")),
    )
    images = {
        "alpha": cycles_to_permutation([[2, 3]], 3),
        "beta": cycles_to_permutation([[1, 2]], 3),
        "gamma": cycles_to_permutation([[1, 3]], 3),
    }
    transversal = [parse_word(text) for text in ("1", "alpha", "beta", "gamma", "alpha beta", "beta alpha")]
    return presentation, images, transversal


def b3_case() -> tuple[Presentation, dict[str, Permutation]]:
    presentation = Presentation(("x1", "x2"), (parse_word("x1 x2 x1 x2^-1 x1^-1 x2^-1"),))
    images = {"x1": cycles_to_permutation([[1, 2]], 3), "x2": cycles_to_permutation([[2, 3]], 3)}
    return presentation, images

