from __future__ import annotations

from fractions import Fraction

from pkg.loopdsl.ast import LoopSpec, Segment, Space, substitute_t
from pkg.loopdsl.loops import LoopValidationError, basepoint, same_point


def reparametrize(loop: LoopSpec, start: Fraction, end: Fraction) -> tuple[Segment, ...]:
    """The segments of ``loop`` run at constant speed over [start, end] instead of [0,1]."""
    start, end = Fraction(start), Fraction(end)
    if not 0 <= start < end <= 1:
        raise ValueError(f"bad reparametrization window [{start}, {end}]")
    width = end - start
    scale, shift = 1 / width, -start / width
    return tuple(
        Segment(
            start + width * segment.start,
            start + width * segment.end,
            tuple(substitute_t(expr, scale, shift) for expr in segment.coefficients),
        )
        for segment in loop.segments
    )


def _name(*parts: str | None) -> str | None:
    return None if any(part is None for part in parts) else "".join(parts)


def _check_compatible(*loops: LoopSpec) -> Space:
    first = loops[0]
    point = basepoint(first)
    for other in loops[1:]:
        if other.n != first.n:
            raise LoopValidationError(f"degree mismatch: {first.n} vs {other.n}")
        if not same_point(point, basepoint(other)):
            raise LoopValidationError("basepoint mismatch")
    spaces = {loop.space for loop in loops}
    return spaces.pop() if len(spaces) == 1 else Space.C


def concat(first: LoopSpec, second: LoopSpec) -> LoopSpec:
    space = _check_compatible(first, second)
    half = Fraction(1, 2)
    segments = reparametrize(first, Fraction(0), half) + reparametrize(second, half, Fraction(1))
    return LoopSpec(first.n, segments, space, _name(first.name, "*", second.name))


def invert(loop: LoopSpec) -> LoopSpec:
    segments = tuple(
        Segment(1 - segment.end, 1 - segment.start, tuple(substitute_t(expr, Fraction(-1), Fraction(1)) for expr in segment.coefficients))
        for segment in reversed(loop.segments)
    )
    return LoopSpec(loop.n, segments, loop.space, _name(loop.name, "^-1"))


def conjugate(loop: LoopSpec, by: LoopSpec) -> LoopSpec:
    """by . loop . by^-1, each third of the time."""
    space = _check_compatible(loop, by)
    third = Fraction(1, 3)
    segments = (
        reparametrize(by, Fraction(0), third)
        + reparametrize(loop, third, 2 * third)
        + reparametrize(invert(by), 2 * third, Fraction(1))
    )
    return LoopSpec(loop.n, segments, space, _name(by.name, "*", loop.name, "*", by.name, "^-1"))
