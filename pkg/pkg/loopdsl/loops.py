from __future__ import annotations

from fractions import Fraction

from mpmath.ctx_mp import MPContext

from pkg.loopdsl.ast import LoopSpec, Segment, evaluate, evaluate_exact
from pkg.polycore.numbers import DEFAULT_CONTEXT, numeric_context, to_approx
from pkg.polycore.poly import Poly

CONTINUITY_TOLERANCE = 1e-12
CHECK_PRECISION = 113


class LoopValidationError(ValueError):
    pass


def _as_fraction(t) -> Fraction | None:
    if isinstance(t, (int, Fraction)):
        return Fraction(t)
    return None


def _mpf(value: Fraction, ctx: MPContext):
    return ctx.mpf(value.numerator) / value.denominator


def _segment_values(segment: Segment, t: Fraction) -> tuple | None:
    values = []
    for expr in segment.coefficients:
        value = evaluate_exact(expr, t)
        if value is None:
            return None
        values.append(value)
    return tuple(values)


def _segment_approx(segment: Segment, t, ctx: MPContext) -> tuple:
    return tuple(evaluate(expr, t, ctx) for expr in segment.coefficients)


def check_structure(loop: LoopSpec, tolerance: float = CONTINUITY_TOLERANCE) -> LoopSpec:
    """Intervals partition [0,1] and adjacent segments agree at shared endpoints."""
    segments = loop.segments
    if not segments:
        raise LoopValidationError("loop has no segments")
    for segment in segments:
        if segment.start >= segment.end:
            raise LoopValidationError(f"empty interval [{segment.start}, {segment.end}]")
    if segments[0].start != 0 or segments[-1].end != 1:
        raise LoopValidationError("intervals do not cover [0,1]")
    ctx = numeric_context(CHECK_PRECISION)
    for left, right in zip(segments, segments[1:]):
        if left.end < right.start:
            raise LoopValidationError(f"intervals do not cover [0,1]: gap between {left.end} and {right.start}")
        if left.end > right.start:
            raise LoopValidationError(f"intervals overlap on [{right.start}, {left.end}]")
        boundary = left.end
        exact_left, exact_right = _segment_values(left, boundary), _segment_values(right, boundary)
        if exact_left is not None and exact_right is not None:
            if exact_left != exact_right:
                raise LoopValidationError(f"segments disagree at t={boundary}")
            continue
        point = _mpf(boundary, ctx)
        approx_left, approx_right = _segment_approx(left, point, ctx), _segment_approx(right, point, ctx)
        for a, b in zip(approx_left, approx_right):
            if abs(a - b) > tolerance * max(1, abs(a)):
                raise LoopValidationError(f"segments disagree at t={boundary} by {ctx.nstr(abs(a - b), 5)}")
    return loop


def exact_at(loop: LoopSpec, t: Fraction) -> Poly | None:
    values = _segment_values(loop.segment_at(Fraction(t)), Fraction(t))
    return None if values is None else Poly(values)


def eval_loop(loop: LoopSpec, t, ctx: MPContext | None = None) -> Poly:
    """Floating coefficients of the loop at ``t``."""
    ctx = ctx or getattr(t, "context", None) or DEFAULT_CONTEXT
    rational = _as_fraction(t)
    if rational is not None:
        segment = loop.segment_at(rational)
        point = _mpf(rational, ctx)
    else:
        point = ctx.mpf(t)
        if not 0 <= point <= 1:
            raise ValueError(f"t={t} outside [0,1]")
        segment = next(
            (item for item in loop.segments if _mpf(item.start, ctx) <= point <= _mpf(item.end, ctx)),
            loop.segments[-1],
        )
    return Poly(_segment_approx(segment, point, ctx))


def basepoint(loop: LoopSpec, ctx: MPContext | None = None) -> Poly:
    exact = exact_at(loop, Fraction(0))
    if exact is not None:
        return exact
    return eval_loop(loop, Fraction(0), ctx or numeric_context(CHECK_PRECISION))


def closing_gap(loop: LoopSpec, ctx: MPContext | None = None):
    """Largest coefficient difference between t=0 and t=1; exact zero when both ends are exact and equal."""
    start, end = exact_at(loop, Fraction(0)), exact_at(loop, Fraction(1))
    ctx = ctx or numeric_context(CHECK_PRECISION)
    if start is not None and end is not None and start == end:
        return ctx.mpf(0)
    start, end = eval_loop(loop, Fraction(0), ctx), eval_loop(loop, Fraction(1), ctx)
    size = max(len(start.coefficients), len(end.coefficients))
    return max(
        (abs(to_approx(start.coefficient(k), ctx) - to_approx(end.coefficient(k), ctx)) for k in range(size)),
        default=ctx.mpf(0),
    )


def same_point(a: Poly, b: Poly, tolerance: float = CONTINUITY_TOLERANCE) -> bool:
    if a.is_exact and b.is_exact:
        return a == b
    ctx = numeric_context(CHECK_PRECISION)
    size = max(len(a.coefficients), len(b.coefficients))
    return all(
        abs(to_approx(a.coefficient(k), ctx) - to_approx(b.coefficient(k), ctx)) <= tolerance * max(1, abs(to_approx(a.coefficient(k), ctx)))
        for k in range(size)
    )


def sample_times(loop: LoopSpec, count: int, ctx: MPContext) -> list:
    """Chebyshev-Lobatto nodes on each segment, denser near the segment ends."""
    times = []
    for segment in loop.segments:
        start, end = _mpf(segment.start, ctx), _mpf(segment.end, ctx)
        nodes = max(3, int(round(count * float(segment.end - segment.start))))
        middle, half = (start + end) / 2, (end - start) / 2
        for k in range(nodes):
            times.append(middle - half * ctx.cospi(ctx.mpf(k) / (nodes - 1)))
    return sorted(times)
