from __future__ import annotations

from fractions import Fraction

from loguru import logger
from mpmath.ctx_mp import MPContext

from app.entities.entity import CrossingEvent, HomotopyCheck, LineClearance, StrandPath, TraceResult
from app.service.loop_service import fiber_polynomial
from pkg.braid.artin import BraidWord
from pkg.config.config import Settings
from pkg.loopdsl import library
from pkg.loopdsl.ast import LoopSpec, evaluate
from pkg.loopdsl.loops import eval_loop
from pkg.polycore.discriminant import discriminant
from pkg.polycore.numbers import numeric_context, to_approx
from pkg.polycore.roots import RootFindingError, min_separation, roots, sort_key

# Vertical lines Re(z) = c that the strands of each fourth-degree loop never touch.
SEPARATING_LINES: dict[str, tuple[int, ...]] = {
    "rc4_delta1": (1, 3),
    "rc4_delta2": (0, 3),
    "rc4_delta3": (1,),
    "rc4_Gamma1": (0, 3),
    "rc4_Gamma2": (0, 1),
}
HOMOTOPY_GRID = 64


class TraceError(RuntimeError):
    def __init__(self, message: str, kind: str, t) -> None:
        super().__init__(f"{message} at t={t}")
        self.kind = kind
        self.t = t


def _re_order(points: list) -> tuple[int, ...]:
    return tuple(sorted(range(len(points)), key=lambda k: (points[k].real, points[k].imag)))


def _adjacent_swaps(old: tuple[int, ...], new: tuple[int, ...]) -> list[tuple[int, int, int]]:
    """Bubble ``old`` into ``new``; each entry is (position, left strand, right strand) before the swap."""
    rank = {strand: position for position, strand in enumerate(new)}
    current = list(old)
    swaps = []
    changed = True
    while changed:
        changed = False
        for position in range(len(current) - 1):
            left, right = current[position], current[position + 1]
            if rank[left] > rank[right]:
                swaps.append((position, left, right))
                current[position], current[position + 1] = right, left
                changed = True
    return swaps


def _mpf(value: Fraction, ctx: MPContext):
    return ctx.mpf(value.numerator) / value.denominator


class TracerService:
    """Continues the roots of a loop of polynomials and reads off the braid they sweep."""

    def __init__(self, settings: Settings) -> None:
        self._settings = settings

    def trace(self, loop: LoopSpec, max_step: float | None = None, record_path: bool = False) -> TraceResult:
        precision = self._settings.precision_bits
        result = self._trace_at(loop, precision, max_step, record_path)
        if result.min_separation_seen < self._settings.retry_separation:
            logger.info(
                "Retrying {name} at {bits} bits (separation {sep:.3g})",
                name=loop.name,
                bits=2 * precision,
                sep=result.min_separation_seen,
            )
            result = self._trace_at(loop, 2 * precision, max_step, record_path)
        logger.info("Traced {name}: {word} in {steps} steps", name=loop.name, word=str(result.word), steps=result.steps)
        return result

    def _roots_at(self, loop: LoopSpec, t, start: list, ctx: MPContext) -> list:
        return roots(fiber_polynomial(loop, t, ctx), ctx, start=start, max_iterations=self._settings.root_max_iterations)

    def _trace_at(self, loop: LoopSpec, precision: int, max_step: float | None, record_path: bool) -> TraceResult:
        settings = self._settings
        ctx = numeric_context(precision)
        largest = ctx.mpf(max_step or settings.trace_max_step)
        smallest = ctx.mpf(settings.trace_min_step)
        floor = settings.separation_floor

        first = fiber_polynomial(loop, ctx.mpf(0), ctx)
        current = sorted(roots(first, ctx, max_iterations=settings.root_max_iterations), key=sort_key)
        strands = len(current)
        order = _re_order(current)
        boundaries = [_mpf(value, ctx) for value in loop.boundaries[1:]]

        letters: list[tuple[int, int]] = []
        crossings: list[CrossingEvent] = []
        times, positions = [ctx.mpf(0)], [[point] for point in current]
        min_seen = min_separation(current, ctx) if strands > 1 else ctx.inf
        t, step, steps = ctx.mpf(0), largest, 0

        while t < 1:
            boundary = next(value for value in boundaries if value > t)
            target = min(t + step, boundary)
            separation = min_separation(current, ctx) if strands > 1 else ctx.inf
            if separation < floor:
                raise TraceError("roots collide", "roots collide", ctx.nstr(t, 12))
            try:
                moved = self._roots_at(loop, target, current, ctx)
                accepted = all(abs(moved[k] - current[k]) < separation / 3 for k in range(strands))
            except RootFindingError:
                accepted = False
            except ArithmeticError as exc:
                raise TraceError("roots collide", "roots collide", ctx.nstr(target, 12)) from exc
            if not accepted:
                step /= 2
                if step < smallest:
                    raise TraceError("step floor reached", "step floor reached", ctx.nstr(t, 12))
                continue

            if _re_order(moved) != order:
                order = self._resolve_crossings(loop, t, current, target, moved, order, letters, crossings, ctx)
            t, current = target, moved
            steps += 1
            if strands > 1:
                min_seen = min(min_seen, min_separation(current, ctx))
            if record_path:
                times.append(t)
                for k, point in enumerate(current):
                    positions[k].append(point)
            step = min(step * 2, largest)

        final_order = _re_order(current)
        permutation = [0] * strands
        for position, strand in enumerate(final_order):
            permutation[strand] = position
        word = BraidWord(max(strands, 1), tuple(letters))
        path = StrandPath(times, positions, tuple(permutation)) if record_path else None
        return TraceResult(word, tuple(permutation), float(min_seen), steps, precision, crossings, path)

    def _resolve_crossings(self, loop, low, low_roots, high, high_roots, order, letters, crossings, ctx) -> tuple[int, ...]:
        """Bisect each order change inside (low, high] and append its adjacent transpositions."""
        tolerance = self._settings.crossing_tolerance
        gap_floor = self._settings.im_gap_floor
        target_order = _re_order(high_roots)
        while order != target_order:
            lo, lo_roots, hi, hi_roots = low, low_roots, high, high_roots
            while hi - lo > tolerance:
                middle = (lo + hi) / 2
                try:
                    middle_roots = self._roots_at(loop, middle, lo_roots, ctx)
                except (RootFindingError, ArithmeticError) as exc:
                    raise TraceError("roots collide", "roots collide", ctx.nstr(middle, 12)) from exc
                if _re_order(middle_roots) == order:
                    lo, lo_roots = middle, middle_roots
                else:
                    hi, hi_roots = middle, middle_roots
            new_order = _re_order(hi_roots)
            for position, left, right in _adjacent_swaps(order, new_order):
                gap = hi_roots[left].imag - hi_roots[right].imag
                if abs(gap) < gap_floor:
                    raise TraceError("ambiguous crossing", "ambiguous crossing", ctx.nstr(hi, 12))
                # The strand moving right passes in front when it has the smaller imaginary part.
                sign = 1 if gap < 0 else -1
                letters.append((position + 1, sign))
                crossings.append(CrossingEvent(float(hi), (position + 1, position + 2), sign, float(abs(gap))))
                logger.debug("Crossing x{index}^{sign} at t={t}", index=position + 1, sign=sign, t=ctx.nstr(hi, 12))
            order, low, low_roots = new_order, hi, hi_roots
        return order

    def trace_pure_check(self, loop: LoopSpec) -> bool:
        permutation = self.trace(loop).permutation
        return all(position == strand for strand, position in enumerate(permutation))

    def line_clearance(self, loop: LoopSpec, lines: tuple[int, ...] | None = None) -> LineClearance:
        """Smallest distance from any strand to the lines Re(z) = c over every accepted step."""
        if lines is None:
            if loop.name not in SEPARATING_LINES:
                raise ValueError(f"no separating lines recorded for {loop.name!r}")
            lines = SEPARATING_LINES[loop.name]
        path = self.trace(loop, record_path=True).path
        distance = min(abs(point.real - line) for track in path.positions for point in track for line in lines)
        return LineClearance(loop.name or "", tuple(lines), float(distance))

    def verify_h_discriminant(self, grid: int = HOMOTOPY_GRID) -> HomotopyCheck:
        """Discriminant of H(t,s) against 27 e^{6 pi i t}(4 - a(s)^2), plus the boundary identities."""
        ctx = numeric_context(self._settings.precision_bits)
        alpha, beta, gamma = (library.builtin(name) for name in ("alpha3", "beta3", "gamma3"))
        deviation = ctx.mpf(0)
        boundary = ctx.mpf(0)

        def distance(a, b):
            return max(abs(to_approx(a.coefficient(k), ctx) - to_approx(b.coefficient(k), ctx)) for k in range(4))

        for row in range(grid):
            s = Fraction(row, grid - 1)
            slice_ = library.homotopy_slice(s)
            a = evaluate(library.homotopy_parameter(s), ctx.mpf(0), ctx)
            for column in range(grid):
                t = ctx.mpf(column) / (grid - 1)
                value = discriminant(eval_loop(slice_, t, ctx), ctx)
                expected = 27 * ctx.expjpi(6 * t) * (4 - a * a)
                deviation = max(deviation, abs(value - expected))
            boundary = max(
                boundary,
                distance(eval_loop(slice_, Fraction(0), ctx), eval_loop(alpha, s, ctx)),
                distance(eval_loop(slice_, Fraction(1), ctx), eval_loop(beta, s, ctx)),
            )
        bottom, top = library.homotopy_slice(Fraction(0)), library.homotopy_slice(Fraction(1))
        for column in range(grid):
            t = Fraction(column, grid - 1)
            expected = eval_loop(gamma, t, ctx)
            boundary = max(boundary, distance(eval_loop(bottom, t, ctx), expected), distance(eval_loop(top, t, ctx), expected))
        logger.info("H(t,s) check on {grid}x{grid}: deviation {dev}", grid=grid, dev=ctx.nstr(deviation, 5))
        return HomotopyCheck(grid, float(deviation), float(boundary))
