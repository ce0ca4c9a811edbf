from __future__ import annotations

from loguru import logger
from mpmath.ctx_mp import MPContext

from app.entities.entity import LoopValidationReport
from app.service.restricted_service import RestrictedService
from pkg.config.config import Settings
from pkg.loopdsl import library
from pkg.loopdsl.ast import LoopSpec, Space, branch_arguments, denominators, evaluate
from pkg.loopdsl.loops import LoopValidationError, basepoint, check_structure, closing_gap, eval_loop, same_point, sample_times
from pkg.loopdsl.parser import parse
from pkg.polycore.numbers import numeric_context, to_approx
from pkg.polycore.poly import Poly, primitive


def fiber_polynomial(loop: LoopSpec, t, ctx: MPContext) -> Poly:
    """Polynomial traced by ``loop`` at ``t``; fibre loops (n=0) carry only the constant term."""
    value = eval_loop(loop, t, ctx)
    if loop.n == 0:
        return primitive(library.FIBER_DERIVATIVE).approx(ctx) + value
    return value


class LoopService:
    """Parses loops and checks them against the space they claim to live in."""

    def __init__(self, restricted: RestrictedService, settings: Settings) -> None:
        self._restricted = restricted
        self._settings = settings
        self._reports: dict[tuple, LoopValidationReport] = {}

    def parse(self, text: str, name: str | None = None) -> LoopSpec:
        return check_structure(parse(text, name=name), self._settings.continuity_tolerance)

    def builtin(self, name: str) -> LoopSpec:
        return library.builtin(name)

    def resolve(self, *, text: str | None = None, builtin: str | None = None) -> LoopSpec:
        if (text is None) == (builtin is None):
            raise ValueError("give exactly one of a loop text or a builtin name")
        return self.builtin(builtin) if builtin is not None else self.parse(text)

    def validate(self, loop: LoopSpec, samples: int | None = None) -> LoopValidationReport:
        settings = self._settings
        ctx = numeric_context(settings.precision_bits)
        count = samples or settings.sample_count
        key = (loop.name, loop, count)
        if key in self._reports:
            return self._reports[key]
        margin = settings.membership_margin
        try:
            check_structure(loop, settings.continuity_tolerance)
        except LoopValidationError as exc:
            return LoopValidationReport(loop.name, False, float("nan"), 0, 0.0, 0.0, failures=[str(exc)])

        failures: list[str] = []
        gap = closing_gap(loop, ctx)
        if gap > settings.continuity_tolerance:
            failures.append(f"loop does not close (gap {ctx.nstr(gap, 5)})")

        start = basepoint(loop)
        basepoint_ok = None
        expected = library.BASEPOINTS.get(loop.name) if loop.name else None
        if expected is not None:
            basepoint_ok = same_point(start, expected)
            if not basepoint_ok:
                failures.append(f"basepoint differs from {expected}")

        space = Space.C if loop.n == 0 else loop.space
        degree = library.FIBER_DERIVATIVE.degree + 1 if loop.n == 0 else loop.n
        guards = {
            id(segment): (
                [arg for expr in segment.coefficients for arg in branch_arguments(expr)],
                [den for expr in segment.coefficients for den in denominators(expr)],
            )
            for segment in loop.segments
        }
        times = sample_times(loop, count, ctx)
        min_disc, min_sep, min_sij = ctx.inf, ctx.inf, None
        previous = None
        for t in times:
            segment = next(
                (item for item in loop.segments if ctx.mpf(item.start.numerator) / item.start.denominator <= t <= ctx.mpf(item.end.numerator) / item.end.denominator),
                loop.segments[-1],
            )
            branches, dens = guards[id(segment)]
            for arg in branches:
                if ctx.re(evaluate(arg, t, ctx)) <= 0:
                    failures.append(f"root branch argument leaves Re > 0 near t={ctx.nstr(t, 8)}")
            for den in dens:
                if abs(evaluate(den, t, ctx)) < margin:
                    failures.append(f"denominator vanishes near t={ctx.nstr(t, 8)}")
            poly = fiber_polynomial(loop, t, ctx)
            if poly.degree != degree or abs(to_approx(poly.leading, ctx)) < margin:
                failures.append(f"degree drops near t={ctx.nstr(t, 8)}")
                break
            size, separation, sij, previous = self._restricted.space_margins(poly, space, ctx, start=previous)
            min_disc, min_sep = min(min_disc, size), min(min_sep, separation)
            if sij is not None:
                min_sij = sij if min_sij is None else min(min_sij, sij)
            if size < margin or separation < margin or (sij is not None and sij < margin):
                failures.append(f"leaves {space.value} near t={ctx.nstr(t, 8)}")
            if len(failures) > 16:
                break

        report = LoopValidationReport(
            name=loop.name,
            valid=not failures,
            closing_gap=float(gap),
            samples=len(times),
            min_discriminant=float(min_disc),
            min_separation=float(min_sep),
            min_sij=None if min_sij is None else float(min_sij),
            basepoint_ok=basepoint_ok,
            basepoint=str(start),
            failures=failures,
        )
        if failures:
            logger.warning("Loop {name} failed validation: {first}", name=loop.name, first=failures[0])
        else:
            logger.info("Loop {name} valid over {count} samples", name=loop.name, count=len(times))
        self._reports[key] = report
        return report

