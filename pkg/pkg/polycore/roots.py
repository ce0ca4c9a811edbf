from __future__ import annotations

from typing import Sequence

from loguru import logger
from mpmath.ctx_mp import MPContext

from pkg.polycore.numbers import DEFAULT_CONTEXT, ExactComplex, to_approx, to_fraction
from pkg.polycore.poly import Poly, _context_of, eval_poly, eval_with_derivative, monic

MAX_ITERATIONS = 200
# Offset of the starting circle, in turns; irrational so no start sits on a symmetry axis.
START_ROTATION = "0.3819660112501051517954131656343618822796908201942371378645513772947395371"
RATIONAL_RECOVERY_DENOMINATOR = 10**6


class RootFindingError(RuntimeError):
    def __init__(self, message: str, best_iterate: list) -> None:
        super().__init__(message)
        self.best_iterate = best_iterate


def initial_points(p: Poly, ctx: MPContext) -> list:
    """Circle of radius 1 + max|a_k / a_n| with a fixed irrational angular offset."""
    n = p.degree
    leading = to_approx(p.leading, ctx)
    ratios = [abs(to_approx(value, ctx) / leading) for value in p.coefficients[:-1]]
    radius = 1 + max(ratios, default=ctx.mpf(0))
    rotation = ctx.mpf(START_ROTATION)
    return [radius * ctx.expjpi(2 * (ctx.mpf(k) / n + rotation / n)) for k in range(n)]


def _residual_bound(p: Poly, z, ctx: MPContext):
    # Backward error bound of Horner's rule: n * eps * sum |a_k| |z|^k.
    modulus = abs(z)
    scale = ctx.mpf(0)
    for value in reversed(p.coefficients):
        scale = scale * modulus + abs(to_approx(value, ctx))
    return 8 * (p.degree + 1) * ctx.eps * scale


def roots(
    p: Poly,
    ctx: MPContext | None = None,
    start: Sequence | None = None,
    max_iterations: int = MAX_ITERATIONS,
) -> list:
    """All roots by Aberth-Ehrlich iteration; ``start`` warm-starts from previous roots."""
    if p.degree < 1:
        raise ValueError("constant polynomial has no roots")
    ctx = ctx or _context_of(p)
    normalized = monic(p).approx(ctx)
    if p.degree == 1:
        return [-to_approx(normalized.coefficients[0], ctx)]

    points = [to_approx(value, ctx) for value in start] if start is not None else initial_points(normalized, ctx)
    if len(points) != p.degree:
        raise ValueError(f"warm start has {len(points)} points for degree {p.degree}")

    n = len(points)
    floor = ctx.eps * (1 + max(abs(to_approx(value, ctx)) for value in normalized.coefficients[:-1]))
    for iteration in range(max_iterations):
        converged = True
        for k in range(n):
            value, slope = eval_with_derivative(normalized, points[k], ctx)
            if abs(value) <= _residual_bound(normalized, points[k], ctx):
                continue
            if slope == 0:
                slope = ctx.mpc(ctx.eps)
            ratio = value / slope
            repulsion = ctx.mpc(0)
            for j in range(n):
                if j != k:
                    difference = points[k] - points[j]
                    if difference != 0:
                        repulsion += 1 / difference
            denominator = 1 - ratio * repulsion
            if denominator == 0 or not ctx.isfinite(denominator):
                raise RootFindingError(f"Aberth step degenerates at iteration {iteration}", best_iterate=list(points))
            step = ratio / denominator
            if not ctx.isfinite(step):
                raise RootFindingError(f"Aberth step overflows at iteration {iteration}", best_iterate=list(points))
            points[k] = points[k] - step
            if abs(step) > 4 * ctx.eps * (abs(points[k]) + floor):
                converged = False
        if converged:
            logger.debug("Aberth converged in {iterations} iterations (degree {degree})", iterations=iteration, degree=n)
            return points
    raise RootFindingError(f"no convergence after {max_iterations} iterations", best_iterate=points)


def min_separation(points: Sequence, ctx: MPContext = DEFAULT_CONTEXT):
    if len(points) < 2:
        raise ValueError("separation needs at least two points")
    values = [to_approx(point, ctx) for point in points]
    return min(abs(values[a] - values[b]) for a in range(len(values)) for b in range(a + 1, len(values)))


def sort_key(z) -> tuple:
    return (z.real, z.imag)


def match_roots(source: Sequence, target: Sequence) -> list[int]:
    """Nearest-neighbour matching; entry k is the index in ``target`` matched to source[k]."""
    pairs = sorted(
        (abs(source[a] - target[b]), a, b) for a in range(len(source)) for b in range(len(target))
    )
    matching: dict[int, int] = {}
    used: set[int] = set()
    for _, a, b in pairs:
        if a in matching or b in used:
            continue
        matching[a] = b
        used.add(b)
    return [matching[a] for a in range(len(source))]


def exact_roots(p: Poly, ctx: MPContext | None = None) -> list[ExactComplex] | None:
    """Gaussian-rational roots when every root is one, verified by exact evaluation."""
    if not p.is_exact or p.degree < 1:
        return None
    candidates = []
    for root in roots(p, ctx):
        candidate = ExactComplex(
            to_fraction(root.real, RATIONAL_RECOVERY_DENOMINATOR),
            to_fraction(root.imag, RATIONAL_RECOVERY_DENOMINATOR),
        )
        if not eval_poly(p, candidate).is_zero:
            return None
        candidates.append(candidate)
    if len(set(candidates)) != len(candidates):
        return None
    return candidates
