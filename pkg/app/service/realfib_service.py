from __future__ import annotations

from fractions import Fraction

from loguru import logger
from mpmath.ctx_mp import MPContext

from app.entities.entity import Bound, RealFiberData
from pkg.config.config import Settings
from pkg.polycore.discriminant import has_real_simple_roots, is_squarefree, real_root_count
from pkg.polycore.numbers import ExactComplex, numeric_context, to_approx
from pkg.polycore.poly import Poly, derive, eval_poly, monic, primitive
from pkg.polycore.roots import RootFindingError, exact_roots, roots

# Smallest degree of Q for which a counterexample exists.
MIN_COUNTEREXAMPLE_DEGREE = 4
# Offset below the inductive bound on the new root.
INDUCTION_OFFSET = 1


class RealFiberService:
    """The derivative map restricted to real polynomials with real simple roots."""

    def __init__(self, settings: Settings) -> None:
        self._settings = settings

    def _ctx(self) -> MPContext:
        return numeric_context(self._settings.precision_bits)

    def _require_real(self, p: Poly, ctx: MPContext) -> None:
        if p.is_exact:
            if any(not ExactComplex.of(value).is_real for value in p.coefficients):
                raise ValueError("coefficients must be real")
        else:
            values = [to_approx(value, ctx) for value in p.coefficients]
            scale = max(abs(value) for value in values)
            if any(abs(value.imag) > 16 * ctx.eps * scale for value in values):
                raise ValueError("coefficients must be real")
        lead = ExactComplex.of(p.leading).re if p.is_exact else to_approx(p.leading, ctx).real
        if lead <= 0:
            raise ValueError("leading coefficient must be positive")

    def real_roots(self, p: Poly, ctx: MPContext | None = None) -> list:
        """Ascending real roots, exact rationals when every root is one."""
        ctx = ctx or self._ctx()
        if p.degree < 1:
            raise ValueError("constant polynomial")
        self._require_real(p, ctx)
        if p.is_exact:
            if real_root_count(p) != p.degree:
                raise ValueError("roots must be real" if is_squarefree(p) else "roots must be distinct")
            exact = exact_roots(p, ctx)
            if exact is not None:
                return sorted(value.re for value in exact)
        floor = self._settings.separation_floor
        found = roots(p, ctx, max_iterations=self._settings.root_max_iterations)
        if any(abs(value.imag) > floor * (1 + abs(value)) for value in found):
            raise ValueError("roots must be real")
        ordered = sorted(value.real for value in found)
        if any(b - a < floor for a, b in zip(ordered, ordered[1:])):
            raise ValueError("roots must be distinct")
        return ordered

    def has_real_simple_roots(self, p: Poly) -> bool:
        """Sturm count for exact input; a floating root solve otherwise."""
        if p.is_exact:
            return has_real_simple_roots(p)
        try:
            self.real_roots(p)
        except (ValueError, RootFindingError):
            return False
        return True

    def _mixed(self, ctx: MPContext, *values) -> list:
        """Leave all-rational values alone, otherwise lift everything to mpf."""
        if all(isinstance(value, (int, Fraction)) for value in values):
            return list(values)
        return [ctx.mpf(value.numerator) / value.denominator if isinstance(value, Fraction) else ctx.mpf(value) for value in values]

    def _value(self, p: Poly, x, ctx: MPContext):
        if p.is_exact and isinstance(x, Fraction):
            return eval_poly(p, ExactComplex(x)).re
        return eval_poly(p, x, ctx).real

    def minmax(self, q: Poly) -> RealFiberData:
        """m = max P(b_k) for k = n-1, n-3, ...; M = min P(b_k) for k = n-2, n-4, ...; b_k ascending."""
        ctx = self._ctx()
        points = self.real_roots(q, ctx)
        p = primitive(q)
        values = [self._value(p, point, ctx) for point in points]
        top = len(points)
        m = max(values[k - 1] for k in range(top, 0, -2))
        if top == 1:
            return RealFiberData(m, Bound.INFINITY, values, points)
        M = min(values[k - 1] for k in range(top - 1, 0, -2))
        return RealFiberData(m, M, values, points)

    def in_qc_real(self, q: Poly) -> bool:
        data = self.minmax(q)
        return data.M is Bound.INFINITY or data.m < data.M

    def ev0(self, p: Poly):
        """Fibre coordinate in (0,1) of a real polynomial with real simple roots."""
        if p.degree < 2:
            raise ValueError("ev0 needs degree >= 2")
        ctx = self._ctx()
        p = monic(p)
        self.real_roots(p, ctx)
        data = self.minmax(derive(p))
        constant = p.coefficient(0)
        constant = ExactComplex.of(constant).re if p.is_exact else to_approx(constant, ctx).real
        if data.M is Bound.INFINITY:
            constant, m = self._mixed(ctx, constant, data.m)
            value = (constant + m) / (constant + m - 1)
        else:
            constant, m, M = self._mixed(ctx, constant, data.m, data.M)
            value = (constant + M) / (M - m)
        if not 0 < value < 1:
            raise ValueError(f"ev0 left (0,1): {value}")
        return value

    def fiber_inverse(self, q: Poly, c) -> Poly:
        """The polynomial over q with fibre coordinate c."""
        if not 0 < c < 1:
            raise ValueError("fibre coordinate must lie in (0,1)")
        data = self.minmax(q)
        if data.M is not Bound.INFINITY and not data.m < data.M:
            raise ValueError("q is not the derivative of a polynomial with real simple roots")
        ctx = self._ctx()
        if data.M is Bound.INFINITY:
            c, m = self._mixed(ctx, c, data.m)
            constant = c / (c - 1) - m
        else:
            c, m, M = self._mixed(ctx, c, data.m, data.M)
            constant = (M - m) * c - M
        p = primitive(q)
        if isinstance(constant, Fraction) and p.is_exact:
            return p.with_constant(ExactComplex(constant))
        return p.approx(ctx).with_constant(ctx.mpc(constant))

    def counterexample(self, degree: int) -> Poly:
        """A real Q with real simple roots that is not the derivative of any such polynomial."""
        if degree < MIN_COUNTEREXAMPLE_DEGREE:
            raise ValueError("none exists for cubic Q or lower")
        ctx = self._ctx()
        q = Poly.from_roots([0, 1, 3, ctx.mpc(ctx.pi)], leading=5)
        while q.degree < degree:
            n = q.degree + 1
            p = primitive(q)
            at_pi = eval_poly(p, ctx.pi, ctx).real
            area = eval_poly(primitive(p), ctx.pi, ctx).real
            smallest = min(self.real_roots(q, ctx))
            bound = min(smallest, ctx.pi - area / at_pi) - INDUCTION_OFFSET
            q = (Poly.of([ctx.mpc(-bound), 1]) * q).scale(ctx.mpc(n + 1) / n)
            logger.debug("Counterexample step to degree {degree} with new root {root}", degree=q.degree, root=ctx.nstr(bound, 10))
        data = self.minmax(q)
        if data.m < data.M:
            raise RuntimeError(f"construction failed at degree {degree}: m < M")
        logger.info("Counterexample of degree {degree}: m - M = {gap}", degree=degree, gap=ctx.nstr(data.m - data.M, 8))
        return q
