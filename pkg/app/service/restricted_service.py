from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

import sympy
from loguru import logger
from mpmath.ctx_mp import MPContext
from sympy import QQ_I

from app.entities.entity import ATable, MembershipVerdict, NeighborhoodRadii, QfVerdict, ResolventResult, SijPoly, Trivialization
from pkg.config.config import Settings
from pkg.loopdsl.ast import Space
from pkg.polycore.discriminant import X, discriminant, from_sympy_poly, to_sympy_poly
from pkg.polycore.numbers import ZERO, ExactComplex, is_exact, numeric_context, to_approx
from pkg.polycore.poly import Poly, derive, eval_poly, monic, primitive
from pkg.polycore.roots import RootFindingError, exact_roots, match_roots, min_separation, roots, sort_key

BI, BJ = sympy.symbols("b_i b_j")
Y = sympy.Symbol("y")
# Shrink factor applied to every neighbourhood radius so the strict inequalities keep some room.
SAFETY = Fraction(99, 100)
BISECTION_STEPS = 80
# Ratios X/Y of the QF_3 chart lying on an excluded hyperplane.
QF3_EXCLUDED_RATIOS = (Fraction(1), Fraction(0), Fraction(-1, 2), Fraction(-1), Fraction(-2))


class NeighborhoodError(ValueError):
    def __init__(self, message: str, bound: str, value) -> None:
        super().__init__(message)
        self.bound = bound
        self.value = value


@lru_cache(maxsize=None)
def a_entries(n: int) -> tuple:
    """A_0 ... A_{n-3} of level n as sympy expressions in b_i, b_j."""
    if n < 3:
        raise ValueError(f"A-table needs n >= 3, got {n}")
    if n == 3:
        return (sympy.Integer(1),)
    factor = sympy.Rational(-n, n - 3)
    top = sum((a + 1) * (n - 2 - a) * BI ** (n - 3 - a) * BJ**a for a in range(n - 2))
    return tuple(sympy.expand(factor * entry) for entry in a_entries(n - 1)) + (sympy.expand(top),)


@lru_cache(maxsize=None)
def sij_expression(m: int, i: int, j: int) -> sympy.Poly:
    if m < 3:
        raise ValueError(f"S_ij needs at least 3 base points, got {m}")
    if i == j or not (1 <= i <= m and 1 <= j <= m):
        raise ValueError(f"bad pair ({i}, {j}) for m={m}")
    n = m + 1
    z = sympy.symbols(f"z1:{m + 1}")
    entries = a_entries(n)
    others = [z[k] for k in range(m) if k not in (i - 1, j - 1)]
    total = sympy.Integer(0)
    for k in range(n - 2):
        sigma = sum((sympy.Mul(*chosen) for chosen in combinations(others, k)), sympy.Integer(0))
        entry = entries[n - 3 - k].subs({BI: z[i - 1], BJ: z[j - 1]}, simultaneous=True)
        total += entry * sigma
    return sympy.Poly(sympy.expand(total), *z, domain=sympy.QQ)


@lru_cache(maxsize=None)
def _sij_terms(m: int, i: int, j: int) -> tuple:
    terms = []
    for monomial, coefficient in sij_expression(m, i, j).terms():
        rational = sympy.Rational(coefficient)
        terms.append((monomial, Fraction(int(rational.p), int(rational.q))))
    return tuple(terms)


def evaluate_sij(m: int, i: int, j: int, points: Sequence, ctx: MPContext | None = None):
    """S_ij at the points; exact when every point is exact."""
    exact = ctx is None and all(is_exact(point) for point in points)
    total = ZERO if exact else ctx.mpc(0)
    values = [ExactComplex.of(point) for point in points] if exact else [to_approx(point, ctx) for point in points]
    for monomial, coefficient in _sij_terms(m, i, j):
        term = coefficient if exact else to_approx(coefficient, ctx)
        for value, exponent in zip(values, monomial):
            if exponent:
                term = term * value**exponent
        total = total + term
    return total


def format_sij(poly: sympy.Poly) -> str:
    """Graded lexicographic terms with exact rational coefficients, e.g. ``2*z1 + 2*z2 - 4*z3``."""
    pieces = []
    for monomial, coefficient in poly.terms(order="grlex"):
        factors = [
            str(symbol) if exponent == 1 else f"{symbol}^{exponent}"
            for symbol, exponent in zip(poly.gens, monomial)
            if exponent
        ]
        rational = sympy.Rational(coefficient)
        magnitude = abs(rational)
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(magnitude)] + factors)
        sign = "-" if rational < 0 else "+"
        pieces.append((sign, body))
    if not pieces:
        return "0"
    head_sign, head = pieces[0]
    text = ("-" if head_sign == "-" else "") + head
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def master_identity_sides(points: Sequence, i: int, j: int) -> tuple[ExactComplex, ExactComplex]:
    """P(b_i) - P(b_j) and its expansion through S_ij, with P the monic primitive vanishing at 0."""
    values = [ExactComplex.of(point) for point in points]
    m, n = len(values), len(values) + 1
    p = primitive(Poly.from_roots(values, leading=n))
    lhs = eval_poly(p, values[i - 1]) - eval_poly(p, values[j - 1])
    difference = values[i - 1] - values[j - 1]
    rhs = -(difference**3) / ((n - 1) * (n - 2)) * evaluate_sij(m, i, j, values)
    return lhs, rhs


def _exact_abs(value: ExactComplex) -> Fraction | None:
    if value.is_real:
        return abs(value.re)
    norm = value.norm2()
    top, bottom = math.isqrt(norm.numerator), math.isqrt(norm.denominator)
    if top * top == norm.numerator and bottom * bottom == norm.denominator:
        return Fraction(top, bottom)
    return None


class RestrictedService:
    """Membership tests for QF, QC, RC and the fibration helpers around the derivative map."""

    def __init__(self, settings: Settings) -> None:
        self._settings = settings

    def _ctx(self) -> MPContext:
        return numeric_context(self._settings.precision_bits)

    def _roots(self, p: Poly, ctx: MPContext) -> list:
        return sorted(roots(p, ctx, max_iterations=self._settings.root_max_iterations), key=sort_key)

    def a_table(self, n: int) -> ATable:
        return ATable(n=n, entries=list(a_entries(n)))

    def sij_poly(self, m: int, i: int, j: int) -> SijPoly:
        return SijPoly(m=m, i=i, j=j, expression=sij_expression(m, i, j))

    def in_qf(self, points: Sequence) -> QfVerdict:
        exact = all(is_exact(point) for point in points)
        ctx = None if exact else self._ctx()
        values = [ExactComplex.of(point) for point in points] if exact else [to_approx(point, ctx) for point in points]
        margin = self._settings.membership_margin

        def vanishes(value) -> bool:
            return value.is_zero if exact else abs(value) < margin

        m = len(values)
        for i, j in combinations(range(1, m + 1), 2):
            if vanishes(values[i - 1] - values[j - 1]):
                return QfVerdict(False, f"H_{i}{j}")
        if m >= 3:
            for i, j in combinations(range(1, m + 1), 2):
                if vanishes(evaluate_sij(m, i, j, values, ctx)):
                    return QfVerdict(False, f"S_{i}{j}")
        return QfVerdict(True)

    def in_qf_direct(self, points: Sequence) -> bool:
        """QF through the critical values P(b_i) themselves, for cross-checking the S_ij route."""
        values = [ExactComplex.of(point) for point in points]
        if len(set(values)) != len(values):
            return False
        p = primitive(Poly.from_roots(values, leading=len(values) + 1))
        critical = [eval_poly(p, value) for value in values]
        return len(set(critical)) == len(critical)

    def critical_value_polynomial(self, q: Poly) -> Poly:
        """Monic polynomial in y whose roots are P(b_k): Res_X(q(X), P(X) - y)."""
        if not q.is_exact:
            raise ValueError("critical-value polynomial needs exact coefficients")
        if q.degree < 1:
            raise ValueError("constant polynomial")
        p = primitive(q)
        eliminated = sympy.resultant(to_sympy_poly(q).as_expr(), to_sympy_poly(p).as_expr() - Y, X)
        return monic(from_sympy_poly(sympy.Poly(sympy.expand(eliminated), Y, domain=QQ_I)))

    def _nearest_pair(self, values: list, ctx: MPContext) -> tuple[int, int]:
        pairs = combinations(range(len(values)), 2)
        a, b = min(pairs, key=lambda pair: abs(to_approx(values[pair[0]], ctx) - to_approx(values[pair[1]], ctx)))
        return a + 1, b + 1

    def in_qc(self, q: Poly) -> tuple[bool, str | None]:
        """Distinct roots b_k of q with pairwise distinct critical values P(b_k)."""
        if q.degree < 1:
            raise ValueError("constant polynomial")
        if q.degree == 1:
            return True, None
        ctx = self._ctx()
        if q.is_exact:
            if discriminant(q).is_zero:
                i, j = self._nearest_pair(self._roots(q, ctx), ctx)
                return False, f"H_{i}{j}"
            if not discriminant(self.critical_value_polynomial(q)).is_zero:
                return True, None
            values = self.critical_values(q)
            i, j = self._nearest_pair(values, ctx)
            return False, f"P(b_{i}) = P(b_{j})"
        points = self._roots(q, ctx)
        margin = self._settings.membership_margin
        if min_separation(points, ctx) < margin:
            i, j = self._nearest_pair(points, ctx)
            return False, f"H_{i}{j}"
        p = primitive(q)
        values = [eval_poly(p, point, ctx) for point in points]
        if min_separation(values, ctx) < margin:
            i, j = self._nearest_pair(values, ctx)
            return False, f"P(b_{i}) = P(b_{j})"
        return True, None

    def _distinct_roots(self, p: Poly) -> bool:
        if p.degree <= 1:
            return True
        if p.is_exact:
            return not discriminant(p).is_zero
        ctx = self._ctx()
        return min_separation(self._roots(p, ctx), ctx) >= self._settings.membership_margin

    def membership(self, p: Poly) -> MembershipVerdict:
        if p.degree < 1:
            raise ValueError("membership needs a polynomial of degree >= 1")
        p = monic(p)
        in_c = self._distinct_roots(p)
        q = derive(p)
        in_qc, witness = (True, None) if q.degree < 1 else self.in_qc(q)
        if not in_c:
            witness = "discriminant vanishes"
        gap = None
        if p.degree == 3 and p.is_exact:
            # sigma_1^2 - 3 sigma_2 of the roots, read off the monic coefficients.
            gap = p.coefficient(2) * p.coefficient(2) - p.coefficient(1) * 3
        verdict = MembershipVerdict(in_c, in_qc, in_c and in_qc, p.is_exact, witness, gap)
        logger.debug("Membership of {poly}: C={c} RC={rc} witness={witness}", poly=p, c=in_c, rc=verdict.in_rc, witness=witness)
        return verdict

    def critical_values(self, q: Poly) -> list:
        """P(b_k) for P = primitive(q), b_k the roots of q sorted by (Re, Im)."""
        if q.degree < 1:
            raise ValueError("constant polynomial")
        p = primitive(q)
        ctx = self._ctx()
        if q.is_exact:
            if discriminant(q).is_zero:
                raise ValueError("q has repeated roots")
            exact = exact_roots(q, ctx)
            if exact is not None:
                return [eval_poly(p, point) for point in sorted(exact, key=lambda z: (z.re, z.im))]
        points = self._roots(q, ctx)
        if len(points) > 1 and min_separation(points, ctx) < self._settings.separation_floor:
            raise ValueError("q has repeated roots")
        return [eval_poly(p, point, ctx) for point in points]

    def section_point(self, q: Poly) -> Poly:
        """primitive(q) - (1 + sum |P(b_k)|), a point of the fibre over q."""
        ok, witness = self.in_qc(q)
        if not ok:
            raise ValueError(f"q is not in QC ({witness})")
        values = self.critical_values(q)
        p = primitive(q)
        if p.is_exact and all(isinstance(value, ExactComplex) for value in values):
            sizes = [_exact_abs(value) for value in values]
            if all(size is not None for size in sizes):
                return p.with_constant(-(1 + sum(sizes, Fraction(0))))
        ctx = self._ctx()
        bound = 1 + sum(abs(to_approx(value, ctx)) for value in values)
        return p.with_constant(ctx.mpc(-bound))

    def plane_shift(self, anchors0: Sequence, anchors: Sequence, eps, z):
        """z + (a_i - a0_i)(1 - |z - a0_i|/eps) inside the eps-disc around a0_i, identity elsewhere."""
        ctx = self._ctx()
        start = [to_approx(value, ctx) for value in anchors0]
        end = [to_approx(value, ctx) for value in anchors]
        eps = ctx.mpf(eps) if not isinstance(eps, Fraction) else ctx.mpf(eps.numerator) / eps.denominator
        point = to_approx(z, ctx)
        if len(start) != len(end):
            raise ValueError("anchor lists differ in length")
        for a0, a in zip(start, end):
            if abs(a - a0) >= eps:
                raise ValueError("an anchor moves by eps or more")
        if len(start) > 1 and min_separation(start, ctx) <= 3 * eps:
            raise ValueError("anchors closer than 3*eps")
        for a0, a in zip(start, end):
            distance = abs(point - a0)
            if distance < eps:
                return point + (a - a0) * (1 - distance / eps)
        return point

    def _root_space_radius(self, centres: list, radius, lead, epsilon, ctx: MPContext):
        """Largest d (by bisection) with R|lead|(prod(R+|b_i|+d) - prod(R+|b_i|)) < eps/2."""
        base = [radius + abs(centre) for centre in centres]

        def growth(d):
            grown, fixed = ctx.mpf(1), ctx.mpf(1)
            for value in base:
                grown *= value + d
                fixed *= value
            return radius * lead * (grown - fixed)

        target = epsilon / 2
        high = ctx.mpf(1)
        while growth(high) < target:
            high *= 2
        low = ctx.mpf(0)
        for _ in range(BISECTION_STEPS):
            middle = (low + high) / 2
            if growth(middle) < target:
                low = middle
            else:
                high = middle
        return low

    def neighborhood(self, q0: Poly, ctx: MPContext | None = None) -> tuple[NeighborhoodRadii, list, list]:
        ctx = ctx or self._ctx()
        centres = self._roots(q0, ctx)
        p0 = primitive(q0)
        values0 = [eval_poly(p0, centre, ctx) for centre in centres]
        safety = ctx.mpf(SAFETY.numerator) / SAFETY.denominator
        delta1 = safety * min_separation(centres, ctx) / 3 if len(centres) > 1 else ctx.mpf(1)
        epsilon = safety * min_separation(values0, ctx) / 3 if len(values0) > 1 else ctx.mpf(1)
        radius = 2 + max(abs(centre) for centre in centres)
        lipschitz = sum(abs(to_approx(value, ctx)) * radius**k for k, value in enumerate(q0.coefficients))
        delta2 = epsilon / (2 * lipschitz)
        lead = abs(to_approx(q0.leading, ctx))
        delta3 = self._root_space_radius(centres, radius, lead, epsilon, ctx)
        radii = NeighborhoodRadii(delta1, delta2, delta3, min(delta1, delta2, delta3), epsilon, radius)
        return radii, centres, values0

    def trivialize(self, q0: Poly, q: Poly, c) -> Trivialization:
        """Psi(q, c) = primitive(q) - Phi(c), Phi the plane shift carrying the critical values of q0 to those of q."""
        if q0.degree < 1 or q.degree != q0.degree:
            raise ValueError("q and q0 must share a degree >= 1")
        ctx = self._ctx()
        if abs(to_approx(q.leading, ctx) - to_approx(q0.leading, ctx)) > ctx.eps * 16 * abs(to_approx(q0.leading, ctx)):
            raise NeighborhoodError("leading coefficients differ", "leading", q.leading)
        radii, centres, values0 = self.neighborhood(q0, ctx)
        moved = roots(q, ctx, max_iterations=self._settings.root_max_iterations)
        matching = match_roots(centres, moved)
        bound_name = min(("delta1", radii.delta1), ("delta2", radii.delta2), ("delta3", radii.delta3), key=lambda item: item[1])[0]
        for k, centre in enumerate(centres):
            shift = abs(moved[matching[k]] - centre)
            if shift >= radii.delta:
                logger.warning("Root {k} moved by {shift}, beyond {bound}", k=k, shift=ctx.nstr(shift, 5), bound=bound_name)
                raise NeighborhoodError(f"q lies outside the {bound_name} neighbourhood of q0", bound_name, radii.delta)
        p = primitive(q)
        values = [eval_poly(p, moved[matching[k]], ctx) for k in range(len(centres))]
        shifted = self.plane_shift(values0, values, radii.epsilon, c)
        polynomial = Poly((-shifted,) + tuple(p.coefficients[1:]))
        return Trivialization(polynomial=polynomial, radii=radii, shifted_constant=shifted)

    def qf3_chart(self, z1, z2, z3) -> tuple[ExactComplex, ExactComplex, ExactComplex]:
        z1, z2, z3 = (ExactComplex.of(value) for value in (z1, z2, z3))
        x, y, s = z2 + z3 - z1 * 2, z1 + z3 - z2 * 2, z1 + z2 + z3
        if y.is_zero:
            raise ValueError("not in QF_3: Y = 0")
        ratio = x / y
        if ratio.is_real and ratio.re in QF3_EXCLUDED_RATIOS:
            raise ValueError(f"not in QF_3: ratio {ratio} is excluded")
        return ratio, y, s

    def qf3_chart_inverse(self, ratio, y, s) -> tuple[ExactComplex, ExactComplex, ExactComplex]:
        ratio, y, s = (ExactComplex.of(value) for value in (ratio, y, s))
        x = ratio * y
        z1 = (s - x) / 3
        z2 = (s - y) / 3
        return z1, z2, s - z1 - z2

    def lagrange_resolvent(self, z1, z2, z3, z4) -> ResolventResult:
        z1, z2, z3, z4 = (ExactComplex.of(value) for value in (z1, z2, z3, z4))
        values = ((z1 + z2) * (z3 + z4), (z1 + z3) * (z2 + z4), (z1 + z4) * (z2 + z3))
        quartic = Poly.from_roots([z1, z2, z3, z4])
        resolvent = Poly.from_roots(list(values))
        return ResolventResult(values, discriminant(quartic), discriminant(resolvent))

    def trivialize_quadratic(self, z1, z2) -> tuple[ExactComplex, ExactComplex]:
        """F_2 -> C x (C minus 0)."""
        z1, z2 = ExactComplex.of(z1), ExactComplex.of(z2)
        if z1 == z2:
            raise ValueError("points coincide")
        return (z1 + z2) / 2, (z1 - z2) / 2

    def untrivialize_quadratic(self, centre, half_gap) -> tuple[ExactComplex, ExactComplex]:
        centre, half_gap = ExactComplex.of(centre), ExactComplex.of(half_gap)
        if half_gap.is_zero:
            raise ValueError("half gap must be nonzero")
        return centre + half_gap, centre - half_gap

    def space_margins(self, p: Poly, space: Space, ctx: MPContext, start: list | None = None) -> tuple:
        """(|disc|, separation, min |S_ij|, points) for the points that define membership in ``space``.

        ``start`` warm-starts the root solve, typically with the points of a nearby sample.
        """
        approx = p.approx(ctx)
        size = abs(discriminant(approx, ctx)) if p.degree >= 1 else ctx.mpf(0)
        if space == Space.RC and p.degree >= 2:
            points = self._warm_roots(derive(approx), ctx, start)
        elif p.degree >= 1:
            points = self._warm_roots(approx, ctx, start)
        else:
            points = []
        separation = min_separation(points, ctx) if len(points) > 1 else ctx.inf
        smallest_sij = None
        if space != Space.C and len(points) >= 3:
            m = len(points)
            smallest_sij = min(abs(evaluate_sij(m, i, j, points, ctx)) for i, j in combinations(range(1, m + 1), 2))
        return size, separation, smallest_sij, points

    def _warm_roots(self, p: Poly, ctx: MPContext, start: list | None) -> list:
        limit = self._settings.root_max_iterations
        if start is not None and len(start) == p.degree:
            try:
                return roots(p, ctx, start=start, max_iterations=limit)
            except RootFindingError:
                logger.debug("Warm start failed at degree {degree}, restarting cold", degree=p.degree)
        return roots(p, ctx, max_iterations=limit)
