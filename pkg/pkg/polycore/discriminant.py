from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import sympy
from mpmath.ctx_mp import MPContext
from sympy import QQ_I

from pkg.polycore.numbers import DEFAULT_CONTEXT, ONE, ZERO, ExactComplex, is_exact, to_approx
from pkg.polycore.poly import Poly, _context_of, derive

X = sympy.Symbol("X")


def to_sympy_number(value: ExactComplex) -> sympy.Expr:
    return sympy.Rational(value.re.numerator, value.re.denominator) + sympy.I * sympy.Rational(
        value.im.numerator, value.im.denominator
    )


def from_sympy_number(value) -> ExactComplex:
    if not isinstance(value, sympy.Basic):
        value = QQ_I.to_sympy(value)
    real, imag = sympy.expand(value).as_real_imag()
    real, imag = sympy.Rational(real), sympy.Rational(imag)
    return ExactComplex(Fraction(int(real.p), int(real.q)), Fraction(int(imag.p), int(imag.q)))


def to_sympy_poly(p: Poly, symbol: sympy.Symbol = X) -> sympy.Poly:
    if not p.is_exact:
        raise ValueError("symbolic conversion needs exact coefficients")
    expr = sum((to_sympy_number(value) * symbol**k for k, value in enumerate(p.coefficients)), sympy.Integer(0))
    return sympy.Poly(expr, symbol, domain=QQ_I)


def from_sympy_poly(poly: sympy.Poly) -> Poly:
    coefficients = [from_sympy_number(value) for value in reversed(poly.all_coeffs())]
    return Poly(tuple(coefficients))


def to_real_sympy_poly(p: Poly, symbol: sympy.Symbol = X) -> sympy.Poly:
    """Exact real polynomial over QQ, where Sturm sequences apply."""
    if not p.is_exact:
        raise ValueError("symbolic conversion needs exact coefficients")
    values = [ExactComplex.of(value) for value in p.coefficients]
    if any(not value.is_real for value in values):
        raise ValueError("coefficients must be real")
    rationals = [sympy.Rational(value.re.numerator, value.re.denominator) for value in reversed(values)]
    return sympy.Poly(rationals, symbol, domain=sympy.QQ)


def real_root_count(p: Poly) -> int:
    """Distinct real roots of an exact real polynomial."""
    return to_real_sympy_poly(p).count_roots()


def is_squarefree(p: Poly) -> bool:
    poly = to_real_sympy_poly(p)
    return poly.sqf_part().degree() == poly.degree()


def has_real_simple_roots(p: Poly) -> bool:
    # A repeated root lowers the distinct count below the degree.
    return p.degree >= 1 and real_root_count(p) == p.degree


def discriminant(p: Poly, ctx: MPContext | None = None):
    """Resultant discriminant; equals prod (r_i - r_j)^2 for monic p, scaled by lc^(2n-2) otherwise."""
    if p.degree < 1:
        raise ValueError("constant polynomial")
    if p.is_exact:
        if p.degree == 1:
            return ONE
        return from_sympy_number(to_sympy_poly(p).discriminant())
    return _approx_discriminant(p, ctx or _context_of(p))


def resultant(p: Poly, q: Poly, ctx: MPContext | None = None):
    if p.is_exact and q.is_exact:
        return from_sympy_number(to_sympy_poly(p).resultant(to_sympy_poly(q)))
    ctx = ctx or _context_of(p, q)
    return ctx.det(sylvester_matrix(p, q, ctx))


def sylvester_matrix(p: Poly, q: Poly, ctx: MPContext):
    m, n = p.degree, q.degree
    size = m + n
    matrix = ctx.matrix(size, size)
    high_p = [to_approx(value, ctx) for value in reversed(p.coefficients)]
    high_q = [to_approx(value, ctx) for value in reversed(q.coefficients)]
    for row in range(n):
        for k, value in enumerate(high_p):
            matrix[row, row + k] = value
    for row in range(m):
        for k, value in enumerate(high_q):
            matrix[n + row, row + k] = value
    return matrix


def _approx_discriminant(p: Poly, ctx: MPContext):
    n = p.degree
    if n == 1:
        return ctx.mpc(1)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    leading = to_approx(p.leading, ctx)
    return sign * ctx.det(sylvester_matrix(p, derive(p), ctx)) / leading


def discriminant_oracle(roots: Sequence, ctx: MPContext = DEFAULT_CONTEXT):
    """Brute-force product of squared pairwise root differences."""
    product = ctx.mpc(1)
    values = [to_approx(root, ctx) for root in roots]
    for a in range(len(values)):
        for b in range(a + 1, len(values)):
            difference = values[a] - values[b]
            product *= difference * difference
    return product


def elem_symmetric(points: Sequence, k: int):
    """sigma_k of the points; exact when every point is exact."""
    if not 0 <= k <= len(points):
        raise ValueError(f"elementary symmetric index {k} outside 0..{len(points)}")
    exact = all(is_exact(point) for point in points)
    if exact:
        values = [ExactComplex.of(point) for point in points]
        sigma = [ONE] + [ZERO] * len(values)
    else:
        ctx = next(point.context for point in points if not is_exact(point))
        values = [to_approx(point, ctx) for point in points]
        sigma = [ctx.mpc(1)] + [ctx.mpc(0)] * len(values)
    for count, value in enumerate(values, start=1):
        for degree in range(count, 0, -1):
            sigma[degree] = sigma[degree] + sigma[degree - 1] * value
    return sigma[k]
