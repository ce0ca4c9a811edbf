from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath.ctx_mp import MPContext

from pkg.polycore.numbers import DEFAULT_CONTEXT, ZERO, ExactComplex, is_exact, to_approx

# Coefficients are ExactComplex or mpmath mpc values; a Poly may mix both.
Coefficient = object


def _is_zero(value: Coefficient) -> bool:
    if isinstance(value, ExactComplex):
        return value.is_zero
    return value == 0


def _coerce(value) -> Coefficient:
    if isinstance(value, (int, Fraction, str)):
        return ExactComplex.of(value)
    return value


@dataclass(frozen=True, slots=True)
class Poly:
    """Dense polynomial, coefficients in ascending degree."""

    coefficients: tuple[Coefficient, ...]

    def __post_init__(self) -> None:
        coefficients = [_coerce(value) for value in self.coefficients]
        while coefficients and _is_zero(coefficients[-1]):
            coefficients.pop()
        object.__setattr__(self, "coefficients", tuple(coefficients))

    @classmethod
    def of(cls, values: Iterable) -> Poly:
        return cls(tuple(values))

    @classmethod
    def from_roots(cls, roots: Sequence, leading=1) -> Poly:
        result = cls.of([leading])
        for root in roots:
            result = result * cls.of([-_coerce(root), 1])
        return result

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def is_exact(self) -> bool:
        return all(is_exact(value) for value in self.coefficients)

    @property
    def leading(self) -> Coefficient:
        if self.is_zero:
            return ZERO
        return self.coefficients[-1]

    def coefficient(self, k: int) -> Coefficient:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return ZERO

    def approx(self, ctx: MPContext = DEFAULT_CONTEXT) -> Poly:
        return Poly(tuple(to_approx(value, ctx) for value in self.coefficients))

    def _aligned(self, other: Poly) -> tuple[tuple, tuple]:
        left, right = self.coefficients, other.coefficients
        if not (self.is_exact and other.is_exact):
            ctx = _context_of(self, other)
            left = tuple(to_approx(value, ctx) for value in left)
            right = tuple(to_approx(value, ctx) for value in right)
        return left, right

    def __add__(self, other: Poly) -> Poly:
        left, right = self._aligned(other)
        size = max(len(left), len(right))
        zero = ZERO if self.is_exact and other.is_exact else 0
        return Poly(
            tuple(
                (left[k] if k < len(left) else zero) + (right[k] if k < len(right) else zero)
                for k in range(size)
            )
        )

    def __neg__(self) -> Poly:
        return Poly(tuple(-value for value in self.coefficients))

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            return self.scale(other)
        if self.is_zero or other.is_zero:
            return Poly(())
        left, right = self._aligned(other)
        exact = self.is_exact and other.is_exact
        product = [ZERO if exact else 0] * (len(left) + len(right) - 1)
        for a, left_value in enumerate(left):
            for b, right_value in enumerate(right):
                product[a + b] = product[a + b] + left_value * right_value
        return Poly(tuple(product))

    __rmul__ = __mul__

    def scale(self, factor) -> Poly:
        factor = _coerce(factor)
        if self.is_exact and is_exact(factor):
            return Poly(tuple(value * factor for value in self.coefficients))
        ctx = _context_of(self) if is_exact(factor) else factor.context
        factor = to_approx(factor, ctx)
        return Poly(tuple(to_approx(value, ctx) * factor for value in self.coefficients))

    def with_constant(self, constant) -> Poly:
        rest = self.coefficients[1:] if self.coefficients else ()
        return Poly((_coerce(constant),) + tuple(rest))

    def __str__(self) -> str:
        return format_poly(self)


def _context_of(*polys: Poly) -> MPContext:
    for poly in polys:
        for value in poly.coefficients:
            if not is_exact(value):
                return value.context
    return DEFAULT_CONTEXT


def derive(p: Poly) -> Poly:
    return Poly(tuple(value * k for k, value in enumerate(p.coefficients) if k > 0))


def primitive(q: Poly) -> Poly:
    """Antiderivative with zero constant term."""
    if q.is_zero:
        return Poly(())
    return Poly((ZERO,) + tuple(value / (k + 1) for k, value in enumerate(q.coefficients)))


def eval_poly(p: Poly, z, ctx: MPContext | None = None):
    """Horner evaluation; exact when both the polynomial and the point are exact."""
    if p.is_exact and is_exact(z):
        z = ExactComplex.of(z)
        result = ZERO
        for value in reversed(p.coefficients):
            result = result * z + value
        return result
    ctx = ctx or getattr(z, "context", None) or _context_of(p)
    z = to_approx(z, ctx)
    result = ctx.mpc(0)
    for value in reversed(p.coefficients):
        result = result * z + to_approx(value, ctx)
    return result


def eval_with_derivative(p: Poly, z, ctx: MPContext):
    """Value and first derivative at a floating point, one Horner pass."""
    value = ctx.mpc(0)
    slope = ctx.mpc(0)
    for coefficient in reversed(p.coefficients):
        slope = slope * z + value
        value = value * z + to_approx(coefficient, ctx)
    return value, slope


def monic(p: Poly) -> Poly:
    if p.is_zero:
        raise ValueError("zero polynomial has no leading coefficient")
    leading = p.leading
    if p.is_exact:
        return Poly(tuple(value / leading for value in p.coefficients))
    ctx = _context_of(p)
    leading = to_approx(leading, ctx)
    return Poly(tuple(to_approx(value, ctx) / leading for value in p.coefficients))


def format_poly(p: Poly) -> str:
    """Canonical text form: ascending coefficients, e.g. ``[-1/3, 0, 6, -16/3, 1]``."""
    parts = []
    for value in p.coefficients:
        if isinstance(value, ExactComplex):
            parts.append(str(value))
        else:
            ctx = value.context
            parts.append(ctx.nstr(value, 17))
    return "[" + ", ".join(parts) + "]"


def parse_poly(text: str) -> Poly:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"polynomial must be a bracketed coefficient list: {text!r}")
    inner = body[1:-1].strip()
    if not inner:
        return Poly(())
    return Poly(tuple(ExactComplex.parse(token) for token in inner.split(",")))
