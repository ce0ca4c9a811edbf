from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, Union

from mpmath.ctx_mp import MPContext

from pkg.polycore.numbers import I, ONE, ZERO, ExactComplex, to_approx

# Exact values of e^{i pi k/2}.
_QUARTER_TURNS = (ONE, I, -ONE, -I)


@dataclass(frozen=True, slots=True)
class Const:
    value: ExactComplex


@dataclass(frozen=True, slots=True)
class Param:
    """The loop parameter t."""


@dataclass(frozen=True, slots=True)
class ExpPi:
    """e^{i pi (q t + r)}."""

    q: Fraction
    r: Fraction


@dataclass(frozen=True, slots=True)
class Conj:
    arg: CoeffExpr


@dataclass(frozen=True, slots=True)
class Sum:
    left: CoeffExpr
    right: CoeffExpr


@dataclass(frozen=True, slots=True)
class Product:
    left: CoeffExpr
    right: CoeffExpr


@dataclass(frozen=True, slots=True)
class IntPower:
    base: CoeffExpr
    exponent: int


@dataclass(frozen=True, slots=True)
class CubeRootBranch:
    """Principal cube root; only admitted where Re(arg) > 0."""

    arg: CoeffExpr


@dataclass(frozen=True, slots=True)
class SquareRootBranch:
    arg: CoeffExpr


@dataclass(frozen=True, slots=True)
class RatFrac:
    numerator: CoeffExpr
    denominator: CoeffExpr


CoeffExpr = Union[Const, Param, ExpPi, Conj, Sum, Product, IntPower, CubeRootBranch, SquareRootBranch, RatFrac]

T = Param()
ZERO_EXPR = Const(ZERO)
ONE_EXPR = Const(ONE)


def const(value) -> Const:
    return Const(ExactComplex.of(value))


def _is_const(expr: CoeffExpr, value: ExactComplex | None = None) -> bool:
    return isinstance(expr, Const) and (value is None or expr.value == value)


def add(a: CoeffExpr, b: CoeffExpr) -> CoeffExpr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if _is_const(a, ZERO):
        return b
    if _is_const(b, ZERO):
        return a
    return Sum(a, b)


def mul(a: CoeffExpr, b: CoeffExpr) -> CoeffExpr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if _is_const(a, ZERO) or _is_const(b, ZERO):
        return ZERO_EXPR
    if _is_const(a, ONE):
        return b
    if _is_const(b, ONE):
        return a
    if isinstance(b, Const):
        a, b = b, a
    if isinstance(a, Const) and isinstance(b, Product) and isinstance(b.left, Const):
        return mul(Const(a.value * b.left.value), b.right)
    if isinstance(a, ExpPi) and isinstance(b, ExpPi):
        return ExpPi(a.q + b.q, a.r + b.r)
    return Product(a, b)


def neg(a: CoeffExpr) -> CoeffExpr:
    return mul(Const(-ONE), a)


def sub(a: CoeffExpr, b: CoeffExpr) -> CoeffExpr:
    return add(a, neg(b))


def power(a: CoeffExpr, exponent: int) -> CoeffExpr:
    if exponent < 0:
        raise ValueError("negative powers are written as divisions")
    if exponent == 0:
        return ONE_EXPR
    if exponent == 1:
        return a
    if isinstance(a, Const):
        return Const(a.value**exponent)
    if isinstance(a, ExpPi):
        return ExpPi(a.q * exponent, a.r * exponent)
    return IntPower(a, exponent)


def conj(a: CoeffExpr) -> CoeffExpr:
    if isinstance(a, Const):
        return Const(a.value.conjugate())
    if isinstance(a, Param):
        return a
    if isinstance(a, ExpPi):
        return ExpPi(-a.q, -a.r)
    if isinstance(a, Conj):
        return a.arg
    return Conj(a)


def div(a: CoeffExpr, b: CoeffExpr) -> CoeffExpr:
    if isinstance(b, Const):
        if b.value.is_zero:
            raise ZeroDivisionError("division by zero constant")
        return mul(Const(b.value.inverse()), a)
    if isinstance(b, ExpPi):
        return mul(a, ExpPi(-b.q, -b.r))
    return RatFrac(a, b)


def cbrt(a: CoeffExpr) -> CoeffExpr:
    if _is_const(a, ONE):
        return ONE_EXPR
    return CubeRootBranch(a)


def sqrt(a: CoeffExpr) -> CoeffExpr:
    if _is_const(a, ONE):
        return ONE_EXPR
    return SquareRootBranch(a)


def evaluate(expr: CoeffExpr, t, ctx: MPContext):
    """Floating value at parameter ``t`` (an mpf of ``ctx``)."""
    match expr:
        case Const(value):
            return to_approx(value, ctx)
        case Param():
            return ctx.mpc(t)
        case ExpPi(q, r):
            return ctx.expjpi(_mpf(q, ctx) * t + _mpf(r, ctx))
        case Conj(arg):
            return ctx.conj(evaluate(arg, t, ctx))
        case Sum(left, right):
            return evaluate(left, t, ctx) + evaluate(right, t, ctx)
        case Product(left, right):
            return evaluate(left, t, ctx) * evaluate(right, t, ctx)
        case IntPower(base, exponent):
            return evaluate(base, t, ctx) ** exponent
        case CubeRootBranch(arg):
            return ctx.cbrt(evaluate(arg, t, ctx))
        case SquareRootBranch(arg):
            return ctx.sqrt(evaluate(arg, t, ctx))
        case RatFrac(numerator, denominator):
            return evaluate(numerator, t, ctx) / evaluate(denominator, t, ctx)
    raise TypeError(f"not a coefficient expression: {expr!r}")


def evaluate_exact(expr: CoeffExpr, t: Fraction) -> ExactComplex | None:
    """Exact value at a rational ``t`` when every node allows one, else None."""
    match expr:
        case Const(value):
            return value
        case Param():
            return ExactComplex(t)
        case ExpPi(q, r):
            turns = (q * t + r) * 2
            if turns.denominator != 1:
                return None
            return _QUARTER_TURNS[turns.numerator % 4]
        case Conj(arg):
            value = evaluate_exact(arg, t)
            return None if value is None else value.conjugate()
        case Sum(left, right) | Product(left, right):
            a, b = evaluate_exact(left, t), evaluate_exact(right, t)
            if a is None or b is None:
                return None
            return a + b if isinstance(expr, Sum) else a * b
        case IntPower(base, exponent):
            value = evaluate_exact(base, t)
            return None if value is None else value**exponent
        case RatFrac(numerator, denominator):
            a, b = evaluate_exact(numerator, t), evaluate_exact(denominator, t)
            if a is None or b is None or b.is_zero:
                return None
            return a / b
    return None


def substitute_t(expr: CoeffExpr, scale: Fraction, shift: Fraction) -> CoeffExpr:
    """Replace t by scale*t + shift."""
    match expr:
        case Param():
            return add(mul(Const(ExactComplex(scale)), T), Const(ExactComplex(shift)))
        case ExpPi(q, r):
            return ExpPi(q * scale, q * shift + r)
        case Conj(arg):
            return conj(substitute_t(arg, scale, shift))
        case Sum(left, right):
            return add(substitute_t(left, scale, shift), substitute_t(right, scale, shift))
        case Product(left, right):
            return mul(substitute_t(left, scale, shift), substitute_t(right, scale, shift))
        case IntPower(base, exponent):
            return power(substitute_t(base, scale, shift), exponent)
        case CubeRootBranch(arg):
            return cbrt(substitute_t(arg, scale, shift))
        case SquareRootBranch(arg):
            return sqrt(substitute_t(arg, scale, shift))
        case RatFrac(numerator, denominator):
            return div(substitute_t(numerator, scale, shift), substitute_t(denominator, scale, shift))
    return expr


def affine_parts(expr: CoeffExpr) -> tuple[Fraction, Fraction] | None:
    """(q, r) with expr = q*t + r over the rationals, or None."""
    match expr:
        case Const(value):
            return (Fraction(0), value.re) if value.is_real else None
        case Param():
            return Fraction(1), Fraction(0)
        case Sum(left, right):
            a, b = affine_parts(left), affine_parts(right)
            if a is None or b is None:
                return None
            return a[0] + b[0], a[1] + b[1]
        case Product(left, right):
            a, b = affine_parts(left), affine_parts(right)
            if a is None or b is None or (a[0] != 0 and b[0] != 0):
                return None
            return a[0] * b[1] + b[0] * a[1], a[1] * b[1]
    return None


def branch_arguments(expr: CoeffExpr) -> Iterator[CoeffExpr]:
    """Arguments of every root-branch node, which must keep Re > 0."""
    match expr:
        case CubeRootBranch(arg) | SquareRootBranch(arg):
            yield arg
            yield from branch_arguments(arg)
        case Conj(arg):
            yield from branch_arguments(arg)
        case IntPower(base, _):
            yield from branch_arguments(base)
        case Sum(left, right) | Product(left, right):
            yield from branch_arguments(left)
            yield from branch_arguments(right)
        case RatFrac(numerator, denominator):
            yield from branch_arguments(numerator)
            yield from branch_arguments(denominator)


def denominators(expr: CoeffExpr) -> Iterator[CoeffExpr]:
    match expr:
        case RatFrac(numerator, denominator):
            yield denominator
            yield from denominators(numerator)
            yield from denominators(denominator)
        case Conj(arg) | CubeRootBranch(arg) | SquareRootBranch(arg):
            yield from denominators(arg)
        case IntPower(base, _):
            yield from denominators(base)
        case Sum(left, right) | Product(left, right):
            yield from denominators(left)
            yield from denominators(right)


def _mpf(value: Fraction, ctx: MPContext):
    return ctx.mpf(value.numerator) / value.denominator


class Space(str, Enum):
    C = "C"
    RC = "RC"
    QC = "QC"


@dataclass(frozen=True, slots=True)
class Segment:
    start: Fraction
    end: Fraction
    # Coefficient expressions in ascending degree of X.
    coefficients: tuple[CoeffExpr, ...]


@dataclass(frozen=True, slots=True)
class LoopSpec:
    """A closed piecewise loop; the basepoint is not stored but read off the first segment at t=0."""

    n: int
    segments: tuple[Segment, ...]
    space: Space = Space.C
    name: str | None = field(default=None, compare=False)

    def segment_at(self, t: Fraction) -> Segment:
        if not 0 <= t <= 1:
            raise ValueError(f"t={t} outside [0,1]")
        for segment in self.segments:
            if segment.start <= t <= segment.end:
                return segment
        raise ValueError(f"no segment contains t={t}")

    @property
    def boundaries(self) -> tuple[Fraction, ...]:
        return tuple(segment.start for segment in self.segments) + (self.segments[-1].end,)
