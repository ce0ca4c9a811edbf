from __future__ import annotations

from fractions import Fraction

from pkg.loopdsl.ast import (
    CoeffExpr,
    Conj,
    Const,
    CubeRootBranch,
    ExpPi,
    ONE_EXPR,
    ZERO_EXPR,
    IntPower,
    LoopSpec,
    Param,
    Product,
    RatFrac,
    SquareRootBranch,
    Sum,
)


def _rational(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _affine(q: Fraction, r: Fraction) -> str:
    text = ""
    if q != 0:
        text = "t" if q == 1 else "-t" if q == -1 else f"{_rational(q)}*t"
    if r == 0 and text:
        return text
    if not text:
        return _rational(r)
    return f"{text} - {_rational(-r)}" if r < 0 else f"{text} + {_rational(r)}"


def format_expr(expr: CoeffExpr) -> str:
    match expr:
        case Const(value):
            if value.is_real and value.re.denominator == 1:
                return str(value.re.numerator)
            return f"({value})"
        case Param():
            return "t"
        case ExpPi(q, r):
            return f"E({_affine(q, r)})"
        case Conj(arg):
            return f"conj({format_expr(arg)})"
        case Sum(left, right):
            return f"({format_expr(left)} + {format_expr(right)})"
        case Product(left, right):
            return f"({format_expr(left)} * {format_expr(right)})"
        case IntPower(base, exponent):
            return f"({format_expr(base)}^{exponent})"
        case CubeRootBranch(arg):
            return f"cbrt({format_expr(arg)})"
        case SquareRootBranch(arg):
            return f"sqrt({format_expr(arg)})"
        case RatFrac(numerator, denominator):
            return f"({format_expr(numerator)} / {format_expr(denominator)})"
    raise TypeError(f"not a coefficient expression: {expr!r}")


def format_poly_expr(coefficients: tuple[CoeffExpr, ...]) -> str:
    terms = []
    for degree in range(len(coefficients) - 1, -1, -1):
        coefficient = coefficients[degree]
        if coefficient == ZERO_EXPR:
            continue
        monomial = "" if degree == 0 else "X" if degree == 1 else f"X^{degree}"
        if not monomial:
            terms.append(format_expr(coefficient))
        elif coefficient == ONE_EXPR:
            terms.append(monomial)
        else:
            terms.append(f"{format_expr(coefficient)}*{monomial}")
    return " + ".join(terms) if terms else "0"


def format_loop(loop: LoopSpec) -> str:
    lines = [f"loop n={loop.n} space={loop.space.value} {{"]
    for segment in loop.segments:
        lines.append(f"  [{_rational(segment.start)}, {_rational(segment.end)}]: {format_poly_expr(segment.coefficients)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
