from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from mpmath.ctx_mp import MPContext

Rational = Fraction

DEFAULT_PRECISION = 53

_COMPLEX_PATTERN = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*i)?\s*$"
)
_PURE_IMAGINARY_PATTERN = re.compile(r"^\s*(?P<im>[+-]?(?:\d+(?:/\d+)?)?)\s*\*?\s*i\s*$")


def numeric_context(precision: int = DEFAULT_PRECISION) -> MPContext:
    """Private mpmath context; floating values carry their context with them."""
    ctx = MPContext()
    ctx.prec = precision
    return ctx


DEFAULT_CONTEXT = numeric_context()


@dataclass(frozen=True, slots=True)
class ExactComplex:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, value: ExactLike) -> ExactComplex:
        if isinstance(value, ExactComplex):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(Fraction(value))
        if isinstance(value, str):
            return cls.parse(value)
        raise TypeError(f"cannot build an exact complex from {type(value).__name__}")

    @classmethod
    def parse(cls, text: str) -> ExactComplex:
        match = _COMPLEX_PATTERN.match(text)
        if match and (match.group("re") or match.group("sign")):
            re_part = Fraction(match.group("re") or 0)
            im_part = Fraction(0)
            if match.group("sign"):
                im_part = Fraction(match.group("im") or 1)
                if match.group("sign") == "-":
                    im_part = -im_part
            return cls(re_part, im_part)
        match = _PURE_IMAGINARY_PATTERN.match(text)
        if match:
            raw = match.group("im")
            if raw in ("", "+"):
                return cls(Fraction(0), Fraction(1))
            if raw == "-":
                return cls(Fraction(0), Fraction(-1))
            return cls(Fraction(0), Fraction(raw))
        raise ValueError(f"not an exact complex number: {text!r}")

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> ExactComplex:
        return ExactComplex(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def approx(self, ctx: MPContext = DEFAULT_CONTEXT):
        return ctx.mpc(ctx.mpf(self.re.numerator) / self.re.denominator, ctx.mpf(self.im.numerator) / self.im.denominator)

    def __add__(self, other: ExactLike) -> ExactComplex:
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        return ExactComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> ExactComplex:
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, other: ExactLike) -> ExactComplex:
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: ExactLike) -> ExactComplex:
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other: ExactLike) -> ExactComplex:
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        return ExactComplex(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def inverse(self) -> ExactComplex:
        norm = self.norm2()
        if norm == 0:
            raise ZeroDivisionError("inverse of exact zero")
        return ExactComplex(self.re / norm, -self.im / norm)

    def __truediv__(self, other: ExactLike) -> ExactComplex:
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: ExactLike) -> ExactComplex:
        other = _exact_or_none(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> ExactComplex:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __str__(self) -> str:
        if self.im == 0:
            return _format_fraction(self.re)
        if self.re == 0:
            return f"{_format_fraction(self.im)}*i"
        sign = "-" if self.im < 0 else "+"
        return f"{_format_fraction(self.re)}{sign}{_format_fraction(abs(self.im))}*i"


ExactLike = Union[ExactComplex, Fraction, int, str]

ZERO = ExactComplex(Fraction(0))
ONE = ExactComplex(Fraction(1))
I = ExactComplex(Fraction(0), Fraction(1))


def _exact_or_none(value) -> ExactComplex | None:
    if isinstance(value, ExactComplex):
        return value
    if isinstance(value, (int, Fraction)):
        return ExactComplex(Fraction(value))
    return None


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def is_exact(value) -> bool:
    return isinstance(value, (ExactComplex, int, Fraction))


def to_approx(value, ctx: MPContext = DEFAULT_CONTEXT):
    """Convert an exact or floating scalar into an mpc of ``ctx``."""
    if isinstance(value, ExactComplex):
        return value.approx(ctx)
    if isinstance(value, Fraction):
        return ctx.mpc(ctx.mpf(value.numerator) / value.denominator)
    return ctx.mpc(value)


def to_fraction(value, max_denominator: int | None = None) -> Fraction:
    """Exact binary value of a real mpf (or float), optionally rounded to a small denominator."""
    if isinstance(value, Fraction):
        return value
    mantissa, exponent = _man_exp(value)
    result = Fraction(mantissa) * (Fraction(2) ** exponent)
    if max_denominator is not None:
        result = result.limit_denominator(max_denominator)
    return result


def _man_exp(value) -> tuple[int, int]:
    if hasattr(value, "_mpf_"):
        sign, mantissa, exponent, _ = value._mpf_
        return (-int(mantissa) if sign else int(mantissa)), int(exponent)
    numerator, denominator = float(value).as_integer_ratio()
    return numerator, -(denominator.bit_length() - 1)
