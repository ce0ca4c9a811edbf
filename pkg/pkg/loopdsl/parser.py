from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from pkg.loopdsl import ast
from pkg.loopdsl.ast import CoeffExpr, LoopSpec, Segment, Space
from pkg.loopdsl.loops import check_structure
from pkg.polycore.numbers import I
from pkg.polycore.poly import Poly, parse_poly

_TOKEN = re.compile(r"(?P<space>[ \t\r]+)|(?P<newline>\n)|(?P<comment>#[^\n]*)|(?P<number>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()\[\]{},:;=])")

# A polynomial in X whose coefficients are expressions in t, ascending degree.
XPoly = tuple[CoeffExpr, ...]


class LoopSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, position = 1, 0, 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise LoopSyntaxError(f"unexpected character {text[position]!r}", line, position - line_start + 1)
        kind = match.lastgroup
        if kind == "newline":
            line, line_start = line + 1, match.end()
        elif kind in ("number", "name", "op"):
            tokens.append(Token(kind, match.group(), line, match.start() - line_start + 1))
        position = match.end()
    tokens.append(Token("eof", "", line, position - line_start + 1))
    return tokens


def _strip(poly: list[CoeffExpr]) -> XPoly:
    while poly and poly[-1] == ast.ZERO_EXPR:
        poly.pop()
    return tuple(poly)


def poly_add(a: XPoly, b: XPoly) -> XPoly:
    size = max(len(a), len(b))
    return _strip(
        [ast.add(a[k] if k < len(a) else ast.ZERO_EXPR, b[k] if k < len(b) else ast.ZERO_EXPR) for k in range(size)]
    )


def poly_mul(a: XPoly, b: XPoly) -> XPoly:
    if not a or not b:
        return ()
    product = [ast.ZERO_EXPR] * (len(a) + len(b) - 1)
    for i, left in enumerate(a):
        for j, right in enumerate(b):
            product[i + j] = ast.add(product[i + j], ast.mul(left, right))
    return _strip(product)


def poly_map(a: XPoly, op) -> XPoly:
    return _strip([op(value) for value in a])


class Parser:
    """Recursive descent over the loop grammar; expressions are built with the folding constructors of ``ast``."""

    def __init__(self, text: str) -> None:
        self._tokens = tokenize(text)
        self._index = 0

    @property
    def _current(self) -> Token:
        return self._tokens[self._index]

    def _error(self, message: str, token: Token | None = None) -> LoopSyntaxError:
        token = token or self._current
        return LoopSyntaxError(message, token.line, token.column)

    def peek(self, text: str) -> bool:
        return self._current.kind in ("op", "name") and self._current.text == text

    def accept(self, text: str) -> bool:
        if self.peek(text):
            self._index += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        token = self._current
        if not self.accept(text):
            shown = token.text or "end of input"
            raise self._error(f"expected {text!r}, found {shown!r}")
        return token

    def _number(self) -> int:
        token = self._current
        if token.kind != "number":
            raise self._error(f"expected a number, found {token.text or 'end of input'!r}")
        self._index += 1
        return int(token.text)

    def parse_loop(self) -> LoopSpec:
        self.expect("loop")
        self.expect("n")
        self.expect("=")
        n = self._number()
        space = Space.C
        if self.accept("space"):
            self.expect("=")
            token = self._current
            if token.kind != "name" or token.text not in Space.__members__:
                raise self._error(f"unknown space {token.text!r}; expected one of {', '.join(Space.__members__)}")
            space = Space(token.text)
            self._index += 1
        self.expect("{")
        segments: list[Segment] = []
        while True:
            starts_at = self._current
            segment = self._segment()
            if len(segment.coefficients) - 1 != n:
                raise self._error(
                    f"segment [{segment.start}, {segment.end}] has degree {len(segment.coefficients) - 1}, expected {n}",
                    starts_at,
                )
            segments.append(segment)
            if self.accept(";") and not self.peek("}"):
                continue
            break
        self.expect("}")
        if self._current.kind != "eof":
            raise self._error(f"unexpected {self._current.text!r} after loop body")
        return LoopSpec(n, tuple(segments), space)

    def _rational(self) -> Fraction:
        value = Fraction(self._number())
        if self.accept("/"):
            token = self._current
            denominator = self._number()
            if denominator == 0:
                raise self._error("zero denominator", token)
            value /= denominator
        return value

    def _segment(self) -> Segment:
        self.expect("[")
        start = self._rational()
        self.expect(",")
        end = self._rational()
        self.expect("]")
        self.expect(":")
        return Segment(start, end, self.expression())

    def expression(self) -> XPoly:
        value = self._term()
        while True:
            if self.accept("+"):
                value = poly_add(value, self._term())
            elif self.accept("-"):
                value = poly_add(value, poly_map(self._term(), ast.neg))
            else:
                return value

    def _term(self) -> XPoly:
        value = self._unary()
        while True:
            if self.accept("*"):
                value = poly_mul(value, self._unary())
            elif self.peek("/"):
                token = self._current
                self._index += 1
                denominator = self._unary()
                value = self._divide(value, denominator, token)
            elif self._current.kind == "name" or self.peek("("):
                value = poly_mul(value, self._power())
            else:
                return value

    def _divide(self, value: XPoly, denominator: XPoly, token: Token) -> XPoly:
        if len(denominator) > 1:
            raise self._error("division by a polynomial in X", token)
        if not denominator:
            raise self._error("division by zero", token)
        try:
            return poly_map(value, lambda item: ast.div(item, denominator[0]))
        except ZeroDivisionError:
            raise self._error("division by zero", token) from None

    def _unary(self) -> XPoly:
        if self.accept("-"):
            return poly_map(self._unary(), ast.neg)
        if self.accept("+"):
            return self._unary()
        return self._power()

    def _power(self) -> XPoly:
        base = self._atom()
        if not self.accept("^"):
            return base
        if self.peek("-"):
            raise self._error("negative exponent")
        exponent = self._number()
        if len(base) <= 1:
            return _strip([ast.power(base[0] if base else ast.ZERO_EXPR, exponent)])
        result: XPoly = (ast.ONE_EXPR,)
        for _ in range(exponent):
            result = poly_mul(result, base)
        return result

    def _x_free(self, value: XPoly, what: str, token: Token) -> CoeffExpr:
        if len(value) > 1:
            raise self._error(f"{what} must not depend on X", token)
        return value[0] if value else ast.ZERO_EXPR

    def _call(self, name: Token) -> CoeffExpr:
        self.expect("(")
        argument = self._x_free(self.expression(), f"argument of {name.text}", name)
        self.expect(")")
        return argument

    def _atom(self) -> XPoly:
        token = self._current
        if token.kind == "number":
            self._index += 1
            return _strip([ast.const(int(token.text))])
        if self.accept("("):
            value = self.expression()
            self.expect(")")
            return value
        if token.kind != "name":
            raise self._error(f"unexpected {token.text or 'end of input'!r}")
        self._index += 1
        match token.text:
            case "X":
                return (ast.ZERO_EXPR, ast.ONE_EXPR)
            case "t":
                return (ast.T,)
            case "i":
                return (ast.Const(I),)
            case "E":
                argument = self._call(token)
                parts = ast.affine_parts(argument)
                if parts is None:
                    raise self._error("argument of E must be affine in t with rational coefficients", token)
                return (ast.ExpPi(*parts),)
            case "conj":
                self.expect("(")
                value = self.expression()
                self.expect(")")
                return poly_map(value, ast.conj)
            case "sqrt":
                return (ast.sqrt(self._call(token)),)
            case "cbrt":
                return (ast.cbrt(self._call(token)),)
        raise self._error(f"unknown name {token.text!r}", token)


def parse_poly_expr(text: str) -> XPoly:
    parser = Parser(text)
    value = parser.expression()
    if parser._current.kind != "eof":
        raise parser._error(f"unexpected {parser._current.text!r}")
    return value


def parse(text: str, name: str | None = None) -> LoopSpec:
    """Parse loop source and check that its segments partition [0,1] continuously."""
    loop = Parser(text).parse_loop()
    if name is not None:
        loop = LoopSpec(loop.n, loop.segments, loop.space, name)
    return check_structure(loop)


def read_polynomial(text: str) -> Poly:
    """A fixed polynomial, either ``[c0, c1, ...]`` or an expression in X such as ``4*X^3 - 16*X^2 + 12*X``."""
    if text.strip().startswith("["):
        return parse_poly(text)
    coefficients = parse_poly_expr(text)
    values = [ast.evaluate_exact(expr, Fraction(0)) for expr in coefficients]
    probes = [ast.evaluate_exact(expr, Fraction(1, 7)) for expr in coefficients]
    if any(value is None for value in values) or values != probes:
        raise ValueError(f"polynomial must be exact and free of t: {text!r}")
    return Poly(tuple(values))
