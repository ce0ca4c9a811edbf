from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from pkg.loopdsl import ast
from pkg.loopdsl.ast import LoopSpec, Segment, Space, substitute_t
from pkg.loopdsl.parser import parse
from pkg.polycore.poly import Poly

FIBER_EPSILON = Fraction(1, 1024)

RC3_BASE = Poly.of([0, -3, 0, 1])
QC3_BASE = Poly.of([0, 12, -16, 4])
RC4_BASE = Poly.of([Fraction(-1, 3), 0, 6, Fraction(-16, 3), 1])


def _q(value: Fraction) -> str:
    value = Fraction(value)
    return f"({value.numerator}/{value.denominator})" if value.denominator != 1 else f"({value.numerator})"


def _cubic_from_roots(first: str, second: str, third: str) -> str:
    return f"4*(X - ({first}))*(X - ({second}))*(X - ({third}))"


def _piecewise(header: str, pieces: list[tuple[str, str, str]]) -> str:
    body = ";\n".join(f"  [{start}, {end}]: {expr}" for start, end, expr in pieces)
    return f"{header} {{\n{body}\n}}\n"


def _rc3(sign: str) -> str:
    pieces = [
        ("0", "1/3", f"X^3 - 3*X {sign} 27/5*t"),
        ("1/3", "2/3", f"X^3 - 3*X {sign} (2 + 1/5*E(-6t + 3))"),
        ("2/3", "1", f"X^3 - 3*X {sign} 27/5*(1 - t)"),
    ]
    return _piecewise("loop n=3 space=RC", pieces)


def _qc3_alpha(h: Fraction) -> str:
    centre, radius = (h + 1) / 2, (5 - 3 * h) / 6
    pieces = []
    for start, end, a in (
        ("0", "1/3", "4 - 8*t"),
        ("1/3", "2/3", f"{_q(centre)} + {_q(radius)}*E(6t)"),
        ("2/3", "1", "8*t - 4"),
    ):
        pieces.append((start, end, _cubic_from_roots(f"(4 - ({a}))/3", "1", f"(({a}) + 5)/3")))
    return _piecewise("loop n=3 space=QC", pieces)


def _rc4(constant_pieces: list[tuple[str, str, str]]) -> str:
    pieces = [(start, end, f"X^4 - 16/3*X^3 + 6*X^2 + ({d})") for start, end, d in constant_pieces]
    return _piecewise("loop n=4 space=RC", pieces)


_EPS = _q(FIBER_EPSILON)

_FIBER_PIECES = {
    "d1": [
        ("0", "1/3", f"(1 - 3*{_EPS})*t - 1/3"),
        ("1/3", "2/3", f"-{_EPS}*E(6t)"),
        ("2/3", "1", f"(3*{_EPS} - 1)*t + (2/3 - 3*{_EPS})"),
    ],
    "d2": [
        ("0", "1/3", f"(3*{_EPS} - 4)*t - 1/3"),
        ("1/3", "2/3", f"-5/3 + {_EPS}*E(6t)"),
        ("2/3", "1", f"(4 - 3*{_EPS})*t + (3*{_EPS} - 13/3)"),
    ],
    "d3": [
        ("0", "1/12", f"(4 - 12*{_EPS})*t - 1/3"),
        ("1/12", "1/4", f"{_EPS}*i*E(6t)"),
        ("1/4", "1/3", f"(108 - 24*{_EPS})*t + (7*{_EPS} - 27)"),
        ("1/3", "2/3", f"9 - {_EPS}*E(6t)"),
        ("2/3", "3/4", f"(24*{_EPS} - 108)*t + (81 - 17*{_EPS})"),
        ("3/4", "11/12", f"{_EPS}*i*E(-6t)"),
        ("11/12", "1", f"(12*{_EPS} - 4)*t + (11/3 - 12*{_EPS})"),
    ],
}

SOURCES: dict[str, str] = {
    "gamma3": "loop n=3 space=RC { [0,1]: X^3 - 3*E(2t)*X }\n",
    "alpha3": _rc3("+"),
    "beta3": _rc3("-"),
    "qc3_alpha_1": _qc3_alpha(Fraction(1)),
    "qc3_alpha_0": _qc3_alpha(Fraction(0)),
    "qc3_alpha_mhalf": _qc3_alpha(Fraction(-1, 2)),
    "qc3_alpha_m1": _qc3_alpha(Fraction(-1)),
    "qc3_alpha_m2": _qc3_alpha(Fraction(-2)),
    "qc3_beta": _piecewise(
        "loop n=3 space=QC",
        [("0", "1", _cubic_from_roots("(4 - 4*E(2t))/3", "(4 - E(2t))/3", "(5*E(2t) + 4)/3"))],
    ),
    "qc3_gamma1": "loop n=3 space=QC { [0,1]: 4*(X - 3)*(X^2 - X + 1/4 - 1/4*E(2t)) }\n",
    "qc3_gamma2": "loop n=3 space=QC { [0,1]: 4*X*(X^2 - 4*X + 4 - E(2t)) }\n",
    "rc4_delta1": _rc4(_FIBER_PIECES["d1"]),
    "rc4_delta2": _rc4(_FIBER_PIECES["d2"]),
    "rc4_delta3": _rc4(_FIBER_PIECES["d3"]),
    "rc4_Gamma1": "loop n=4 space=RC { [0,1]: X^4 - 16/3*X^3 + (13/2 - 1/2*E(2t))*X^2 + (3*E(2t) - 3)*X - 1/3 }\n",
    "rc4_Gamma2": "loop n=4 space=RC { [0,1]: X^4 - 16/3*X^3 + (8 - 2*E(2t))*X^2 - 1/3 }\n",
    "fiber_d1": _piecewise("loop n=0", _FIBER_PIECES["d1"]),
    "fiber_d2": _piecewise("loop n=0", _FIBER_PIECES["d2"]),
    "fiber_d3": _piecewise("loop n=0", _FIBER_PIECES["d3"]),
    "lift_g2a1g2inv": _piecewise(
        "loop n=3 space=QC",
        [
            ("0", "1/3", _cubic_from_roots("0", "2 - E(3t)", "2 + E(3t)")),
            ("1/3", "4/9", _cubic_from_roots("8*t - 8/3", "17/3 - 8*t", "1")),
            ("4/9", "5/9", _cubic_from_roots("1 - 1/9*E(18t)", "2 + 1/9*E(18t)", "1")),
            ("5/9", "2/3", _cubic_from_roots("16/3 - 8*t", "8*t - 7/3", "1")),
            ("2/3", "1", _cubic_from_roots("0", "2 + E(-3t)", "2 - E(-3t)")),
        ],
    ),
    "lift_commutator": _piecewise(
        "loop n=3 space=QC",
        [
            ("0", "1/6", _cubic_from_roots("1/2 - 1/2*E(6t)", "1/2 + 1/2*E(6t)", "3")),
            ("1/6", "1/3", _cubic_from_roots("2 + E(6t)", "0", "2 - E(6t)")),
            ("1/3", "1/2", _cubic_from_roots("3", "1/2 - 1/2*E(6t)", "1/2 + 1/2*E(6t)")),
            ("1/2", "2/3", _cubic_from_roots("2 - E(-6t)", "2 + E(-6t)", "0")),
            ("2/3", "5/6", _cubic_from_roots("1/2 + 1/2*E(-6t)", "3", "1/2 - 1/2*E(-6t)")),
            ("5/6", "1", _cubic_from_roots("0", "2 - E(-6t)", "2 + E(-6t)")),
        ],
    ),
}

# Expected base point of each builtin; fiber loops are constant terms over RC4_BASE's derivative.
BASEPOINTS: dict[str, Poly] = {
    **{name: RC3_BASE for name in ("gamma3", "alpha3", "beta3")},
    **{name: QC3_BASE for name in SOURCES if name.startswith(("qc3_", "lift_"))},
    **{name: RC4_BASE for name in SOURCES if name.startswith("rc4_")},
    **{name: Poly.of([Fraction(-1, 3)]) for name in SOURCES if name.startswith("fiber_")},
}

FIBER_DERIVATIVE = QC3_BASE


def names() -> list[str]:
    return list(SOURCES)


@lru_cache(maxsize=None)
def builtin(name: str) -> LoopSpec:
    source = SOURCES.get(name)
    if source is None:
        raise ValueError(f"unknown builtin loop {name!r}; available: {', '.join(SOURCES)}")
    return parse(source, name=name)


def homotopy_slice(s: Fraction) -> LoopSpec:
    """t -> H(t, s) = X^3 - 3 e^{2 pi i t} mu(t,s) X + a(s) nu(t), the homotopy from alpha3 to beta3 through gamma3."""
    s = Fraction(s)
    a = homotopy_parameter(s)
    t = ast.T
    w = ast.add(ast.sub(ast.ONE_EXPR, t), ast.power(t, 2))
    ratio = ast.div(ast.mul(ast.sub(t, ast.power(t, 2)), ast.power(a, 2)), ast.mul(ast.const(4), w))
    mu = ast.cbrt(ast.add(ast.ONE_EXPR, ratio))
    nu = ast.div(ast.ExpPi(Fraction(3), Fraction(0)), ast.sqrt(w))
    coefficients = (
        ast.mul(a, nu),
        ast.mul(ast.const(-3), ast.mul(ast.ExpPi(Fraction(2), Fraction(0)), mu)),
        ast.ZERO_EXPR,
        ast.ONE_EXPR,
    )
    return LoopSpec(3, (Segment(Fraction(0), Fraction(1), coefficients),), Space.RC, f"H(., {s})")


def homotopy_parameter(s: Fraction) -> ast.CoeffExpr:
    """a(s) as a t-free expression."""
    s = Fraction(s)
    return substitute_t(builtin("alpha3").segment_at(s).coefficients[0], Fraction(0), s)
