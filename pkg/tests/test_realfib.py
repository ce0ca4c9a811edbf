from __future__ import annotations

from fractions import Fraction

import pytest

from app.entities.entity import Bound
from pkg.loopdsl.library import RC3_BASE
from pkg.polycore.numbers import numeric_context
from pkg.polycore.poly import Poly


def test_real_roots(realfib):
    assert realfib.real_roots(Poly.from_roots([3, -1, Fraction(1, 2)])) == [-1, Fraction(1, 2), 3]
    approx = realfib.real_roots(Poly.of([-2, 0, 1]))
    assert abs(approx[0] + 2**0.5) < 1e-12 and abs(approx[1] - 2**0.5) < 1e-12
    with pytest.raises(ValueError, match="real"):
        realfib.real_roots(Poly.of([1, 0, 1]))
    with pytest.raises(ValueError, match="distinct"):
        realfib.real_roots(Poly.of([1, -2, 1]))
    with pytest.raises(ValueError, match="positive"):
        realfib.real_roots(Poly.of([0, -1]))


def test_minmax_of_quadratic_derivative(realfib):
    data = realfib.minmax(Poly.of([-3, 0, 3]))
    assert (data.m, data.M) == (-2, 2)
    assert data.critical_values == [2, -2]


def test_minmax_of_linear_derivative_is_unbounded(realfib):
    data = realfib.minmax(Poly.of([0, 2]))
    assert data.m == 0
    assert data.M is Bound.INFINITY
    assert realfib.in_qc_real(Poly.of([0, 2]))


def test_ev0_and_inverse(realfib):
    assert realfib.ev0(RC3_BASE) == Fraction(1, 2)
    assert realfib.ev0(Poly.of([-1, 0, 1])) == Fraction(1, 2)
    assert realfib.fiber_inverse(Poly.of([-3, 0, 3]), Fraction(1, 2)) == RC3_BASE
    assert realfib.fiber_inverse(Poly.of([0, 2]), Fraction(1, 2)) == Poly.of([-1, 0, 1])
    value = realfib.ev0(Poly.of([Fraction(-1, 2), -3, 0, 1]))
    assert realfib.fiber_inverse(Poly.of([-3, 0, 3]), value) == Poly.of([Fraction(-1, 2), -3, 0, 1])


@pytest.mark.parametrize(
    "q",
    [
        Poly.of([-3, 0, 3]),
        Poly.from_roots([0, 1, 3], leading=4),
        # m = -7/10000 and M = 0: the fibre interval is nearly empty.
        Poly.from_roots([Fraction(-1, 10), 0, 1], leading=4),
        Poly.of([0, 2]),
        Poly.of([-6, 2]),
    ],
)
@pytest.mark.parametrize("c", [Fraction(1, 7), Fraction(1, 2), Fraction(9, 10)])
def test_ev0_inverts_fiber_inverse(realfib, q, c):
    p = realfib.fiber_inverse(q, c)
    assert p.degree == q.degree + 1
    assert realfib.ev0(p) == c


def test_narrow_fibre_interval(realfib):
    data = realfib.minmax(Poly.from_roots([Fraction(-1, 10), 0, 1], leading=4))
    assert (data.m, data.M) == (Fraction(-7, 10000), 0)


def test_ev0_and_inverse_reject_bad_input(realfib):
    with pytest.raises(ValueError):
        realfib.ev0(Poly.of([1, 0, 1]))
    with pytest.raises(ValueError):
        realfib.ev0(Poly.of([0, 1]))
    with pytest.raises(ValueError, match="\\(0,1\\)"):
        realfib.fiber_inverse(Poly.of([-3, 0, 3]), 1)


def test_symmetric_cubic_is_real_but_not_complex(realfib, restricted):
    q = Poly.from_roots([-5, 0, 5], leading=4)
    assert realfib.in_qc_real(q)
    assert restricted.in_qc(q)[0] is False


def test_counterexample_of_degree_four(realfib, restricted):
    q = realfib.counterexample(4)
    data = realfib.minmax(q)
    ctx = numeric_context()
    assert q.degree == 4
    assert data.m - data.M > ctx.pi**3 / 4 - 0.01
    assert not realfib.in_qc_real(q)
    assert restricted.in_qc(q)[0]
    with pytest.raises(ValueError, match="not the derivative"):
        realfib.fiber_inverse(q, Fraction(1, 2))


def test_counterexample_grows_by_induction(realfib):
    q = realfib.counterexample(5)
    data = realfib.minmax(q)
    assert q.degree == 5 and len(data.roots) == 5
    assert data.m >= data.M
    with pytest.raises(ValueError):
        realfib.counterexample(3)
