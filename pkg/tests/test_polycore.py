from __future__ import annotations

from fractions import Fraction

import pytest

from pkg.polycore.discriminant import (
    discriminant,
    discriminant_oracle,
    elem_symmetric,
    has_real_simple_roots,
    is_squarefree,
    real_root_count,
    resultant,
)
from pkg.polycore.numbers import I, ExactComplex, numeric_context, to_approx, to_fraction
from pkg.polycore.poly import Poly, derive, eval_poly, format_poly, monic, parse_poly, primitive
from pkg.polycore.roots import RootFindingError, exact_roots, match_roots, min_separation, roots, sort_key


def test_exact_complex_parse_and_format():
    assert ExactComplex.parse("3/4") == ExactComplex(Fraction(3, 4))
    assert ExactComplex.parse("1-2i") == ExactComplex(Fraction(1), Fraction(-2))
    assert ExactComplex.parse("-i") == ExactComplex(Fraction(0), Fraction(-1))
    assert str(ExactComplex(Fraction(1, 2), Fraction(-3))) == "1/2-3*i"
    assert str(I) == "1*i"


def test_exact_complex_rejects_garbage():
    with pytest.raises(ValueError):
        ExactComplex.parse("1.5")


def test_exact_complex_arithmetic():
    z = ExactComplex(Fraction(1), Fraction(1))
    assert z * z.conjugate() == ExactComplex.of(2)
    assert z**-1 * z == ExactComplex.of(1)
    assert I * I == ExactComplex.of(-1)
    with pytest.raises(ZeroDivisionError):
        ExactComplex.of(0).inverse()


def test_poly_from_roots_and_calculus():
    q = Poly.from_roots([0, 1, 3], leading=4)
    assert q == Poly.of([0, 12, -16, 4])
    p = primitive(q)
    assert p == Poly.of([0, 0, 6, Fraction(-16, 3), 1])
    assert derive(p) == q
    assert eval_poly(p, 3) == ExactComplex.of(-9)
    assert monic(q).leading == ExactComplex.of(1)
    assert primitive(Poly.of([2, 6])) == Poly.of([0, 2, 3])


def test_poly_strips_trailing_zeros():
    assert Poly.of([1, 2, 0, 0]).degree == 1
    assert Poly.of([0]).is_zero


def test_format_and_parse_poly():
    p = Poly.of([Fraction(-1, 3), 0, 6, Fraction(-16, 3), 1])
    assert format_poly(p) == "[-1/3, 0, 6, -16/3, 1]"
    assert parse_poly("[-1/3, 0, 6, -16/3, 1]") == p
    with pytest.raises(ValueError):
        parse_poly("X^2")


def test_discriminant_of_depressed_cubic():
    assert discriminant(Poly.of([0, -3, 0, 1])) == ExactComplex.of(108)
    assert discriminant(Poly.from_roots([1, 1, -2])).is_zero


def test_discriminant_matches_oracle_in_floating_point():
    ctx = numeric_context(80)
    p = Poly.from_roots([0, 1, 2, 3])
    exact = to_approx(discriminant(p), ctx)
    assert abs(exact - discriminant_oracle(roots(p, ctx), ctx)) < 1e-12
    assert abs(discriminant(p.approx(ctx), ctx) - exact) < 1e-12


def test_resultant_vanishes_on_common_root():
    assert resultant(Poly.from_roots([1, 2]), Poly.from_roots([2, 5])).is_zero
    assert not resultant(Poly.from_roots([1, 2]), Poly.from_roots([3])).is_zero


def test_elem_symmetric_exact():
    points = [ExactComplex.of(value) for value in (1, 2, 3)]
    assert elem_symmetric(points, 2) == ExactComplex.of(11)
    with pytest.raises(ValueError):
        elem_symmetric(points, 4)


def test_roots_of_depressed_cubic():
    ctx = numeric_context()
    found = sorted(roots(Poly.of([0, -3, 0, 1]), ctx), key=sort_key)
    expected = [-ctx.sqrt(3), 0, ctx.sqrt(3)]
    assert all(abs(a - b) < 1e-12 for a, b in zip(found, expected))
    assert abs(min_separation(found, ctx) - ctx.sqrt(3)) < 1e-12


def test_exact_roots_recovers_rationals_only():
    assert sorted(exact_roots(Poly.from_roots([1, 2, Fraction(-1, 2)])), key=lambda z: z.re) == [
        ExactComplex.of(Fraction(-1, 2)),
        ExactComplex.of(1),
        ExactComplex.of(2),
    ]
    assert exact_roots(Poly.of([-2, 0, 1])) is None


def test_roots_reject_constants():
    with pytest.raises(ValueError):
        roots(Poly.of([5]))


def test_degenerate_aberth_step_reports_best_iterate():
    # X^2 warm-started at 1 and 1/2: the Newton ratio times the repulsion is exactly one.
    ctx = numeric_context()
    with pytest.raises(RootFindingError) as excinfo:
        roots(Poly.of([0, 0, 1]), ctx, start=[1, Fraction(1, 2)])
    assert len(excinfo.value.best_iterate) == 2


def test_match_roots_pairs_nearest_points():
    ctx = numeric_context()
    source = [ctx.mpc(0), ctx.mpc(1), ctx.mpc(2)]
    target = [ctx.mpc(2.01), ctx.mpc(-0.01), ctx.mpc(1.02)]
    assert match_roots(source, target) == [1, 2, 0]


def test_to_fraction_is_exact_binary_value():
    ctx = numeric_context()
    assert to_fraction(ctx.mpf(0.375)) == Fraction(3, 8)
    assert to_fraction(ctx.mpf(1) / 3, 100) == Fraction(1, 3)


def test_sturm_counts_distinct_real_roots():
    assert real_root_count(Poly.from_roots([-1, 0, 2])) == 3
    assert real_root_count(Poly.of([1, 0, 1])) == 0
    assert real_root_count(Poly.from_roots([1, 1, -1])) == 2
    assert has_real_simple_roots(Poly.of([-2, 0, 1]))
    assert not has_real_simple_roots(Poly.from_roots([1, 1, -1]))
    assert not has_real_simple_roots(Poly.of([1, 0, 1]))
    assert not is_squarefree(Poly.from_roots([2, 2]))
    with pytest.raises(ValueError, match="real"):
        real_root_count(Poly.of([I, 1]))
