from __future__ import annotations

from fractions import Fraction

import pytest

from app.service.restricted_service import BI, BJ, NeighborhoodError, a_entries, format_sij, master_identity_sides
from pkg.loopdsl.ast import Space
from pkg.loopdsl.library import QC3_BASE
from pkg.polycore.numbers import ExactComplex, numeric_context, to_approx
from pkg.polycore.poly import Poly


def test_a_table_recursion(restricted):
    assert a_entries(3) == (1,)
    assert a_entries(4) == (-4, 2 * BI + 2 * BJ)
    assert restricted.a_table(5).entries == [10, -5 * BI - 5 * BJ, 3 * BI**2 + 4 * BI * BJ + 3 * BJ**2]
    with pytest.raises(ValueError):
        a_entries(2)


def test_sij_on_three_points(restricted):
    assert format_sij(restricted.sij_poly(3, 1, 2).expression) == "2*z1 + 2*z2 - 4*z3"
    with pytest.raises(ValueError):
        restricted.sij_poly(3, 2, 2)
    with pytest.raises(ValueError):
        restricted.sij_poly(2, 1, 2)


def test_master_identity_balances():
    lhs, rhs = master_identity_sides([0, 1, 3], 1, 2)
    assert lhs == rhs == ExactComplex.of(Fraction(-5, 3))


def test_qf_membership_witnesses(restricted):
    assert restricted.in_qf([0, 1, 3]).in_qf
    assert restricted.in_qf([0, 1, 2]).witness == "S_13"
    assert restricted.in_qf([0, 0, 1]).witness == "H_12"
    assert not restricted.in_qf_direct([0, 1, 2])
    assert restricted.in_qf_direct([0, 1, 3])


def test_qf_membership_in_floating_point(restricted):
    ctx = numeric_context()
    points = [ctx.mpc(0), ctx.mpc(1), ctx.mpc(2)]
    assert restricted.in_qf(points).witness == "S_13"


def test_critical_values_of_base_cubic(restricted):
    assert restricted.critical_values(QC3_BASE) == [
        ExactComplex.of(0),
        ExactComplex.of(Fraction(5, 3)),
        ExactComplex.of(-9),
    ]
    assert restricted.critical_value_polynomial(QC3_BASE) == Poly.of([0, -15, Fraction(22, 3), 1])
    assert restricted.in_qc(QC3_BASE) == (True, None)


def test_membership_verdicts(restricted):
    verdict = restricted.membership(Poly.of([0, -3, 0, 1]))
    assert verdict.in_c and verdict.in_qc and verdict.in_rc and verdict.exact
    assert verdict.cubic_gap == ExactComplex.of(9)

    repeated = restricted.membership(Poly.of([0, 0, 0, 1]))
    assert not repeated.in_c and not repeated.in_rc
    assert repeated.witness == "discriminant vanishes"

    symmetric = restricted.membership(Poly.of([2, 0, -2, 0, 1]))
    assert symmetric.in_c and not symmetric.in_qc
    assert symmetric.witness == "P(b_1) = P(b_3)"

    with pytest.raises(ValueError):
        restricted.membership(Poly.of([7]))


def test_section_point_lies_in_fibre(restricted):
    point = restricted.section_point(QC3_BASE)
    assert point == Poly.of([Fraction(-35, 3), 0, 6, Fraction(-16, 3), 1])
    assert restricted.membership(point).in_rc


def test_qf3_chart(restricted):
    assert restricted.qf3_chart(0, 1, 3) == (ExactComplex.of(4), ExactComplex.of(1), ExactComplex.of(4))
    assert restricted.qf3_chart_inverse(4, 1, 4) == (ExactComplex.of(0), ExactComplex.of(1), ExactComplex.of(3))
    with pytest.raises(ValueError, match="Y = 0"):
        restricted.qf3_chart(0, 1, 2)
    with pytest.raises(ValueError, match="excluded"):
        restricted.qf3_chart(0, 0, 1)


def test_lagrange_resolvent(restricted):
    result = restricted.lagrange_resolvent(0, 1, 2, 3)
    assert set(result.values) == {ExactComplex.of(5), ExactComplex.of(8), ExactComplex.of(9)}
    assert result.quartic_discriminant == result.resolvent_discriminant == ExactComplex.of(144)


def test_quadratic_trivialization(restricted):
    assert restricted.trivialize_quadratic(1, 3) == (ExactComplex.of(2), ExactComplex.of(-1))
    assert restricted.untrivialize_quadratic(2, -1) == (ExactComplex.of(1), ExactComplex.of(3))
    with pytest.raises(ValueError):
        restricted.trivialize_quadratic(2, 2)
    with pytest.raises(ValueError):
        restricted.untrivialize_quadratic(2, 0)


def test_plane_shift_moves_only_inside_discs(restricted):
    anchors0 = [Fraction(0), Fraction(10)]
    anchors = [Fraction(1, 10), Fraction(10)]
    assert abs(restricted.plane_shift(anchors0, anchors, Fraction(1), 0) - 0.1) < 1e-12
    assert abs(restricted.plane_shift(anchors0, anchors, Fraction(1), Fraction(1, 2)) - 0.55) < 1e-12
    assert abs(restricted.plane_shift(anchors0, anchors, Fraction(1), 5) - 5) < 1e-12
    with pytest.raises(ValueError, match="eps or more"):
        restricted.plane_shift(anchors0, [Fraction(2), Fraction(10)], Fraction(1), 0)
    with pytest.raises(ValueError, match="3\\*eps"):
        restricted.plane_shift([Fraction(0), Fraction(2)], [Fraction(0), Fraction(2)], Fraction(1), 0)


def test_trivialize_keeps_far_constants(restricted):
    q = Poly.from_roots([0, 1, 3 + Fraction(1, 10**6)], leading=4)
    result = restricted.trivialize(QC3_BASE, q, 100)
    ctx = numeric_context()
    assert abs(result.shifted_constant - 100) < 1e-9
    assert abs(to_approx(result.polynomial.coefficient(0), ctx) + 100) < 1e-9
    assert 0 < result.radii.delta <= result.radii.delta1


def test_trivialize_rejects_far_polynomials(restricted):
    with pytest.raises(NeighborhoodError):
        restricted.trivialize(QC3_BASE, Poly.from_roots([0, 1, Fraction(7, 2)], leading=4), 0)
    with pytest.raises(NeighborhoodError) as excinfo:
        restricted.trivialize(QC3_BASE, Poly.from_roots([0, 1, 3], leading=5), 0)
    assert excinfo.value.bound == "leading"


def test_space_margins_with_warm_start(restricted):
    ctx = numeric_context()
    size, separation, sij, points = restricted.space_margins(QC3_BASE, Space.QC, ctx)
    assert abs(separation - 1) < 1e-12
    nudged = [point + ctx.mpf("1e-6") for point in points]
    warm = restricted.space_margins(QC3_BASE, Space.QC, ctx, start=nudged)
    assert abs(warm[0] - size) < 1e-9
    assert abs(warm[1] - separation) < 1e-12 and abs(warm[2] - sij) < 1e-9
