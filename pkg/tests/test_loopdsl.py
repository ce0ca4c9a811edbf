from __future__ import annotations

from fractions import Fraction

import pytest

from pkg.loopdsl import library
from pkg.loopdsl.algebra import concat, conjugate, invert, reparametrize
from pkg.loopdsl.ast import Space
from pkg.loopdsl.loops import LoopValidationError, basepoint, closing_gap, eval_loop, exact_at, same_point
from pkg.loopdsl.parser import LoopSyntaxError, parse, read_polynomial
from pkg.loopdsl.printer import format_loop
from pkg.polycore.numbers import ExactComplex, numeric_context, to_approx
from pkg.polycore.poly import Poly


def test_parse_single_segment_loop():
    loop = parse("loop n=3 space=RC { [0,1]: X^3 - 3*E(2t)*X }")
    assert loop.n == 3
    assert loop.space is Space.RC
    assert exact_at(loop, Fraction(0)) == library.RC3_BASE
    assert exact_at(loop, Fraction(1, 2)) == Poly.of([0, 3, 0, 1])
    assert exact_at(loop, Fraction(1, 4)) == Poly.of([0, ExactComplex(Fraction(0), Fraction(-3)), 0, 1])


def test_exact_values_on_piecewise_loop():
    alpha = library.builtin("alpha3")
    assert exact_at(alpha, Fraction(1, 2)) == Poly.of([Fraction(11, 5), -3, 0, 1])
    assert exact_at(alpha, Fraction(1, 3)) == Poly.of([Fraction(9, 5), -3, 0, 1])
    assert exact_at(alpha, Fraction(1, 6)) == Poly.of([Fraction(9, 10), -3, 0, 1])


def test_exact_value_missing_off_quarter_turns():
    assert exact_at(library.builtin("gamma3"), Fraction(1, 3)) is None
    value = eval_loop(library.builtin("gamma3"), Fraction(1, 3), numeric_context())
    ctx = numeric_context()
    assert abs(to_approx(value.coefficient(1), ctx) + 3 * ctx.expjpi(ctx.mpf(2) / 3)) < 1e-12


def test_syntax_errors_carry_position():
    with pytest.raises(LoopSyntaxError) as excinfo:
        parse("loop n=3 {\n  [0,1]: X^3 $ 1 }")
    assert (excinfo.value.line, excinfo.value.column) == (2, 14)
    with pytest.raises(LoopSyntaxError):
        parse("loop n=1 { [0,1]: Y }")
    with pytest.raises(LoopSyntaxError):
        parse("loop n=1 space=QQ { [0,1]: X }")


def test_degree_must_match_header():
    with pytest.raises(LoopSyntaxError, match="degree 3, expected 2"):
        parse("loop n=2 { [0,1]: X^3 }")


def test_intervals_must_partition_unit_interval():
    with pytest.raises(LoopValidationError, match="do not cover"):
        parse("loop n=1 { [0,1/2]: X; [2/3,1]: X }")
    with pytest.raises(LoopValidationError, match="overlap"):
        parse("loop n=1 { [0,2/3]: X; [1/2,1]: X }")
    with pytest.raises(LoopValidationError, match="disagree"):
        parse("loop n=1 { [0,1/2]: X; [1/2,1]: X + 1 }")


def test_builtins_close_up_at_their_basepoints():
    for name in library.names():
        loop = library.builtin(name)
        assert closing_gap(loop) < 1e-20, name
        assert same_point(basepoint(loop), library.BASEPOINTS[name]), name


def test_unknown_builtin():
    with pytest.raises(ValueError, match="unknown builtin"):
        library.builtin("delta9")


def test_invert_runs_backwards():
    alpha = library.builtin("alpha3")
    inverse = invert(alpha)
    assert inverse.name == "alpha3^-1"
    for s in (Fraction(0), Fraction(1, 6), Fraction(1, 2), Fraction(5, 6)):
        assert exact_at(inverse, s) == exact_at(alpha, 1 - s)


def test_concat_runs_each_loop_at_double_speed():
    gamma = library.builtin("gamma3")
    loop = concat(gamma, invert(gamma))
    assert [segment.start for segment in loop.segments] == [0, Fraction(1, 2)]
    assert exact_at(loop, Fraction(1, 4)) == exact_at(gamma, Fraction(1, 2))
    assert exact_at(loop, Fraction(3, 4)) == exact_at(gamma, Fraction(1, 2))
    assert loop.space is Space.RC


def test_concat_checks_degree_and_basepoint():
    with pytest.raises(LoopValidationError, match="degree"):
        concat(library.builtin("gamma3"), library.builtin("rc4_Gamma1"))
    with pytest.raises(LoopValidationError, match="basepoint"):
        concat(library.builtin("gamma3"), library.builtin("qc3_gamma1"))


def test_conjugate_uses_thirds():
    loop = conjugate(library.builtin("qc3_gamma1"), library.builtin("qc3_gamma2"))
    assert loop.boundaries[0] == 0 and loop.boundaries[-1] == 1
    assert Fraction(1, 3) in loop.boundaries and Fraction(2, 3) in loop.boundaries
    assert exact_at(loop, Fraction(1, 2)) == exact_at(library.builtin("qc3_gamma1"), Fraction(1, 2))


def test_reparametrize_window():
    segments = reparametrize(library.builtin("gamma3"), Fraction(0), Fraction(1, 2))
    assert (segments[0].start, segments[0].end) == (0, Fraction(1, 2))
    with pytest.raises(ValueError):
        reparametrize(library.builtin("gamma3"), Fraction(1, 2), Fraction(1, 2))


def test_formatted_loop_parses_back():
    alpha = library.builtin("alpha3")
    again = parse(format_loop(alpha))
    assert again.n == alpha.n and again.space is alpha.space
    for s in (Fraction(0), Fraction(1, 6), Fraction(1, 2), Fraction(5, 6)):
        assert exact_at(again, s) == exact_at(alpha, s)


def test_read_polynomial_accepts_lists_and_expressions():
    assert read_polynomial("4*X^3 - 16*X^2 + 12*X") == library.QC3_BASE
    assert read_polynomial("[0, -3, 0, 1]") == library.RC3_BASE
    assert read_polynomial("(X - 1)*(X + 1)") == Poly.of([-1, 0, 1])
    with pytest.raises(ValueError):
        read_polynomial("X^2 + t")
    with pytest.raises(ValueError):
        read_polynomial("X^2 + E(1/3)")


def test_validation_of_builtin_and_escaping_loops(loops):
    report = loops.validate(library.builtin("alpha3"), samples=64)
    assert report.valid and report.basepoint_ok
    assert report.basepoint == str(library.RC3_BASE)
    assert report.min_discriminant > 1e-6
    assert loops.validate(library.builtin("alpha3"), samples=64) is report

    escaping = loops.parse("loop n=3 space=RC { [0,1]: X^3 - 3*X + 2*E(2t) }")
    report = loops.validate(escaping, samples=64)
    assert not report.valid
    assert any("leaves RC" in failure for failure in report.failures)


def test_loop_source_must_be_unambiguous(loops):
    with pytest.raises(ValueError):
        loops.resolve(text="loop n=1 { [0,1]: X }", builtin="gamma3")
    with pytest.raises(ValueError):
        loops.resolve()
