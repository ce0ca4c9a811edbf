from __future__ import annotations

import asyncio
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import sympy
from loguru import logger

from app.entities.entity import CheckOutcome
from app.service.loop_service import LoopService
from app.service.realfib_service import RealFiberService
from app.service.restricted_service import RestrictedService, master_identity_sides, sij_expression
from app.service.schreier_service import SchreierService, b3_case, rb3_case
from app.service.tracer_service import SEPARATING_LINES, TracerService
from pkg.braid.artin import BraidWord, aij_word, braid_equal, garside, permutation
from pkg.braid.groups import decide_equal, map_word, preset
from pkg.braid.words import parse_word
from pkg.config.config import Settings
from pkg.loopdsl import library
from pkg.loopdsl.algebra import concat, invert
from pkg.loopdsl.loops import eval_loop
from pkg.polycore.discriminant import discriminant, discriminant_oracle
from pkg.polycore.numbers import ExactComplex, numeric_context, to_approx
from pkg.polycore.poly import Poly, eval_poly, primitive
from pkg.polycore.roots import roots

# Result of one check: (expected, computed, passed).
Verdict = tuple[str, str, bool]

# Traced words of the QC_3 loops, read with gamma_k -> x_k.
QP_TABLE = {
    "qc3_alpha_1": "x1 x1",
    "qc3_alpha_0": "x1 x2 x1 x2 x1^-1 x2^-1",
    "qc3_alpha_mhalf": "x1 x2 x1 x2 x1 x2^-1",
    "qc3_alpha_m1": "x1 x2 x2 x1",
    "qc3_alpha_m2": "x1 x2 x1 x1 x2 x1",
    "qc3_beta": "x1 x2 x1 x2 x1 x2",
}
GENERATOR_IMAGES = {
    "gamma3": (3, "x1 x2 x1"),
    "alpha3": (3, "x2^-1"),
    "beta3": (3, "x1^-1"),
    "qc3_gamma1": (3, "x1"),
    "qc3_gamma2": (3, "x2"),
    "rc4_delta1": (4, "x1"),
    "rc4_delta2": (4, "x2"),
    "rc4_delta3": (4, "x3"),
    "rc4_Gamma1": (4, "x2"),
    "rc4_Gamma2": (4, "x3"),
}
RP_TABLE = {
    "s[alpha,alpha]": "alpha alpha",
    "s[alpha,gamma]": "alpha gamma alpha^-1 beta^-1",
    "s[beta,beta]": "beta beta",
    "s[beta,gamma]": "beta gamma beta^-1 alpha^-1",
    "s[gamma,gamma]": "gamma gamma",
}
# Images under alpha -> x2^-1, beta -> x1^-1, gamma -> Delta_3, as products of A_ij.
SCHREIER_BRAID_IMAGES = {
    "s[alpha,alpha]": [("23", -1)],
    "s[alpha,gamma]": [("23", -1), ("13", 1), ("23", 1), ("12", 1)],
    "s[beta,beta]": [("12", -1)],
    "s[beta,gamma]": [("13", 1), ("23", 1)],
    "s[gamma,gamma]": [("12", 1), ("13", 1), ("23", 1)],
}
PROPERTY_SAMPLES = 1000
NEAR_LOCUS_OFFSET = Fraction(1, 1000)
# Every QC_STRIDE-th sample is also checked through the critical-value polynomial.
QC_STRIDE = 50
MASTER_IDENTITY_SAMPLES = 200
LINE_CLEARANCE = 1e-6
HOMOTOPY_TOLERANCE = 1e-9


@dataclass(slots=True)
class Check:
    name: str
    anchor: str
    run: Callable[[], Verdict]


def _random_fraction(rng: random.Random, bound: int = 9, denominator: int = 4) -> Fraction:
    return Fraction(rng.randint(-bound * denominator, bound * denominator), rng.randint(1, denominator))


def _equal(expected: BraidWord, computed: BraidWord) -> Verdict:
    return str(expected), str(computed), braid_equal(expected, computed)


class ReproduceService:
    """Runs the acceptance checks and collects one outcome per check."""

    def __init__(
        self,
        restricted: RestrictedService,
        loops: LoopService,
        tracer: TracerService,
        schreier: SchreierService,
        realfib: RealFiberService,
        settings: Settings,
    ) -> None:
        self._restricted = restricted
        self._loops = loops
        self._tracer = tracer
        self._schreier = schreier
        self._realfib = realfib
        self._settings = settings
        self._trace = lru_cache(maxsize=None)(self._trace_word)

    def _trace_word(self, name: str) -> BraidWord:
        return self._tracer.trace(library.builtin(name)).word

    def checks(self) -> list[Check]:
        checks = [
            Check("identity.master", "critical-value differences factor through S_ij", self._check_master_identity),
            Check("sij.m3", "S_ij for three points is z_i + z_j = 2 z_k", self._check_sij3),
            Check("sij.m4", "S_ij for four points", self._check_sij4),
            Check("sij.m5", "S_ij for five points", self._check_sij5),
            Check("member.base_points", "base points of RC_3, RC_4 and QF_3", self._check_base_points),
            Check("critical.qc3", "fibre over 4X^3-16X^2+12X avoids {-5/3, 0, 9}", self._check_critical_values),
            Check("chart.qf3", "(0,1,3) maps to (4,1,4)", self._check_chart),
            Check("resolvent", "Lagrange resolvent keeps the discriminant", self._check_resolvent),
            Check("loops.validate", "every builtin loop stays in its space", self._check_loops),
        ]
        for name, (strands, text) in GENERATOR_IMAGES.items():
            checks.append(Check(f"trace.{name}", f"{name} traces to {text}", self._trace_check(name, strands, text)))
        for name, text in QP_TABLE.items():
            checks.append(Check(f"table.{name}", f"{name} traces to {text}", self._trace_check(name, 3, text)))
        checks += [
            Check("relation.conjugate", "gamma2 alpha1 gamma2^-1 = alpha0^-1 alpha_-1/2", self._check_conjugate_relation),
            Check("relation.commutator", "gamma1 gamma2 gamma1 gamma2^-1 gamma1^-1 gamma2^-1 = alpha_-2 beta^-1", self._check_commutator_relation),
            Check("relation.squares", "gamma1^2 = alpha1 and gamma2^2 = alpha_-1/2^-1 beta", self._check_square_relations),
            Check("relation.artin", "(gamma1 gamma2)^3 = (gamma2 gamma1)^3", self._check_artin_relation),
            Check("schreier.rb3", "RP_3 is generated by five Schreier generators with four commutators", self._check_rb3),
            Check("schreier.table", "expansions of the surviving Schreier generators", self._check_rp_table),
            Check("schreier.braid_images", "images of the Schreier generators in B_3", self._check_braid_images),
            Check("schreier.b3", "B_3 -> Sigma_3 kernel is generated by pure braids", self._check_b3),
            Check("homotopy.discriminant", "disc H(t,s) = 27 e^{6 pi i t}(4 - a(s)^2)", self._check_homotopy),
            Check("value.gamma1_at_3", "Gamma_1 at 3 equals (9/2)E^2 - 83/6", self._check_gamma1_value),
        ]
        for name in SEPARATING_LINES:
            checks.append(Check(f"lines.{name}", f"strands of {name} avoid Re = {SEPARATING_LINES[name]}", self._line_check(name)))
        checks += [
            Check("realfib.minmax", "m, M of 3(X^2-1) are -2, 2", self._check_minmax),
            Check("realfib.roundtrip", "ev0 and its inverse on X^3-3X", self._check_roundtrip),
            Check("realfib.counterexample4", "5X(X-1)(X-3)(X-pi) has m - M > pi^3/4", self._check_counterexample4),
            Check("realfib.counterexample5", "inductive counterexample of degree 5", self._counterexample_check(5)),
            Check("realfib.counterexample6", "inductive counterexample of degree 6", self._counterexample_check(6)),
            Check("realfib.oracle", "m < M exactly when some fibre point has real simple roots", self._check_real_oracle),
            Check("remark.real_not_complex", "4(X+5)X(X-5) is in QC_3(R) but not QC_3", self._check_remark_a),
            Check("remark.complex_not_real", "5X(X-1)(X-3)(X-pi) is in QC_5 but not QC_5(R)", self._check_remark_b),
            Check("property.step_halving", "halving the step keeps every traced word", self._check_step_halving),
            Check("property.loop_laws", "traces respect loop inversion and concatenation", self._check_loop_laws),
            Check("property.discriminant", "resultant discriminant agrees with the root product", self._check_discriminant_oracle),
            Check("property.membership", "QF through S_ij agrees with distinct critical values", self._check_membership_agreement),
        ]
        return checks

    async def run(self, only: Sequence[str] | None = None) -> list[CheckOutcome]:
        checks = self.checks()
        if only:
            known = {check.name for check in checks}
            unknown = [name for name in only if name not in known]
            if unknown:
                raise ValueError(f"unknown checks {unknown}")
            checks = [check for check in checks if check.name in only]
        semaphore = asyncio.Semaphore(self._settings.reproduce_concurrency)

        async def run_one(check: Check) -> CheckOutcome:
            async with semaphore:
                return await asyncio.to_thread(self._execute, check)

        outcomes = await asyncio.gather(*(run_one(check) for check in checks))
        failed = sum(not outcome.passed for outcome in outcomes)
        logger.info("Reproduction finished: {passed} passed, {failed} failed", passed=len(outcomes) - failed, failed=failed)
        return list(outcomes)

    def _execute(self, check: Check) -> CheckOutcome:
        started = time.perf_counter()
        try:
            expected, computed, passed = check.run()
        except Exception as exc:
            logger.exception("Check {name} raised", name=check.name)
            expected, computed, passed = "no error", f"{type(exc).__name__}: {exc}", False
        elapsed = time.perf_counter() - started
        if not passed:
            logger.warning("Check {name} failed: expected {expected}, got {computed}", name=check.name, expected=expected, computed=computed)
        return CheckOutcome(check.name, check.anchor, expected, computed, passed, elapsed)

    def _check_master_identity(self) -> Verdict:
        rng = random.Random(self._settings.seed)
        failures = 0
        for n in range(4, 9):
            for _ in range(MASTER_IDENTITY_SAMPLES):
                points = [_random_fraction(rng) for _ in range(n - 1)]
                i, j = sorted(rng.sample(range(1, n), 2))
                lhs, rhs = master_identity_sides(points, i, j)
                failures += lhs != rhs
        return "0 mismatches", f"{failures} mismatches", failures == 0

    def _sij_verdict(self, m: int, expected: sympy.Expr) -> Verdict:
        computed = sij_expression(m, 1, 2).as_expr()
        return str(sympy.expand(expected)), str(computed), sympy.expand(computed - expected) == 0

    def _check_sij3(self) -> Verdict:
        z1, z2, z3 = sympy.symbols("z1:4")
        return self._sij_verdict(3, 2 * z1 + 2 * z2 - 4 * z3)

    def _check_sij4(self) -> Verdict:
        z1, z2, z3, z4 = sympy.symbols("z1:5")
        expected = 3 * z1**2 + 4 * z1 * z2 + 3 * z2**2 - 5 * (z3 + z4) * (z1 + z2) + 10 * z3 * z4
        return self._sij_verdict(4, expected)

    def _check_sij5(self) -> Verdict:
        z1, z2, z3, z4, z5 = sympy.symbols("z1:6")
        expected = (
            4 * z1**3 + 6 * z1**2 * z2 + 6 * z1 * z2**2 + 4 * z2**3
            - 2 * (3 * z1**2 + 4 * z1 * z2 + 3 * z2**2) * (z3 + z4 + z5)
            + 10 * (z1 + z2) * (z3 * z4 + z3 * z5 + z4 * z5)
            - 20 * z3 * z4 * z5
        )
        return self._sij_verdict(5, expected)

    def _check_base_points(self) -> Verdict:
        rc3 = self._restricted.membership(library.RC3_BASE).in_rc
        rc4 = self._restricted.membership(library.RC4_BASE).in_rc
        qf3 = self._restricted.in_qf([0, 1, 3]).in_qf
        return "True True True", f"{rc3} {rc4} {qf3}", rc3 and rc4 and qf3

    def _check_critical_values(self) -> Verdict:
        values = self._restricted.critical_values(library.QC3_BASE)
        expected = {ExactComplex.of(0), ExactComplex.of(Fraction(5, 3)), ExactComplex.of(-9)}
        return "{0, 5/3, -9}", "{" + ", ".join(str(value) for value in values) + "}", set(values) == expected

    def _check_chart(self) -> Verdict:
        chart = self._restricted.qf3_chart(0, 1, 3)
        back = self._restricted.qf3_chart_inverse(*chart)
        computed = tuple(str(value) for value in chart)
        ok = computed == ("4", "1", "4") and back == tuple(ExactComplex.of(value) for value in (0, 1, 3))
        return "(4, 1, 4)", str(computed), ok

    def _check_resolvent(self) -> Verdict:
        result = self._restricted.lagrange_resolvent(0, 1, 2, 3)
        values = sorted(value.re for value in result.values)
        ok = values == [5, 8, 9] and result.quartic_discriminant == result.resolvent_discriminant == ExactComplex.of(144)
        return "[5, 8, 9], 144 = 144", f"{values}, {result.quartic_discriminant} = {result.resolvent_discriminant}", ok

    def _check_loops(self) -> Verdict:
        failed = [name for name in library.names() if not self._loops.validate(library.builtin(name)).valid]
        return "[]", str(failed), not failed

    def _trace_check(self, name: str, strands: int, text: str) -> Callable[[], Verdict]:
        return lambda: _equal(BraidWord.parse(strands, text), self._trace(name))

    def _check_conjugate_relation(self) -> Verdict:
        expected = self._trace("qc3_alpha_0").inverse() * self._trace("qc3_alpha_mhalf")
        return _equal(expected, self._trace("lift_g2a1g2inv"))

    def _check_commutator_relation(self) -> Verdict:
        expected = self._trace("qc3_alpha_m2") * self._trace("qc3_beta").inverse()
        lift = self._trace("lift_commutator")
        image = BraidWord.parse(3, "x1 x2 x1 x2^-1 x1^-1 x2^-1")
        return str(expected), str(lift), braid_equal(expected, lift) and braid_equal(lift, image)

    def _check_square_relations(self) -> Verdict:
        gamma1 = library.builtin("qc3_gamma1")
        squared = self._tracer.trace(concat(gamma1, gamma1)).word
        first = braid_equal(squared, self._trace("qc3_alpha_1"))
        second = braid_equal(
            BraidWord.parse(3, "x2 x2"),
            self._trace("qc3_alpha_mhalf").inverse() * self._trace("qc3_beta"),
        )
        return "True True", f"{first} {second}", first and second

    def _check_artin_relation(self) -> Verdict:
        one, two = self._trace("qc3_gamma1"), self._trace("qc3_gamma2")
        return _equal((one * two) ** 3, (two * one) ** 3)

    def _rb3_result(self):
        presentation, images, transversal = rb3_case()
        quotient = self._schreier.quotient(presentation, images, 3)
        table = self._schreier.schreier_transversal(presentation, quotient, transversal)
        raw = self._schreier.subgroup_presentation(presentation, quotient, table)
        return raw, self._schreier.tietze_simplify(raw.presentation)

    @staticmethod
    def _is_centre_commutator(relator) -> bool:
        totals: dict[str, int] = {}
        for name, exponent in relator:
            totals[name] = totals.get(name, 0) + exponent
        return len(relator) == 4 and len(totals) == 2 and "s[gamma,gamma]" in totals and not any(totals.values())

    def _check_rb3(self) -> Verdict:
        raw, simplified = self._rb3_result()
        survivors = simplified.presentation
        commutators = all(self._is_centre_commutator(relator) for relator in survivors.relators)
        sound = self._schreier.is_sound(survivors, raw.definitions, preset("RB3"))
        computed = (
            f"raw {len(raw.presentation.generators)}/{len(raw.presentation.relators)}, "
            f"simplified {sorted(survivors.generators)} with {len(survivors.relators)} relators"
        )
        ok = (
            len(raw.presentation.generators) == 13
            and len(raw.presentation.relators) == 12
            and sorted(survivors.generators) == sorted(RP_TABLE)
            and len(survivors.relators) == 4
            and commutators
            and sound
            and not simplified.partial
        )
        return f"raw 13/12, simplified {sorted(RP_TABLE)} with 4 relators", computed, ok

    def _check_rp_table(self) -> Verdict:
        raw, _ = self._rb3_result()
        group = preset("RB3")
        mismatched = [
            name for name, text in RP_TABLE.items()
            if not decide_equal(group, raw.definitions[name], parse_word(text))
        ]
        return "[]", str(mismatched), not mismatched

    def _check_braid_images(self) -> Verdict:
        raw, _ = self._rb3_result()
        images = {"alpha": parse_word("x2^-1"), "beta": parse_word("x1^-1"), "gamma": garside(3).to_word()}
        mismatched = []
        for name, factors in SCHREIER_BRAID_IMAGES.items():
            expected = BraidWord(3)
            for pair, exponent in factors:
                expected = expected * aij_word(int(pair[0]), int(pair[1]), 3) ** exponent
            computed = BraidWord.from_word(3, map_word(raw.definitions[name], images))
            if not braid_equal(expected, computed):
                mismatched.append(name)
        return "[]", str(mismatched), not mismatched

    def _check_b3(self) -> Verdict:
        presentation, images = b3_case()
        quotient = self._schreier.quotient(presentation, images, 3)
        transversal = self._schreier.schreier_transversal(presentation, quotient)
        result = self._schreier.subgroup_presentation(presentation, quotient, transversal)
        words = {name: BraidWord.from_word(3, word) for name, word in result.definitions.items()}
        pure = all(permutation(word) == (0, 1, 2) for word in words.values())
        firsts = [word for word in words.values() if braid_equal(word, aij_word(1, 2, 3))]
        seconds = [word for word in words.values() if braid_equal(word, aij_word(2, 3, 3))]
        sound = self._schreier.is_sound(result.presentation, result.definitions, preset("B3"))
        ok = len(transversal.representatives) == 6 and pure and bool(firsts) and bool(seconds) and sound
        return "6 cosets, pure generators including A12 and A23", f"{len(transversal.representatives)} cosets, pure={pure}", ok

    def _check_homotopy(self) -> Verdict:
        check = self._tracer.verify_h_discriminant()
        ok = check.max_deviation < HOMOTOPY_TOLERANCE and check.max_boundary_deviation < HOMOTOPY_TOLERANCE
        return f"< {HOMOTOPY_TOLERANCE}", f"{check.max_deviation:.3g} / {check.max_boundary_deviation:.3g}", ok

    def _check_gamma1_value(self) -> Verdict:
        ctx = numeric_context(self._settings.precision_bits)
        loop = library.builtin("rc4_Gamma1")
        worst = ctx.mpf(0)
        smallest = ctx.inf
        for k in range(65):
            t = Fraction(k, 64)
            value = eval_poly(eval_loop(loop, t, ctx), 3, ctx)
            expected = ctx.mpf(9) / 2 * ctx.expjpi(2 * ctx.mpf(k) / 64) - ctx.mpf(83) / 6
            worst = max(worst, abs(value - expected))
            smallest = min(smallest, abs(value))
        return "deviation < 1e-12, never zero", f"{ctx.nstr(worst, 3)}, min {ctx.nstr(smallest, 5)}", worst < 1e-12 and smallest > 1

    def _line_check(self, name: str) -> Callable[[], Verdict]:
        def run() -> Verdict:
            clearance = self._tracer.line_clearance(library.builtin(name))
            return f"> {LINE_CLEARANCE}", f"{clearance.min_distance:.3g}", clearance.min_distance > LINE_CLEARANCE

        return run

    def _check_minmax(self) -> Verdict:
        data = self._realfib.minmax(Poly.of([-3, 0, 3]))
        return "(-2, 2)", f"({data.m}, {data.M})", data.m == -2 and data.M == 2

    def _check_roundtrip(self) -> Verdict:
        value = self._realfib.ev0(library.RC3_BASE)
        back = self._realfib.fiber_inverse(Poly.of([-3, 0, 3]), Fraction(1, 2))
        return "1/2 and X^3-3X", f"{value} and {back}", value == Fraction(1, 2) and back == library.RC3_BASE

    def _check_counterexample4(self) -> Verdict:
        q = self._realfib.counterexample(4)
        data = self._realfib.minmax(q)
        ctx = numeric_context(self._settings.precision_bits)
        bound = ctx.pi**3 / 4 - ctx.mpf("0.01")
        return f"m - M > {ctx.nstr(bound, 8)}", ctx.nstr(data.m - data.M, 8), data.m - data.M > bound

    def _counterexample_check(self, degree: int) -> Callable[[], Verdict]:
        def run() -> Verdict:
            q = self._realfib.counterexample(degree)
            data = self._realfib.minmax(q)
            ok = q.degree == degree and len(data.roots) == degree and data.m >= data.M
            return "m >= M with distinct real roots", f"degree {q.degree}, m - M = {float(data.m - data.M):.6g}", ok

        return run

    def _check_real_oracle(self) -> Verdict:
        rng = random.Random(self._settings.seed)
        disagreements = 0
        for sample in range(100):
            degree = 2 + sample % 2
            points = sorted(rng.sample(range(-12, 13), degree + 1))
            q = Poly.from_roots([ExactComplex.of(point) for point in points], leading=degree + 2)
            data = self._realfib.minmax(q)
            p = primitive(q)
            if data.m < data.M:
                grid = [data.m + (data.M - data.m) * Fraction(k, 12) for k in range(1, 12)]
                disagreements += not all(self._realfib.has_real_simple_roots(p.with_constant(-c)) for c in grid)
            else:
                low, high = min(data.critical_values) - 1, max(data.critical_values) + 1
                grid = [low + (high - low) * Fraction(k, 40) for k in range(41)]
                disagreements += any(self._realfib.has_real_simple_roots(p.with_constant(-c)) for c in grid)
        return "0 disagreements", f"{disagreements} disagreements", disagreements == 0

    def _check_remark_a(self) -> Verdict:
        q = Poly.from_roots([-5, 0, 5], leading=4)
        real = self._realfib.in_qc_real(q)
        complex_, _ = self._restricted.in_qc(q)
        return "real in, complex out", f"real {real}, complex {complex_}", real and not complex_

    def _check_remark_b(self) -> Verdict:
        q = self._realfib.counterexample(4)
        real = self._realfib.in_qc_real(q)
        complex_, _ = self._restricted.in_qc(q)
        return "real out, complex in", f"real {real}, complex {complex_}", complex_ and not real

    def _check_step_halving(self) -> Verdict:
        half = self._settings.trace_max_step / 2
        changed = [
            name for name in library.names()
            if not braid_equal(self._trace(name), self._tracer.trace(library.builtin(name), max_step=half).word)
        ]
        return "[]", str(changed), not changed

    def _check_loop_laws(self) -> Verdict:
        broken = []
        for name in ("gamma3", "alpha3", "qc3_gamma1", "rc4_delta2"):
            loop = library.builtin(name)
            if not braid_equal(self._tracer.trace(invert(loop)).word, self._trace(name).inverse()):
                broken.append(f"invert {name}")
        for first, second in (("alpha3", "beta3"), ("qc3_gamma1", "qc3_gamma2"), ("rc4_delta1", "rc4_Gamma2")):
            joined = self._tracer.trace(concat(library.builtin(first), library.builtin(second))).word
            if not braid_equal(joined, self._trace(first) * self._trace(second)):
                broken.append(f"concat {first} {second}")
        back = self._tracer.trace(concat(library.builtin("gamma3"), invert(library.builtin("gamma3"))))
        if not braid_equal(back.word, BraidWord(3)):
            broken.append("gamma3 then its inverse")
        return "[]", str(broken), not broken

    def _check_discriminant_oracle(self) -> Verdict:
        rng = random.Random(self._settings.seed)
        ctx = numeric_context(self._settings.precision_bits)
        worst = ctx.mpf(0)
        for _ in range(200):
            degree = rng.randint(2, 8)
            p = Poly.of([rng.randint(-10, 10) for _ in range(degree)] + [1])
            value = discriminant(p)
            if value.is_zero:
                continue
            exact = to_approx(value, ctx)
            oracle = discriminant_oracle(roots(p, ctx), ctx)
            worst = max(worst, abs(exact - oracle) / max(1, abs(exact)))
        return "< 1e-9", ctx.nstr(worst, 3), worst < 1e-9

    def _membership_points(self, rng: random.Random) -> list[Fraction]:
        size = rng.randint(3, 5)
        points = [_random_fraction(rng, bound=3, denominator=7) for _ in range(size)]
        shape = rng.randrange(4)
        if shape == 0:
            return points
        if shape in (1, 2):
            # Odd sets symmetric about a centre lie on an S_ij hypersurface.
            centre = points[0]
            arms = [abs(value) + Fraction(k + 1, 3) for k, value in enumerate(points[1:3])]
            points = [centre, centre + arms[0], centre - arms[0]]
            if size > 3:
                points += [centre + arms[1], centre - arms[1]]
            if shape == 2:
                points[-1] += NEAR_LOCUS_OFFSET
            return points
        points[-1] = points[0] + NEAR_LOCUS_OFFSET
        return points

    def _check_membership_agreement(self) -> Verdict:
        rng = random.Random(self._settings.seed)
        disagreements, inside = 0, 0
        for sample in range(PROPERTY_SAMPLES):
            points = self._membership_points(rng)
            verdict = self._restricted.in_qf(points).in_qf
            inside += verdict
            disagreements += verdict != self._restricted.in_qf_direct(points)
            if sample % QC_STRIDE == 0:
                q = Poly.from_roots(points, leading=len(points) + 1)
                disagreements += verdict != self._restricted.in_qc(q)[0]
        outside = PROPERTY_SAMPLES - inside
        computed = f"{disagreements} disagreements, {inside} inside, {outside} outside"
        return "0 disagreements", computed, disagreements == 0 and inside > 0 and outside > 0
