from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from app.entities.entity import (
    Bound,
    CheckOutcome,
    MembershipVerdict,
    QfVerdict,
    RealFiberData,
    SubgroupPresentation,
    TietzeResult,
    TraceResult,
)
from pkg.braid.words import format_word
from pkg.polycore.numbers import ExactComplex


def format_number(value) -> str:
    if isinstance(value, Bound):
        return value.value
    if isinstance(value, (int, Fraction, ExactComplex)):
        return str(value)
    context = getattr(value, "context", None)
    if context is not None:
        return context.nstr(value, 17)
    return repr(float(value))


class MemberRequest(BaseModel):
    polynomial: Optional[str] = Field(None, description="Coefficient list [c0, c1, ...] or an expression in X")
    points: Optional[List[str]] = Field(None, description="Exact complex points for the QF test, e.g. ['0', '1', '3']")

    @model_validator(mode="after")
    def _one_input(self) -> MemberRequest:
        if (self.polynomial is None) == (self.points is None):
            raise ValueError("give exactly one of polynomial or points")
        return self


class MemberResponse(BaseModel):
    in_c: Optional[bool] = None
    in_qc: Optional[bool] = None
    in_rc: Optional[bool] = None
    in_qf: Optional[bool] = None
    exact: bool = True
    witness: Optional[str] = None
    cubic_gap: Optional[str] = None

    @classmethod
    def from_membership(cls, verdict: MembershipVerdict) -> MemberResponse:
        return cls(
            in_c=verdict.in_c,
            in_qc=verdict.in_qc,
            in_rc=verdict.in_rc,
            exact=verdict.exact,
            witness=verdict.witness,
            cubic_gap=None if verdict.cubic_gap is None else str(verdict.cubic_gap),
        )

    @classmethod
    def from_qf(cls, verdict: QfVerdict) -> MemberResponse:
        return cls(in_qf=verdict.in_qf, witness=verdict.witness)


class SijResponse(BaseModel):
    m: int
    i: int
    j: int
    polynomial: str


class TraceRequest(BaseModel):
    loop: Optional[str] = Field(None, description="Loop source text")
    builtin: Optional[str] = Field(None, description="Name of a builtin loop")
    max_step: Optional[float] = Field(None, gt=0)


class TraceResponse(BaseModel):
    word: List[str]
    permutation: List[int]
    min_separation: float
    steps: int
    precision: int
    crossings: int

    @classmethod
    def from_result(cls, result: TraceResult) -> TraceResponse:
        return cls(
            word=[f"x{index}" if exponent > 0 else f"x{index}^-1" for index, exponent in result.word.letters],
            permutation=list(result.permutation),
            min_separation=result.min_separation_seen,
            steps=result.steps,
            precision=result.precision,
            crossings=len(result.crossings),
        )


class PresentRequest(BaseModel):
    generators: List[str]
    relators: List[str] = Field(default_factory=list, description="Words such as 'alpha gamma beta^-1 gamma^-1'")
    degree: int = Field(..., ge=1, description="The quotient acts on 1..degree")
    images: Dict[str, List[List[int]]] = Field(..., description="1-based cycles of each generator's image")
    transversal: Optional[List[str]] = Field(None, description="Schreier transversal; breadth-first when omitted")
    simplify: bool = True


class PresentResponse(BaseModel):
    generators: List[str]
    relators: List[str]
    definitions: Dict[str, str]
    raw_generators: int
    raw_relators: int
    partial: bool = False

    @classmethod
    def from_result(cls, raw: SubgroupPresentation, simplified: Optional[TietzeResult]) -> PresentResponse:
        presentation = simplified.presentation if simplified is not None else raw.presentation
        return cls(
            generators=list(presentation.generators),
            relators=[format_word(relator) for relator in presentation.relators],
            definitions={name: format_word(raw.definitions[name]) for name in presentation.generators},
            raw_generators=len(raw.presentation.generators),
            raw_relators=len(raw.presentation.relators),
            partial=simplified.partial if simplified is not None else False,
        )


class PolynomialRequest(BaseModel):
    polynomial: str


class CounterexampleRequest(BaseModel):
    degree: int = Field(..., ge=4)


class MinMaxResponse(BaseModel):
    m: str
    M: str
    in_qc_real: bool
    critical_values: List[str]
    roots: List[str]

    @classmethod
    def from_data(cls, data: RealFiberData) -> MinMaxResponse:
        return cls(
            m=format_number(data.m),
            M=format_number(data.M),
            in_qc_real=data.M is Bound.INFINITY or data.m < data.M,
            critical_values=[format_number(value) for value in data.critical_values],
            roots=[format_number(value) for value in data.roots],
        )


class Ev0Response(BaseModel):
    value: str


class CounterexampleResponse(BaseModel):
    degree: int
    polynomial: str
    m: str
    M: str
    gap: float


class BuiltinsResponse(BaseModel):
    names: List[str]


class HealthResponse(BaseModel):
    status: str = "ok"
    app_name: str


class CheckReport(BaseModel):
    name: str
    anchor: str
    expected: str
    computed: str
    passed: bool
    elapsed: float

    @classmethod
    def from_outcome(cls, outcome: CheckOutcome) -> CheckReport:
        return cls(
            name=outcome.name,
            anchor=outcome.anchor,
            expected=outcome.expected,
            computed=outcome.computed,
            passed=outcome.passed,
            elapsed=round(outcome.elapsed, 6),
        )


class ReproReport(BaseModel):
    checks: List[CheckReport]
    passed: int
    failed: int

    @classmethod
    def from_outcomes(cls, outcomes: List[CheckOutcome]) -> ReproReport:
        checks = [CheckReport.from_outcome(outcome) for outcome in outcomes]
        failed = sum(not check.passed for check in checks)
        return cls(checks=checks, passed=len(checks) - failed, failed=failed)

    @property
    def ok(self) -> bool:
        return self.failed == 0
