from __future__ import annotations

import asyncio
from contextlib import contextmanager
from typing import Iterator

from fastapi import APIRouter, Depends, HTTPException, Query, status
from loguru import logger

from app.api.dependencies import (
    Components,
    get_components,
    get_loop_service,
    get_realfib_service,
    get_restricted_service,
    get_schreier_service,
    get_tracer_service,
)
from app.api.dto import (
    BuiltinsResponse,
    CounterexampleRequest,
    CounterexampleResponse,
    Ev0Response,
    HealthResponse,
    MemberRequest,
    MemberResponse,
    MinMaxResponse,
    PolynomialRequest,
    PresentRequest,
    PresentResponse,
    SijResponse,
    TraceRequest,
    TraceResponse,
    format_number,
)
from app.entities.entity import Presentation
from app.service.loop_service import LoopService
from app.service.realfib_service import RealFiberService
from app.service.restricted_service import RestrictedService, format_sij
from app.service.schreier_service import SchreierService, cycles_to_permutation
from app.service.tracer_service import TracerService
from pkg.braid.words import parse_word
from pkg.loopdsl import library
from pkg.loopdsl.parser import read_polynomial
from pkg.polycore.numbers import ExactComplex

router = APIRouter(prefix="/api", tags=["restricted"])


@contextmanager
def _http_errors() -> Iterator[None]:
    try:
        yield
    except ValueError as exc:
        logger.warning("Rejected request: {error}", error=str(exc))
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc)) from exc
    except (RuntimeError, ArithmeticError) as exc:
        logger.warning("Computation failed: {error}", error=str(exc))
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc)) from exc


def present(payload: PresentRequest, service: SchreierService) -> PresentResponse:
    presentation = Presentation(tuple(payload.generators), tuple(parse_word(text) for text in payload.relators))
    images = {name: cycles_to_permutation(cycles, payload.degree) for name, cycles in payload.images.items()}
    quotient = service.quotient(presentation, images, payload.degree)
    representatives = None if payload.transversal is None else [parse_word(text) for text in payload.transversal]
    transversal = service.schreier_transversal(presentation, quotient, representatives)
    raw = service.subgroup_presentation(presentation, quotient, transversal)
    simplified = service.tietze_simplify(raw.presentation) if payload.simplify else None
    return PresentResponse.from_result(raw, simplified)


@router.get("/health")
async def health(components: Components = Depends(get_components)) -> HealthResponse:
    return HealthResponse(app_name=components.settings.app_name)


@router.get("/builtins")
async def builtins() -> BuiltinsResponse:
    return BuiltinsResponse(names=library.names())


@router.post("/member")
async def member(
    payload: MemberRequest,
    service: RestrictedService = Depends(get_restricted_service),
) -> MemberResponse:
    with _http_errors():
        if payload.points is not None:
            points = [ExactComplex.parse(text) for text in payload.points]
            return MemberResponse.from_qf(service.in_qf(points))
        verdict = await asyncio.to_thread(service.membership, read_polynomial(payload.polynomial))
        return MemberResponse.from_membership(verdict)


@router.get("/sij")
async def sij(
    m: int = Query(..., ge=3),
    i: int = Query(..., ge=1),
    j: int = Query(..., ge=1),
    service: RestrictedService = Depends(get_restricted_service),
) -> SijResponse:
    with _http_errors():
        result = service.sij_poly(m, i, j)
        return SijResponse(m=m, i=i, j=j, polynomial=format_sij(result.expression))


@router.post("/trace")
async def trace(
    payload: TraceRequest,
    loops: LoopService = Depends(get_loop_service),
    tracer: TracerService = Depends(get_tracer_service),
) -> TraceResponse:
    with _http_errors():
        loop = loops.resolve(text=payload.loop, builtin=payload.builtin)
        result = await asyncio.to_thread(tracer.trace, loop, payload.max_step)
        return TraceResponse.from_result(result)


@router.post("/present")
async def present_subgroup(
    payload: PresentRequest,
    service: SchreierService = Depends(get_schreier_service),
) -> PresentResponse:
    with _http_errors():
        return await asyncio.to_thread(present, payload, service)


@router.post("/realfib/minmax")
async def realfib_minmax(
    payload: PolynomialRequest,
    service: RealFiberService = Depends(get_realfib_service),
) -> MinMaxResponse:
    with _http_errors():
        return MinMaxResponse.from_data(service.minmax(read_polynomial(payload.polynomial)))


@router.post("/realfib/ev0")
async def realfib_ev0(
    payload: PolynomialRequest,
    service: RealFiberService = Depends(get_realfib_service),
) -> Ev0Response:
    with _http_errors():
        return Ev0Response(value=format_number(service.ev0(read_polynomial(payload.polynomial))))


@router.post("/realfib/counterexample")
async def realfib_counterexample(
    payload: CounterexampleRequest,
    service: RealFiberService = Depends(get_realfib_service),
) -> CounterexampleResponse:
    with _http_errors():
        q = await asyncio.to_thread(service.counterexample, payload.degree)
        data = service.minmax(q)
        return CounterexampleResponse(
            degree=payload.degree,
            polynomial=str(q),
            m=format_number(data.m),
            M=format_number(data.M),
            gap=float(data.m - data.M),
        )
