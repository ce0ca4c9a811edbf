from __future__ import annotations

import argparse
import asyncio
import sys
from pathlib import Path
from typing import Sequence

from loguru import logger
from pydantic import BaseModel

from app.api.dependencies import Components, build_components
from app.api.dto import (
    CounterexampleResponse,
    Ev0Response,
    MemberResponse,
    MinMaxResponse,
    PresentRequest,
    ReproReport,
    SijResponse,
    TraceResponse,
    format_number,
)
from app.api.router import present
from app.service.restricted_service import format_sij
from app.service.schreier_service import b3_case, rb3_case
from pkg.braid.words import format_word
from pkg.config.config import Settings
from pkg.loopdsl import library
from pkg.loopdsl.parser import read_polynomial
from pkg.polycore.numbers import ExactComplex

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rconf", description="Restricted configuration spaces of polynomial roots")
    parser.add_argument("--precision", type=int, help="binary precision of the floating layer")
    parser.add_argument("--seed", type=int, help="seed for the randomized property checks")
    parser.add_argument("--json", action="store_true", help="print JSON instead of text")
    parser.add_argument("--log-level", help="loguru level for stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    trace = commands.add_parser("trace", help="braid word swept by the roots of a loop")
    source = trace.add_mutually_exclusive_group(required=True)
    source.add_argument("--loop", type=Path, help="loop source file")
    source.add_argument("--builtin", choices=library.names())
    trace.add_argument("--max-step", type=float)

    member = commands.add_parser("member", help="membership in C, QC, RC or QF")
    target = member.add_mutually_exclusive_group(required=True)
    target.add_argument("--poly", help="coefficient list [c0, c1, ...] or an expression in X")
    target.add_argument("--points", nargs="+", help="exact complex points for the QF test")

    sij = commands.add_parser("sij", help="print the polynomial S_ij on m points")
    sij.add_argument("m", type=int)
    sij.add_argument("i", type=int)
    sij.add_argument("j", type=int)

    present_ = commands.add_parser("present", help="Reidemeister-Schreier presentation of a finite-index preimage")
    given = present_.add_mutually_exclusive_group(required=True)
    given.add_argument("--input", type=Path, help="JSON presentation with images and optional transversal")
    given.add_argument("--preset", choices=("rb3", "b3"))
    present_.add_argument("--raw", action="store_true", help="skip Tietze elimination")

    realfib = commands.add_parser("realfib", help="real min-max fibration")
    actions = realfib.add_subparsers(dest="action", required=True)
    actions.add_parser("minmax").add_argument("poly")
    actions.add_parser("ev0").add_argument("poly")
    actions.add_parser("counterexample").add_argument("--degree", type=int, default=4)

    reproduce = commands.add_parser("reproduce", help="run the acceptance checks")
    reproduce.add_argument("--only", nargs="+", help="check names to run")
    return parser


def configure(args: argparse.Namespace) -> Settings:
    settings = Settings()
    update = {
        key: value
        for key, value in (("precision_bits", args.precision), ("seed", args.seed), ("log_level", args.log_level))
        if value is not None
    }
    if update:
        settings = settings.model_copy(update=update)
    logger.remove()
    logger.add(sys.stderr, level=settings.log_level)
    return settings


def _emit(model: BaseModel, text: str, as_json: bool) -> None:
    print(model.model_dump_json(indent=2) if as_json else text)


def _preset_request(name: str, simplify: bool) -> PresentRequest:
    if name == "rb3":
        presentation, images, transversal = rb3_case()
    else:
        presentation, images = b3_case()
        transversal = None
    return PresentRequest(
        generators=list(presentation.generators),
        relators=[format_word(relator) for relator in presentation.relators],
        degree=3,
        images={key: [[point + 1 for point in cycle] for cycle in value.cyclic_form] for key, value in images.items()},
        transversal=None if transversal is None else [format_word(word) for word in transversal],
        simplify=simplify,
    )


def run_trace(args: argparse.Namespace, components: Components) -> int:
    text = args.loop.read_text(encoding="utf-8") if args.loop else None
    loop = components.loops.resolve(text=text, builtin=args.builtin)
    response = TraceResponse.from_result(components.tracer.trace(loop, args.max_step))
    _emit(response, f"{' '.join(response.word) or '1'}\npermutation {response.permutation}", args.json)
    return EXIT_OK


def run_member(args: argparse.Namespace, components: Components) -> int:
    if args.points:
        response = MemberResponse.from_qf(components.restricted.in_qf([ExactComplex.parse(text) for text in args.points]))
        text = f"QF: {response.in_qf}" + (f" ({response.witness})" if response.witness else "")
    else:
        response = MemberResponse.from_membership(components.restricted.membership(read_polynomial(args.poly)))
        text = f"C: {response.in_c}  QC: {response.in_qc}  RC: {response.in_rc}"
        if response.witness:
            text += f"  ({response.witness})"
    _emit(response, text, args.json)
    return EXIT_OK


def run_sij(args: argparse.Namespace, components: Components) -> int:
    result = components.restricted.sij_poly(args.m, args.i, args.j)
    response = SijResponse(m=args.m, i=args.i, j=args.j, polynomial=format_sij(result.expression))
    _emit(response, response.polynomial, args.json)
    return EXIT_OK


def run_present(args: argparse.Namespace, components: Components) -> int:
    if args.preset:
        request = _preset_request(args.preset, not args.raw)
    else:
        request = PresentRequest.model_validate_json(args.input.read_text(encoding="utf-8"))
        request.simplify = request.simplify and not args.raw
    response = present(request, components.schreier)
    lines = [f"{name} = {response.definitions[name]}" for name in response.generators]
    lines += [f"relator {relator}" for relator in response.relators]
    _emit(response, "\n".join(lines), args.json)
    return EXIT_OK


def run_realfib(args: argparse.Namespace, components: Components) -> int:
    service = components.realfib
    if args.action == "minmax":
        response = MinMaxResponse.from_data(service.minmax(read_polynomial(args.poly)))
        _emit(response, f"m = {response.m}\nM = {response.M}", args.json)
    elif args.action == "ev0":
        response = Ev0Response(value=format_number(service.ev0(read_polynomial(args.poly))))
        _emit(response, response.value, args.json)
    else:
        q = service.counterexample(args.degree)
        data = service.minmax(q)
        response = CounterexampleResponse(
            degree=args.degree,
            polynomial=str(q),
            m=format_number(data.m),
            M=format_number(data.M),
            gap=float(data.m - data.M),
        )
        _emit(response, f"{response.polynomial}\nm - M = {response.gap}", args.json)
    return EXIT_OK


def run_reproduce(args: argparse.Namespace, components: Components) -> int:
    outcomes = asyncio.run(components.reproduce.run(args.only))
    report = ReproReport.from_outcomes(outcomes)
    lines = [
        f"{'PASS' if check.passed else 'FAIL'}  {check.name:<32} {check.computed}"
        + ("" if check.passed else f"  (expected {check.expected})")
        for check in report.checks
    ]
    lines.append(f"{report.passed} passed, {report.failed} failed")
    _emit(report, "\n".join(lines), args.json)
    return EXIT_OK if report.ok else EXIT_FAILED


COMMANDS = {
    "trace": run_trace,
    "member": run_member,
    "sij": run_sij,
    "present": run_present,
    "realfib": run_realfib,
    "reproduce": run_reproduce,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    settings = configure(args)
    components = build_components(settings)
    try:
        return COMMANDS[args.command](args, components)
    except (ValueError, OSError) as exc:
        logger.error("{command}: {error}", command=args.command, error=str(exc))
        return EXIT_USAGE
    except (RuntimeError, ArithmeticError) as exc:
        logger.exception("{command} failed", command=args.command)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
