from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from pkg.braid.artin import BraidWord
from pkg.braid.words import Word
from pkg.polycore.numbers import ExactComplex
from pkg.polycore.poly import Poly


class Bound(str, Enum):
    INFINITY = "+inf"


@dataclass(slots=True)
class ATable:
    n: int
    # A_0 ... A_{n-3} as sympy expressions in (b_i, b_j).
    entries: list[Any]


@dataclass(slots=True)
class SijPoly:
    m: int
    i: int
    j: int
    expression: Any


@dataclass(slots=True)
class QfVerdict:
    in_qf: bool
    witness: str | None = None


@dataclass(slots=True)
class MembershipVerdict:
    in_c: bool
    in_qc: bool
    in_rc: bool
    exact: bool
    witness: str | None = None
    cubic_gap: ExactComplex | None = None


@dataclass(slots=True)
class NeighborhoodRadii:
    delta1: Any
    delta2: Any
    delta3: Any
    delta: Any
    epsilon: Any
    radius: Any


@dataclass(slots=True)
class Trivialization:
    polynomial: Poly
    radii: NeighborhoodRadii
    shifted_constant: Any


@dataclass(slots=True)
class ResolventResult:
    values: tuple[ExactComplex, ExactComplex, ExactComplex]
    quartic_discriminant: ExactComplex
    resolvent_discriminant: ExactComplex


@dataclass(slots=True)
class LoopValidationReport:
    name: str | None
    valid: bool
    closing_gap: float
    samples: int
    min_discriminant: float
    min_separation: float
    min_sij: float | None = None
    basepoint_ok: bool | None = None
    basepoint: str | None = None
    failures: list[str] = field(default_factory=list)


@dataclass(slots=True)
class StrandPath:
    times: list[Any]
    # positions[k] is the track of the strand that starts at position k.
    positions: list[list[Any]]
    matching: tuple[int, ...]


@dataclass(slots=True)
class CrossingEvent:
    t: Any
    strands: tuple[int, int]
    sign: int
    im_gap: float


@dataclass(slots=True)
class TraceResult:
    word: BraidWord
    permutation: tuple[int, ...]
    min_separation_seen: float
    steps: int
    precision: int
    crossings: list[CrossingEvent] = field(default_factory=list)
    path: StrandPath | None = None


@dataclass(slots=True)
class HomotopyCheck:
    grid: int
    max_deviation: float
    max_boundary_deviation: float


@dataclass(slots=True)
class LineClearance:
    loop: str
    lines: tuple[int, ...]
    min_distance: float


@dataclass(slots=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]


@dataclass(slots=True)
class FiniteQuotient:
    degree: int
    # Generator name -> image permutation (sympy Permutation).
    images: dict[str, Any]


@dataclass(slots=True)
class Transversal:
    # Coset element (sympy Permutation) -> representative word, in discovery order.
    representatives: dict[Any, Word]


@dataclass(slots=True)
class SubgroupPresentation:
    presentation: Presentation
    # Schreier generator name -> the ambient word r x rep(rx)^-1 it stands for.
    definitions: dict[str, Word]


@dataclass(slots=True)
class TietzeResult:
    presentation: Presentation
    eliminated: list[tuple[str, Word]]
    partial: bool = False


@dataclass(slots=True)
class RealFiberData:
    m: Any
    M: Any
    critical_values: list[Any]
    roots: list[Any]


@dataclass(slots=True)
class CheckOutcome:
    name: str
    anchor: str
    expected: str
    computed: str
    passed: bool
    elapsed: float
