from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from app.service.loop_service import LoopService
from app.service.realfib_service import RealFiberService
from app.service.reproduce_service import ReproduceService
from app.service.restricted_service import RestrictedService
from app.service.schreier_service import SchreierService
from app.service.tracer_service import TracerService
from pkg.config.config import Settings


@dataclass(slots=True)
class Components:
    settings: Settings
    restricted: RestrictedService
    loops: LoopService
    tracer: TracerService
    schreier: SchreierService
    realfib: RealFiberService
    reproduce: ReproduceService


def build_components(settings: Settings) -> Components:
    restricted = RestrictedService(settings)
    loops = LoopService(restricted, settings)
    tracer = TracerService(settings)
    schreier = SchreierService()
    realfib = RealFiberService(settings)
    reproduce = ReproduceService(restricted, loops, tracer, schreier, realfib, settings)
    return Components(settings, restricted, loops, tracer, schreier, realfib, reproduce)


_components: Optional[Components] = None


def set_components(components: Components) -> None:
    global _components
    _components = components


def get_components() -> Components:
    if _components is None:
        raise RuntimeError("Components not initialised")
    return _components


def get_restricted_service() -> RestrictedService:
    return get_components().restricted


def get_loop_service() -> LoopService:
    return get_components().loops


def get_tracer_service() -> TracerService:
    return get_components().tracer


def get_schreier_service() -> SchreierService:
    return get_components().schreier


def get_realfib_service() -> RealFiberService:
    return get_components().realfib
