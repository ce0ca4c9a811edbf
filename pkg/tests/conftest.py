from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from app.api.dependencies import Components, build_components
from cmd_server.server.main import create_app
from pkg.config.config import Settings


@pytest.fixture(scope="session")
def settings() -> Settings:
    return Settings(_env_file=None)


@pytest.fixture(scope="session")
def components(settings: Settings) -> Components:
    return build_components(settings)


@pytest.fixture(scope="session")
def restricted(components: Components):
    return components.restricted


@pytest.fixture(scope="session")
def loops(components: Components):
    return components.loops


@pytest.fixture(scope="session")
def tracer(components: Components):
    return components.tracer


@pytest.fixture(scope="session")
def schreier(components: Components):
    return components.schreier


@pytest.fixture(scope="session")
def realfib(components: Components):
    return components.realfib


@pytest.fixture(scope="session")
def reproduce(components: Components):
    return components.reproduce


@pytest.fixture
def client(settings: Settings) -> TestClient:
    return TestClient(create_app(settings))
