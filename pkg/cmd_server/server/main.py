from __future__ import annotations

from fastapi import FastAPI
from loguru import logger

from app.api.dependencies import build_components, set_components
from app.api.router import router
from pkg.config.config import Settings


def create_app(settings: Settings) -> FastAPI:
    set_components(build_components(settings))
    app = FastAPI(title=settings.app_name)
    app.include_router(router)
    logger.info("Serving {name} at {bits} bits", name=settings.app_name, bits=settings.precision_bits)
    return app


settings = Settings()
app = create_app(settings)


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="localhost", port=8000)
