import logging

from fastapi import FastAPI
from prometheus_client import CONTENT_TYPE_LATEST, generate_latest
from starlette.responses import Response

from app.api.corpus import router as corpus_router
from app.config import settings
from app.errors import register_error_handlers
from app.logging import configure_logging
from app.models.corpus import Corpus
from app.observability import ObservabilityMiddleware
from app.telemetry import setup_otel

logger = logging.getLogger(__name__)


def create_app(corpus: Corpus | None = None) -> FastAPI:
    application = FastAPI(title="u-index corpus API")
    application.state.corpus = corpus
    setup_otel(application)
    application.add_middleware(ObservabilityMiddleware)
    register_error_handlers(application)
    application.include_router(corpus_router)
    application.include_router(corpus_router, prefix="/api/v1")

    @application.get("/health", tags=["health"])
    def health() -> dict:
        return {"status": "ok"}

    @application.get("/metrics", include_in_schema=False)
    def metrics() -> Response:
        return Response(generate_latest(), media_type=CONTENT_TYPE_LATEST)

    return application


configure_logging(settings.log_level)
app = create_app()
