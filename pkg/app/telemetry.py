"""OpenTelemetry wiring shared by the HTTP API and the harvester.

Tracing stays off unless ``OTEL_ENABLED`` is set; spans then go to the OTLP
endpoint from ``OTEL_EXPORTER_OTLP_ENDPOINT`` (or the exporter default).
"""

import logging
import os
import threading

from opentelemetry import trace

logger = logging.getLogger(__name__)

_lock = threading.Lock()
_configured = False


def otel_enabled() -> bool:
    return os.getenv("OTEL_ENABLED", "false").lower() in {"1", "true", "yes", "on"}


def configure_tracing() -> bool:
    """Install the OTLP tracer provider once. Returns whether tracing is on."""
    global _configured
    if not otel_enabled():
        return False
    with _lock:
        if _configured:
            return True
        try:
            from opentelemetry.exporter.otlp.proto.http.trace_exporter import (
                OTLPSpanExporter,
            )
            from opentelemetry.sdk.resources import Resource
            from opentelemetry.sdk.trace import TracerProvider
            from opentelemetry.sdk.trace.export import BatchSpanProcessor
        except ImportError:
            logger.exception("OpenTelemetry dependencies not available.")
            return False

        service_name = os.getenv("OTEL_SERVICE_NAME", "uindex")
        endpoint = os.getenv("OTEL_EXPORTER_OTLP_ENDPOINT")
        provider = TracerProvider(resource=Resource.create({"service.name": service_name}))
        exporter = OTLPSpanExporter(endpoint=endpoint) if endpoint else OTLPSpanExporter()
        provider.add_span_processor(BatchSpanProcessor(exporter))
        trace.set_tracer_provider(provider)
        _configured = True
        logger.info("OpenTelemetry tracing enabled for %s", service_name)
        return True


def setup_otel(app) -> None:
    if not configure_tracing():
        return
    from opentelemetry.instrumentation.fastapi import FastAPIInstrumentor

    FastAPIInstrumentor.instrument_app(app)


def get_tracer() -> trace.Tracer:
    # A proxy tracer: spans become real once configure_tracing has run.
    return trace.get_tracer("uindex")
