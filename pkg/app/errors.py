from typing import Any

from fastapi import HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse


class UIndexError(Exception):
    code = "uindex_error"

    def __init__(self, message: str, details: Any = None):
        super().__init__(message)
        self.message = message
        self.details = details


class RecordValidationError(UIndexError, ValueError):
    """A record breaks a type invariant (empty name, self-edge, duplicate id)."""

    code = "record_invalid"


class ParseError(UIndexError):
    code = "parse_error"

    def __init__(self, source: str, line: int, reason: str):
        super().__init__(
            f"{source}:{line}: {reason}",
            {"source": source, "line": line, "reason": reason},
        )
        self.source = source
        self.line = line
        self.reason = reason


class IngestError(UIndexError):
    """Every error collected by a lenient parse."""

    code = "ingest_failed"

    def __init__(self, errors: list[UIndexError]):
        summary = "; ".join(err.message for err in errors[:5])
        if len(errors) > 5:
            summary += f"; ... {len(errors) - 5} more"
        super().__init__(
            f"{len(errors)} ingest error(s): {summary}",
            [err.message for err in errors],
        )
        self.errors = errors


class CorpusFileError(UIndexError):
    code = "corpus_file_error"


class CorpusValidationError(UIndexError):
    code = "corpus_invalid"

    def __init__(self, violations: list):
        lines = [str(v) for v in violations]
        super().__init__(
            f"corpus has {len(violations)} violation(s): " + "; ".join(lines[:5]),
            lines,
        )
        self.violations = violations


class RecordNotFoundError(UIndexError, LookupError):
    code = "not_found"


class MetricDomainError(UIndexError, ValueError):
    code = "metric_domain_error"


class HarvestError(UIndexError):
    code = "harvest_error"


class FetchError(HarvestError):
    code = "fetch_failed"

    def __init__(
        self, url: str, attempts: int, reason: str, status_code: int | None = None
    ):
        super().__init__(
            f"GET {url} failed after {attempts} attempt(s): {reason}",
            {"url": url, "attempts": attempts, "status_code": status_code},
        )
        self.url = url
        self.attempts = attempts
        self.status_code = status_code


class DecodeError(HarvestError):
    code = "decode_failed"

    def __init__(self, request_key: str, reason: str):
        super().__init__(
            f"undecodable response {request_key}: {reason}",
            {"request_key": request_key},
        )
        self.request_key = request_key


class AuthorNotFoundError(HarvestError, LookupError):
    code = "author_not_found"


class ReportWriteError(UIndexError):
    code = "report_write_failed"


_STATUS_BY_ERROR: list[tuple[type[UIndexError], int]] = [
    (RecordNotFoundError, 404),
    (AuthorNotFoundError, 404),
    (MetricDomainError, 400),
    (RecordValidationError, 422),
    (CorpusValidationError, 422),
    (HarvestError, 502),
]


def _error_payload(code: str, message: str, details):
    return {"code": code, "message": message, "details": details}


def status_for(exc: UIndexError) -> int:
    for error_type, status_code in _STATUS_BY_ERROR:
        if isinstance(exc, error_type):
            return status_code
    return 500


def register_error_handlers(app) -> None:
    @app.exception_handler(UIndexError)
    async def domain_exception_handler(request: Request, exc: UIndexError):
        return JSONResponse(
            status_code=status_for(exc),
            content=_error_payload(exc.code, exc.message, exc.details),
        )

    @app.exception_handler(HTTPException)
    async def http_exception_handler(request: Request, exc: HTTPException):
        detail = exc.detail
        code = f"http_{exc.status_code}"
        message = "Request failed"
        details = None
        if isinstance(detail, dict):
            code = detail.get("code", code)
            message = detail.get("message", message)
            details = detail.get("details")
        elif isinstance(detail, str):
            message = detail
        else:
            details = detail
        return JSONResponse(
            status_code=exc.status_code,
            content=_error_payload(code, message, details),
        )

    @app.exception_handler(RequestValidationError)
    async def validation_exception_handler(
        request: Request, exc: RequestValidationError
    ):
        # ctx may hold raw exception objects that json cannot encode.
        errors = [
            {k: (str(v) if k == "ctx" else v) for k, v in err.items() if k != "url"}
            for err in exc.errors()
        ]
        return JSONResponse(
            status_code=422,
            content=_error_payload("validation_error", "Validation error", errors),
        )

    @app.exception_handler(Exception)
    async def unhandled_exception_handler(request: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content=_error_payload("internal_error", "Internal server error", None),
        )
