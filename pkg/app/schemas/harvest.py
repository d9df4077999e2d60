from __future__ import annotations

from datetime import datetime
from pathlib import Path
from urllib.parse import urlparse

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.config import settings


class HarvestConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    base_url: str = settings.openalex_base_url
    author_id: str = Field(min_length=1)
    max_works: int = Field(default=settings.harvest_max_works, ge=1)
    rate_limit: float = Field(default=settings.harvest_rate_limit, gt=0)
    cache_dir: Path = Path(settings.harvest_cache_dir)
    timeout: float = Field(default=settings.harvest_timeout, gt=0)
    concurrency: int = Field(default=settings.harvest_concurrency, ge=1)
    mailto: str | None = settings.harvest_mailto
    retry_backoff: float = Field(default=0.5, ge=0)

    @field_validator("base_url")
    @classmethod
    def validate_base_url(cls, value: str) -> str:
        parsed = urlparse(value)
        if parsed.scheme not in {"http", "https"} or not parsed.netloc:
            raise ValueError("base_url must be an absolute http(s) URL")
        return value.rstrip("/")


class CachedResponse(BaseModel):
    model_config = ConfigDict(frozen=True)

    request_key: str
    url: str
    body: bytes
    fetched_at: datetime


# ---------------------------------------------------------------------------
# OpenAlex response shapes (only the fields the harvester reads)
# ---------------------------------------------------------------------------


class OpenAlexAuthorRef(BaseModel):
    id: str | None = None
    display_name: str | None = None
    orcid: str | None = None


class OpenAlexAuthorship(BaseModel):
    author: OpenAlexAuthorRef | None = None
    raw_author_name: str | None = None


class OpenAlexWork(BaseModel):
    id: str
    display_name: str | None = None
    title: str | None = None
    publication_year: int | None = None
    cited_by_count: int | None = None
    authorships: list[OpenAlexAuthorship] = Field(default_factory=list)


class OpenAlexMeta(BaseModel):
    count: int | None = None
    next_cursor: str | None = None


class OpenAlexPage(BaseModel):
    meta: OpenAlexMeta = Field(default_factory=OpenAlexMeta)
    results: list[OpenAlexWork]


class OpenAlexAuthor(BaseModel):
    id: str
    display_name: str | None = None
