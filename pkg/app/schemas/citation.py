from __future__ import annotations

import enum
from typing import Annotated

from pydantic import BaseModel, ConfigDict, Field, StringConstraints

# Surrounding whitespace is never part of a paper id.
PaperId = Annotated[str, StringConstraints(strip_whitespace=True, min_length=1)]


class AuthorRef(BaseModel):
    model_config = ConfigDict(frozen=True)

    display_name: str
    persistent_id: str | None = None

    @property
    def identity_key(self) -> str:
        from app.services.citation_model import normalize_author

        return normalize_author(self)


class Paper(BaseModel):
    """A publication record; N in the u-index is ``len(authors)``."""

    model_config = ConfigDict(frozen=True)

    id: PaperId
    title: str = ""
    year: int | None = None
    authors: tuple[AuthorRef, ...] = Field(default_factory=tuple)

    @property
    def author_count(self) -> int:
        return len(self.authors)


class CitationEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    citing_id: PaperId
    cited_id: PaperId


# ---------------------------------------------------------------------------
# File records (one JSON object per line in a papers file)
# ---------------------------------------------------------------------------


class AuthorRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    pid: str | None = None


class PaperRecord(BaseModel):
    model_config = ConfigDict(extra="ignore")

    id: PaperId
    title: str = ""
    year: int | None = None
    authors: list[AuthorRecord]


# ---------------------------------------------------------------------------
# Corpus violations
# ---------------------------------------------------------------------------


class ViolationKind(enum.Enum):
    dangling_endpoint = "dangling_endpoint"
    duplicate_paper = "duplicate_paper"
    duplicate_edge = "duplicate_edge"
    self_edge = "self_edge"
    empty_author_list = "empty_author_list"
    empty_author_name = "empty_author_name"


class CorpusViolation(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: ViolationKind
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind.value} at {self.location}: {self.message}"
