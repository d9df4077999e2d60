from __future__ import annotations

import enum

from pydantic import BaseModel, ConfigDict, computed_field


class CitationClass(enum.Enum):
    independent = "independent"
    self_citation = "self"


class RankMetric(enum.Enum):
    u = "u"
    u10 = "u10"
    h = "h"
    i10 = "i10"
    g = "g"
    e = "e"
    citations = "citations"


class CitationBreakdown(BaseModel):
    model_config = ConfigDict(frozen=True)

    cited_id: str
    independent: int = 0
    self_cites: int = 0

    @computed_field  # type: ignore[misc]
    @property
    def total(self) -> int:
        return self.independent + self.self_cites


class ClassifiedCitation(BaseModel):
    """One incoming citation; the matched author pair is set for self-citations."""

    model_config = ConfigDict(frozen=True)

    citing_id: str
    cited_id: str
    citation_class: CitationClass
    cited_author: str | None = None
    citing_author: str | None = None


class PaperScore(BaseModel):
    model_config = ConfigDict(frozen=True)

    paper_id: str
    u: float
    independent: int
    self_cites: int
    author_count: int


class AuthorMetrics(BaseModel):
    model_config = ConfigDict(frozen=True)

    author_key: str
    paper_count: int
    total_citations: int
    independent_citations: int
    self_citations: int
    u_index: float
    u10_index: float
    h_index: int
    i10_index: int
    g_index: int
    e_index: float

    def value_of(self, metric: RankMetric) -> float:
        return {
            RankMetric.u: self.u_index,
            RankMetric.u10: self.u10_index,
            RankMetric.h: self.h_index,
            RankMetric.i10: self.i10_index,
            RankMetric.g: self.g_index,
            RankMetric.e: self.e_index,
            RankMetric.citations: self.total_citations,
        }[metric]


REPORT_COLUMNS: tuple[str, ...] = tuple(AuthorMetrics.model_fields)
REAL_COLUMNS = frozenset({"u_index", "u10_index", "e_index"})
