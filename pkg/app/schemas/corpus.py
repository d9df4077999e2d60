from pydantic import BaseModel

from app.schemas.metrics import CitationBreakdown


class AuthorSummary(BaseModel):
    author_key: str
    paper_count: int


class PaperBreakdownRead(BaseModel):
    paper_id: str
    title: str
    year: int | None = None
    author_count: int
    breakdown: CitationBreakdown
    u: float


class CorpusSummary(BaseModel):
    paper_count: int
    edge_count: int
    author_count: int
