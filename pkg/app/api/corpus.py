from fastapi import APIRouter, Depends, Query

from app.api.deps import get_corpus
from app.models.corpus import Corpus
from app.schemas.common import Page, page_of
from app.schemas.corpus import AuthorSummary, CorpusSummary, PaperBreakdownRead
from app.schemas.metrics import AuthorMetrics, ClassifiedCitation, RankMetric
from app.services import citation_model as citation_service
from app.services import metrics as metrics_service
from app.services import selfcite as selfcite_service

router = APIRouter(tags=["corpus"])


@router.get("/corpus", response_model=CorpusSummary)
def corpus_summary(corpus: Corpus = Depends(get_corpus)):
    return citation_service.corpus_papers.summary(corpus)


@router.get("/authors", response_model=Page[AuthorSummary])
def list_authors(
    limit: int = Query(default=50, ge=1, le=500),
    offset: int = Query(default=0, ge=0),
    corpus: Corpus = Depends(get_corpus),
):
    items = citation_service.corpus_authors.summaries(corpus)
    return page_of(items, limit, offset)


@router.get("/authors/{author_key:path}/metrics", response_model=AuthorMetrics)
def get_author_metrics(author_key: str, corpus: Corpus = Depends(get_corpus)):
    return metrics_service.scorecards.author(corpus, author_key)


@router.get("/authors/{author_key:path}/papers", response_model=list[str])
def get_author_papers(author_key: str, corpus: Corpus = Depends(get_corpus)):
    return [p.id for p in citation_service.corpus_authors.papers(corpus, author_key)]


@router.get("/papers/{paper_id}/breakdown", response_model=PaperBreakdownRead)
def get_paper_breakdown(paper_id: str, corpus: Corpus = Depends(get_corpus)):
    paper = citation_service.corpus_papers.get(corpus, paper_id)
    counts = selfcite_service.self_citations.breakdown(corpus, paper_id)
    return PaperBreakdownRead(
        paper_id=paper.id,
        title=paper.title,
        year=paper.year,
        author_count=paper.author_count,
        breakdown=counts,
        u=metrics_service.score_paper(paper, counts).u,
    )


@router.get("/papers/{paper_id}/citations", response_model=list[ClassifiedCitation])
def get_paper_citations(paper_id: str, corpus: Corpus = Depends(get_corpus)):
    return selfcite_service.self_citations.incoming(corpus, paper_id)


@router.get("/rank", response_model=Page[AuthorMetrics])
def rank(
    metric: RankMetric = RankMetric.u,
    limit: int = Query(default=25, ge=1, le=500),
    offset: int = Query(default=0, ge=0),
    corpus: Corpus = Depends(get_corpus),
):
    ranked = metrics_service.scorecards.rank(corpus, metric)
    return page_of(ranked, limit, offset)
