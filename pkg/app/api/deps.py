from functools import lru_cache

from fastapi import HTTPException, Request

from app.config import settings
from app.models.corpus import Corpus
from app.services.ingest import load_corpus


@lru_cache(maxsize=1)
def _configured_corpus() -> Corpus:
    return load_corpus(settings.corpus_papers_path, settings.corpus_citations_path)


def get_corpus(request: Request) -> Corpus:
    corpus = getattr(request.app.state, "corpus", None)
    if corpus is not None:
        return corpus
    if not settings.corpus_papers_path or not settings.corpus_citations_path:
        raise HTTPException(
            status_code=503,
            detail="Corpus not configured. Set CORPUS_PAPERS_PATH and CORPUS_CITATIONS_PATH.",
        )
    return _configured_corpus()
