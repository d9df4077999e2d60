"""Per-paper and per-author impact indicators.

The u-index of a paper is ``(I + S/2) / sqrt(N)`` with I independent
citations, S self-citations and N authors; an author's u-index is the sum
over their papers. h, i10, g and e are computed on total citation counts
(I + S) so they stay comparable with the usual published figures.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from decimal import ROUND_HALF_UP, Decimal

from app.errors import MetricDomainError
from app.models.corpus import Corpus
from app.schemas.citation import Paper
from app.schemas.metrics import AuthorMetrics, CitationBreakdown, PaperScore, RankMetric
from app.services.citation_model import author_index, get_paper, papers_for_author
from app.services.selfcite import breakdown

logger = logging.getLogger(__name__)

U10_PAPERS = 10
I10_THRESHOLD = 10
_ONE_DECIMAL = Decimal("0.1")


def _require_count(name: str, value: int, minimum: int = 0) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MetricDomainError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise MetricDomainError(f"{name} must be >= {minimum}, got {value}")


def _sorted_counts(citation_counts: Iterable[int]) -> list[int]:
    counts = list(citation_counts)
    for value in counts:
        _require_count("citation count", value)
    return sorted(counts, reverse=True)


def display_round(value: float) -> Decimal:
    """Half-up rounding to one decimal, applied only when presenting values."""
    return Decimal(repr(float(value))).quantize(_ONE_DECIMAL, rounding=ROUND_HALF_UP)


def format_real(value: float) -> str:
    return str(display_round(value))


# ---------------------------------------------------------------------------
# Per-paper u-index
# ---------------------------------------------------------------------------


def paper_u(independent: int, self_cites: int, authors: int) -> float:
    _require_count("I", independent)
    _require_count("S", self_cites)
    _require_count("N", authors, minimum=1)
    return (independent + self_cites / 2) / math.sqrt(authors)


def score_paper(paper: Paper, counts: CitationBreakdown) -> PaperScore:
    return PaperScore(
        paper_id=paper.id,
        u=paper_u(counts.independent, counts.self_cites, paper.author_count),
        independent=counts.independent,
        self_cites=counts.self_cites,
        author_count=paper.author_count,
    )


# ---------------------------------------------------------------------------
# Baseline indicators
# ---------------------------------------------------------------------------


def h_index(citation_counts: Iterable[int]) -> int:
    counts = _sorted_counts(citation_counts)
    return sum(1 for rank, count in enumerate(counts, start=1) if count >= rank)


def i10_index(citation_counts: Iterable[int]) -> int:
    counts = _sorted_counts(citation_counts)
    return sum(1 for count in counts if count >= I10_THRESHOLD)


def g_index(citation_counts: Iterable[int]) -> int:
    # Capped at the number of papers: no fictitious zero-cited papers.
    counts = _sorted_counts(citation_counts)
    g = 0
    running = 0
    for rank, count in enumerate(counts, start=1):
        running += count
        if running >= rank * rank:
            g = rank
    return g


def e_index(citation_counts: Iterable[int]) -> float:
    counts = _sorted_counts(citation_counts)
    h = h_index(counts)
    if h == 0:
        return 0.0
    return math.sqrt(sum(counts[:h]) - h * h)


# ---------------------------------------------------------------------------
# Author level
# ---------------------------------------------------------------------------


def _scores(corpus: Corpus, papers: Sequence[Paper]) -> list[PaperScore]:
    return [score_paper(p, breakdown(corpus, p.id)) for p in papers]


def _top_by_citations(scores: Iterable[PaperScore], k: int) -> list[PaperScore]:
    ranked = sorted(
        scores,
        key=lambda s: (-(s.independent + s.self_cites), -s.independent, s.paper_id),
    )
    return ranked[:k]


def _scorecard(author_key: str, scores: list[PaperScore]) -> AuthorMetrics:
    totals = [s.independent + s.self_cites for s in scores]
    return AuthorMetrics(
        author_key=author_key,
        paper_count=len(scores),
        total_citations=sum(totals),
        independent_citations=sum(s.independent for s in scores),
        self_citations=sum(s.self_cites for s in scores),
        u_index=math.fsum(s.u for s in scores),
        u10_index=math.fsum(s.u for s in _top_by_citations(scores, U10_PAPERS)),
        h_index=h_index(totals),
        i10_index=i10_index(totals),
        g_index=g_index(totals),
        e_index=e_index(totals),
    )


def sort_by_metric(
    rows: Iterable[AuthorMetrics], metric: RankMetric = RankMetric.u
) -> list[AuthorMetrics]:
    return sorted(rows, key=lambda r: (-r.value_of(metric), r.author_key))


class Scorecards:
    @staticmethod
    def paper(corpus: Corpus, paper_id: str) -> PaperScore:
        paper = get_paper(corpus, paper_id)
        return score_paper(paper, breakdown(corpus, paper_id))

    @staticmethod
    def u(corpus: Corpus, author_key: str) -> float:
        scores = _scores(corpus, papers_for_author(corpus, author_key))
        return math.fsum(s.u for s in scores)

    @staticmethod
    def u_top(corpus: Corpus, author_key: str, k: int) -> float:
        """Sum of paper u over the author's k most cited papers."""
        _require_count("k", k, minimum=1)
        scores = _scores(corpus, papers_for_author(corpus, author_key))
        return math.fsum(s.u for s in _top_by_citations(scores, k))

    @staticmethod
    def u10(corpus: Corpus, author_key: str) -> float:
        return Scorecards.u_top(corpus, author_key, U10_PAPERS)

    @staticmethod
    def author(corpus: Corpus, author_key: str) -> AuthorMetrics:
        scores = _scores(corpus, papers_for_author(corpus, author_key))
        return _scorecard(author_key, scores)

    @staticmethod
    def all(
        corpus: Corpus, author_keys: Iterable[str] | None = None
    ) -> list[AuthorMetrics]:
        """Scorecards for the given authors (default: every author in the corpus)."""
        index = author_index(corpus)
        keys = list(dict.fromkeys(author_keys)) if author_keys is not None else list(index)
        counts = {p.id: breakdown(corpus, p.id) for p in corpus.papers.values()}
        results = []
        for key in keys:
            if key not in index:
                papers_for_author(corpus, key)  # raises with the known-keys count
            scores = [score_paper(p, counts[p.id]) for p in index[key]]
            results.append(_scorecard(key, scores))
        logger.info("Computed scorecards", extra={"count": len(results)})
        return results

    @staticmethod
    def rank(
        corpus: Corpus,
        metric: RankMetric = RankMetric.u,
        author_keys: Iterable[str] | None = None,
    ) -> list[AuthorMetrics]:
        return sort_by_metric(Scorecards.all(corpus, author_keys), metric)


scorecards = Scorecards()

paper_score = scorecards.paper
author_u = scorecards.u
author_u_top = scorecards.u_top
author_u10 = scorecards.u10
author_metrics = scorecards.author
all_author_metrics = scorecards.all
rank_authors = scorecards.rank
