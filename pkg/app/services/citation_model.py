import logging
import unicodedata
from collections import Counter
from collections.abc import Iterable
from functools import lru_cache

from app.errors import CorpusValidationError, RecordNotFoundError, RecordValidationError
from app.models.corpus import Corpus
from app.schemas.citation import (
    AuthorRef,
    CitationEdge,
    CorpusViolation,
    Paper,
    ViolationKind,
)
from app.schemas.corpus import AuthorSummary, CorpusSummary

logger = logging.getLogger(__name__)

ID_PREFIX = "id:"
NAME_PREFIX = "name:"


def strip_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def _fold(text: str) -> str:
    return strip_diacritics(text).lower()


def _split_name(name: str) -> tuple[str, str]:
    """Return (family, given) per the comma / last-token rule."""
    cleaned = " ".join(name.split())
    if "," in cleaned:
        family, _, given = cleaned.partition(",")
        if family.strip():
            return family.strip(), given.strip()
        cleaned = given.strip()
    tokens = cleaned.split(" ")
    return tokens[-1], " ".join(tokens[:-1])


@lru_cache(maxsize=65536)
def _name_key(display_name: str) -> str:
    family, given = _split_name(display_name)
    family = _fold(family).strip(" .")
    initial = next((ch for ch in _fold(given) if ch.isalnum()), "")
    return f"{NAME_PREFIX}{family}/{initial}"


def _require_name(author: AuthorRef, where: str | None = None) -> None:
    if not author.display_name or not author.display_name.strip():
        location = f" ({where})" if where else ""
        raise RecordValidationError(
            f"author has an empty display_name{location}: {author!r}",
            {"location": where, "persistent_id": author.persistent_id},
        )


def name_key(author: AuthorRef) -> str:
    _require_name(author)
    return _name_key(author.display_name)


def normalize_author(author: AuthorRef) -> str:
    _require_name(author)
    if author.persistent_id:
        return f"{ID_PREFIX}{author.persistent_id}"
    return _name_key(author.display_name)


def same_author(a: AuthorRef, b: AuthorRef) -> bool:
    if a.persistent_id and b.persistent_id:
        return a.persistent_id == b.persistent_id
    return name_key(a) == name_key(b)


def author_keys(paper: Paper) -> frozenset[str]:
    return frozenset(normalize_author(a) for a in paper.authors)


class CorpusPapers:
    @staticmethod
    def get(corpus: Corpus, paper_id: str) -> Paper:
        paper = corpus.papers.get(paper_id)
        if paper is None:
            raise RecordNotFoundError(
                f"Unknown paper id {paper_id!r}", {"paper_id": paper_id}
            )
        return paper

    @staticmethod
    def summary(corpus: Corpus) -> CorpusSummary:
        return CorpusSummary(
            paper_count=len(corpus.papers),
            edge_count=len(corpus.edges),
            author_count=len(CorpusAuthors.index(corpus)),
        )


class CorpusAuthors:
    @staticmethod
    def index(corpus: Corpus) -> dict[str, list[Paper]]:
        """Identity key -> the author's papers, in corpus order, each paper once."""
        index: dict[str, list[Paper]] = {}
        for paper in corpus.papers.values():
            for key in author_keys(paper):
                index.setdefault(key, []).append(paper)
        return dict(sorted(index.items()))

    @staticmethod
    def papers(corpus: Corpus, author_key: str) -> list[Paper]:
        papers = [p for p in corpus.papers.values() if author_key in author_keys(p)]
        if not papers:
            known = len(CorpusAuthors.index(corpus))
            raise RecordNotFoundError(
                f"Unknown author key {author_key!r} ({known} known author keys)",
                {"author_key": author_key, "known_keys": known},
            )
        return papers

    @staticmethod
    def summaries(corpus: Corpus) -> list[AuthorSummary]:
        return [
            AuthorSummary(author_key=key, paper_count=len(papers))
            for key, papers in CorpusAuthors.index(corpus).items()
        ]


corpus_papers = CorpusPapers()
corpus_authors = CorpusAuthors()

get_paper = corpus_papers.get
author_index = corpus_authors.index
papers_for_author = corpus_authors.papers


def corpus_validate(corpus: Corpus) -> list[CorpusViolation]:
    violations: list[CorpusViolation] = []

    seen_ids: Counter[str] = Counter()
    for position, paper in enumerate(corpus.paper_records):
        location = f"paper[{position}] id={paper.id!r}"
        seen_ids[paper.id] += 1
        if seen_ids[paper.id] == 2:
            violations.append(
                CorpusViolation(
                    kind=ViolationKind.duplicate_paper,
                    location=location,
                    message=f"paper id {paper.id!r} appears more than once",
                )
            )
        if not paper.authors:
            violations.append(
                CorpusViolation(
                    kind=ViolationKind.empty_author_list,
                    location=location,
                    message="paper has no authors",
                )
            )
        for slot, author in enumerate(paper.authors):
            if not author.display_name.strip():
                violations.append(
                    CorpusViolation(
                        kind=ViolationKind.empty_author_name,
                        location=f"{location} author[{slot}]",
                        message="author display_name is empty",
                    )
                )

    seen_edges: Counter[CitationEdge] = Counter()
    for position, edge in enumerate(corpus.edge_records):
        location = f"edge[{position}] {edge.citing_id}->{edge.cited_id}"
        seen_edges[edge] += 1
        if seen_edges[edge] == 2:
            violations.append(
                CorpusViolation(
                    kind=ViolationKind.duplicate_edge,
                    location=location,
                    message="citation pair repeated",
                )
            )
        if edge.citing_id == edge.cited_id:
            violations.append(
                CorpusViolation(
                    kind=ViolationKind.self_edge,
                    location=location,
                    message=f"paper {edge.citing_id!r} cites itself",
                )
            )
        for endpoint in dict.fromkeys((edge.citing_id, edge.cited_id)):
            if endpoint not in corpus.papers:
                violations.append(
                    CorpusViolation(
                        kind=ViolationKind.dangling_endpoint,
                        location=location,
                        message=f"endpoint {endpoint!r} is not a paper in the corpus",
                    )
                )
    return violations


def build_corpus(
    papers: Iterable[Paper], edges: Iterable[CitationEdge] = ()
) -> Corpus:
    """Construct a corpus and fail if any invariant is broken."""
    corpus = Corpus(papers, edges)
    violations = corpus_validate(corpus)
    if violations:
        raise CorpusValidationError(violations)
    logger.debug(
        "Built corpus with %d papers and %d edges",
        len(corpus.papers),
        len(corpus.edges),
    )
    return corpus
