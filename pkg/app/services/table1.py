"""Bundled synthetic corpus reproducing the six reference u-index examples.

Every target paper lists the same subject author first, plus row-specific
co-authors up to N. Independent citations come from single-author papers by
outsiders; self-citations come from papers co-written by the target's last
listed author (the subject when N = 1) and an outsider.
"""

from dataclasses import dataclass

from app.models.corpus import Corpus
from app.schemas.citation import AuthorRef, CitationEdge, Paper
from app.schemas.metrics import PaperScore
from app.services.citation_model import build_corpus
from app.services.metrics import paper_score

SUBJECT = AuthorRef(display_name="Subject, Sample", persistent_id="T1-SUBJECT")
SUBJECT_KEY = f"id:{SUBJECT.persistent_id}"


@dataclass(frozen=True)
class Table1Row:
    row: int
    independent: int
    self_cites: int
    authors: int
    expected_u: str

    @property
    def total(self) -> int:
        return self.independent + self.self_cites

    @property
    def paper_id(self) -> str:
        return f"t1-row{self.row}"


TABLE1_ROWS: tuple[Table1Row, ...] = (
    Table1Row(1, 95, 5, 1, "97.5"),
    Table1Row(2, 95, 5, 3, "56.3"),
    Table1Row(3, 80, 20, 10, "28.5"),
    Table1Row(4, 8, 2, 2, "6.4"),
    Table1Row(5, 2, 8, 2, "4.2"),
    Table1Row(6, 10, 490, 20, "57.0"),
)


def _outsider(row: int, kind: str, n: int) -> AuthorRef:
    return AuthorRef(
        display_name=f"Outsider{kind}{row}x{n}, Reader",
        persistent_id=f"T1-R{row}-{kind}{n}",
    )


def table1_papers_and_edges() -> tuple[list[Paper], list[CitationEdge]]:
    targets: list[Paper] = []
    citing: list[Paper] = []
    edges: list[CitationEdge] = []
    for example in TABLE1_ROWS:
        coauthors = tuple(
            AuthorRef(
                display_name=f"Coauthor{example.row}x{n}, Team",
                persistent_id=f"T1-R{example.row}-C{n}",
            )
            for n in range(1, example.authors)
        )
        target = Paper(
            id=example.paper_id,
            title=f"Reference example {example.row}",
            year=2023,
            authors=(SUBJECT, *coauthors),
        )
        targets.append(target)
        for n in range(1, example.independent + 1):
            paper = Paper(
                id=f"{example.paper_id}-i{n:03d}",
                title=f"Independent citation {n} of example {example.row}",
                year=2024,
                authors=(_outsider(example.row, "I", n),),
            )
            citing.append(paper)
            edges.append(CitationEdge(citing_id=paper.id, cited_id=target.id))
        for n in range(1, example.self_cites + 1):
            paper = Paper(
                id=f"{example.paper_id}-s{n:03d}",
                title=f"Self citation {n} of example {example.row}",
                year=2024,
                authors=(target.authors[-1], _outsider(example.row, "S", n)),
            )
            citing.append(paper)
            edges.append(CitationEdge(citing_id=paper.id, cited_id=target.id))
    return targets + citing, edges


def build_table1_corpus() -> Corpus:
    papers, edges = table1_papers_and_edges()
    return build_corpus(papers, edges)


def table1_scores(corpus: Corpus | None = None) -> list[tuple[Table1Row, PaperScore]]:
    corpus = corpus or build_table1_corpus()
    return [(example, paper_score(corpus, example.paper_id)) for example in TABLE1_ROWS]
