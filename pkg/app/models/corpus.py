from __future__ import annotations

from collections.abc import Iterable, Mapping
from types import MappingProxyType

from app.schemas.citation import CitationEdge, Paper


class Corpus:
    """Closed set of papers and citation edges.

    The raw records are kept as given so validation can report duplicates;
    ``papers`` keeps the first record per id and ``edges`` collapses repeated
    pairs. Instances are read-only after construction.
    """

    __slots__ = ("paper_records", "edge_records", "papers", "edges", "incoming")

    papers: Mapping[str, Paper]
    edges: frozenset[CitationEdge]
    incoming: Mapping[str, frozenset[str]]
    paper_records: tuple[Paper, ...]
    edge_records: tuple[CitationEdge, ...]

    def __init__(
        self,
        papers: Iterable[Paper] = (),
        edges: Iterable[CitationEdge] = (),
    ) -> None:
        paper_records = tuple(papers)
        edge_records = tuple(edges)

        by_id: dict[str, Paper] = {}
        for paper in paper_records:
            by_id.setdefault(paper.id, paper)

        unique_edges: dict[CitationEdge, None] = dict.fromkeys(edge_records)
        incoming: dict[str, set[str]] = {}
        for edge in unique_edges:
            incoming.setdefault(edge.cited_id, set()).add(edge.citing_id)

        object.__setattr__(self, "paper_records", paper_records)
        object.__setattr__(self, "edge_records", edge_records)
        object.__setattr__(self, "papers", MappingProxyType(by_id))
        object.__setattr__(self, "edges", frozenset(unique_edges))
        object.__setattr__(
            self,
            "incoming",
            MappingProxyType({k: frozenset(v) for k, v in incoming.items()}),
        )

    def __setattr__(self, name, value):
        raise AttributeError("Corpus is immutable")

    def citing_ids(self, cited_id: str) -> frozenset[str]:
        return self.incoming.get(cited_id, frozenset())

    def __len__(self) -> int:
        return len(self.papers)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return (
            list(self.papers.values()) == list(other.papers.values())
            and self.edges == other.edges
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Corpus(papers={len(self.papers)}, edges={len(self.edges)})"
