import logging

from app.errors import RecordNotFoundError
from app.models.corpus import Corpus
from app.schemas.citation import AuthorRef, CitationEdge, Paper
from app.schemas.metrics import CitationBreakdown, CitationClass, ClassifiedCitation
from app.services.citation_model import get_paper, same_author

logger = logging.getLogger(__name__)


def matched_pair(cited: Paper, citing: Paper) -> tuple[AuthorRef, AuthorRef] | None:
    """First (cited author, citing author) pair naming the same person, in byline order."""
    for cited_author in cited.authors:
        for citing_author in citing.authors:
            if same_author(cited_author, citing_author):
                return cited_author, citing_author
    return None


def _resolve(corpus: Corpus, edge: CitationEdge) -> tuple[Paper, Paper]:
    for paper_id in (edge.cited_id, edge.citing_id):
        if paper_id not in corpus.papers:
            raise RecordNotFoundError(
                f"Citation {edge.citing_id}->{edge.cited_id} references unknown "
                f"paper {paper_id!r}",
                {"paper_id": paper_id},
            )
    return corpus.papers[edge.cited_id], corpus.papers[edge.citing_id]


class SelfCitations:
    @staticmethod
    def classify(corpus: Corpus, edge: CitationEdge) -> CitationClass:
        cited, citing = _resolve(corpus, edge)
        if matched_pair(cited, citing) is not None:
            return CitationClass.self_citation
        return CitationClass.independent

    @staticmethod
    def incoming(corpus: Corpus, cited_id: str) -> list[ClassifiedCitation]:
        """Every citation of ``cited_id`` by citing id, with the matched author pair."""
        cited = get_paper(corpus, cited_id)
        results = []
        for citing_id in sorted(corpus.citing_ids(cited_id)):
            citing = get_paper(corpus, citing_id)
            pair = matched_pair(cited, citing)
            if pair is None:
                results.append(
                    ClassifiedCitation(
                        citing_id=citing_id,
                        cited_id=cited_id,
                        citation_class=CitationClass.independent,
                    )
                )
                continue
            results.append(
                ClassifiedCitation(
                    citing_id=citing_id,
                    cited_id=cited_id,
                    citation_class=CitationClass.self_citation,
                    cited_author=pair[0].display_name,
                    citing_author=pair[1].display_name,
                )
            )
        return results

    @staticmethod
    def breakdown(corpus: Corpus, cited_id: str) -> CitationBreakdown:
        get_paper(corpus, cited_id)
        independent = 0
        self_cites = 0
        for citing_id in corpus.citing_ids(cited_id):
            edge = CitationEdge(citing_id=citing_id, cited_id=cited_id)
            if SelfCitations.classify(corpus, edge) is CitationClass.self_citation:
                self_cites += 1
            else:
                independent += 1
        return CitationBreakdown(
            cited_id=cited_id, independent=independent, self_cites=self_cites
        )


self_citations = SelfCitations()

classify_citation = self_citations.classify
classify_incoming = self_citations.incoming
breakdown = self_citations.breakdown
