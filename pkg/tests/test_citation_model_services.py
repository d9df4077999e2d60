import random

import pytest
from pydantic import ValidationError

from app.errors import CorpusValidationError, RecordNotFoundError, RecordValidationError
from app.models.corpus import Corpus
from app.schemas.citation import AuthorRef, CitationEdge, Paper, ViolationKind
from app.services.citation_model import (
    author_index,
    author_keys,
    build_corpus,
    corpus_validate,
    corpus_authors,
    corpus_papers,
    get_paper,
    normalize_author,
    papers_for_author,
    same_author,
    strip_diacritics,
)
from tests.oracles import author, edge, paper, random_cited_corpus


class TestNormalizeAuthor:
    def test_persistent_id_wins(self):
        ref = author("Dillon, Roberto", "0000-0001")
        assert normalize_author(ref) == "id:0000-0001"

    def test_comma_form(self):
        assert normalize_author(author("Dillon, Roberto")) == "name:dillon/r"

    def test_last_token_form(self):
        assert normalize_author(author("Roberto Dillon")) == "name:dillon/r"

    def test_comma_and_plain_forms_agree(self):
        assert normalize_author(author("Dillon, R.")) == normalize_author(
            author("R. Dillon")
        )

    def test_diacritics_and_case_folded(self):
        assert normalize_author(author("José García")) == normalize_author(
            author("GARCIA, jose")
        )

    def test_diacritics_stripped_from_last_token(self):
        assert normalize_author(author("José García López")) == "name:lopez/j"

    def test_whitespace_collapsed(self):
        assert normalize_author(author("  Wei    Chen ")) == "name:chen/w"

    def test_single_token_name(self):
        assert normalize_author(author("Plato")) == "name:plato/"

    def test_initial_skips_punctuation(self):
        assert normalize_author(author("Chen, .W.")) == "name:chen/w"

    def test_multiword_family_before_comma(self):
        assert normalize_author(author("van der Berg, Jan")) == "name:van der berg/j"

    def test_empty_name_rejected(self):
        with pytest.raises(RecordValidationError):
            normalize_author(author("   "))

    def test_identity_key_property(self):
        assert author("Ngozi Okafor").identity_key == "name:okafor/n"

    def test_strip_diacritics(self):
        assert strip_diacritics("Élodie Müller") == "Elodie Muller"


class TestSameAuthor:
    def test_matching_persistent_ids(self):
        assert same_author(author("A. Smith", "X1"), author("Zed Other", "X1"))

    def test_different_persistent_ids_override_names(self):
        assert not same_author(author("Anna Smith", "X1"), author("Anna Smith", "X2"))

    def test_names_used_when_one_id_missing(self):
        assert same_author(author("Anna Smith", "X1"), author("Smith, A."))

    def test_different_initials(self):
        assert not same_author(author("Anna Smith"), author("Bruno Smith"))

    def test_reflexive_and_symmetric(self):
        a, b = author("García, José"), author("J. Garcia")
        assert same_author(a, a)
        assert same_author(a, b) == same_author(b, a)


class TestCorpusLookups:
    def test_author_keys_deduplicated(self):
        p = paper("p1", "Wei Chen", "Chen, W.", author("Anna Smith", "S1"))
        assert author_keys(p) == frozenset({"name:chen/w", "id:S1"})

    def test_author_index(self, small_corpus):
        index = author_index(small_corpus)
        assert list(index) == sorted(index)
        assert [p.id for p in index["name:dillon/r"]] == ["p1", "p2"]
        assert [p.id for p in index["id:M-1"]] == ["p4"]

    def test_papers_for_author(self, small_corpus):
        assert [p.id for p in papers_for_author(small_corpus, "name:chen/w")] == ["p1"]

    def test_papers_for_unknown_author(self, small_corpus):
        with pytest.raises(RecordNotFoundError) as exc_info:
            papers_for_author(small_corpus, "name:nobody/x")
        assert exc_info.value.details["known_keys"] == 4

    def test_get_paper_missing(self, small_corpus):
        with pytest.raises(RecordNotFoundError):
            get_paper(small_corpus, "missing")

    def test_corpus_summary(self, small_corpus):
        summary = corpus_papers.summary(small_corpus)
        assert (summary.paper_count, summary.edge_count, summary.author_count) == (4, 3, 4)

    def test_author_summaries(self, small_corpus):
        summaries = corpus_authors.summaries(small_corpus)
        assert [s.author_key for s in summaries] == list(author_index(small_corpus))
        counts = {s.author_key: s.paper_count for s in summaries}
        assert counts["name:dillon/r"] == 2
        assert counts["id:M-1"] == 1


class TestCorpus:
    def test_ids_are_trimmed(self):
        assert paper(" p1 ", "Anna Smith").id == "p1"
        assert edge("p2\t", " p1") == edge("p2", "p1")

    def test_blank_id_rejected(self):
        with pytest.raises(ValidationError):
            paper("   ", "Anna Smith")
        with pytest.raises(ValidationError):
            CitationEdge(citing_id="", cited_id="p1")

    def test_first_record_per_id_wins(self):
        first = paper("p1", "Anna Smith")
        corpus = Corpus([first, paper("p1", "Bruno Smith")])
        assert corpus.papers["p1"] is first
        assert len(corpus.paper_records) == 2

    def test_edges_collapse(self):
        corpus = Corpus([paper("a", "X Y"), paper("b", "Z W")], [edge("a", "b")] * 3)
        assert corpus.edges == frozenset({edge("a", "b")})
        assert corpus.citing_ids("b") == frozenset({"a"})
        assert corpus.citing_ids("a") == frozenset()

    def test_immutable(self, small_corpus):
        with pytest.raises(AttributeError):
            small_corpus.papers = {}
        with pytest.raises(TypeError):
            small_corpus.papers["p9"] = paper("p9", "Anna Smith")

    def test_equality_ignores_edge_order(self, small_corpus):
        reordered = Corpus(
            small_corpus.papers.values(), reversed(small_corpus.edge_records)
        )
        assert reordered == small_corpus


class TestCorpusValidate:
    def test_clean_corpus(self, small_corpus):
        assert corpus_validate(small_corpus) == []

    def test_reports_every_violation(self):
        corpus = Corpus(
            [
                paper("p1", "Anna Smith"),
                paper("p1", "Anna Smith"),
                Paper(id="p2", authors=()),
                Paper(id="p3", authors=(AuthorRef(display_name=" "),)),
            ],
            [
                CitationEdge(citing_id="p1", cited_id="p1"),
                CitationEdge(citing_id="p2", cited_id="p1"),
                CitationEdge(citing_id="p2", cited_id="p1"),
                CitationEdge(citing_id="p1", cited_id="ghost"),
            ],
        )
        kinds = [v.kind for v in corpus_validate(corpus)]
        assert kinds == [
            ViolationKind.duplicate_paper,
            ViolationKind.empty_author_list,
            ViolationKind.empty_author_name,
            ViolationKind.self_edge,
            ViolationKind.duplicate_edge,
            ViolationKind.dangling_endpoint,
        ]

    @pytest.mark.parametrize("kind", list(ViolationKind), ids=lambda k: k.value)
    @pytest.mark.parametrize("seed", range(8))
    def test_single_injected_violation_reported_once(self, kind, seed):
        rng = random.Random(seed)
        corpus = random_cited_corpus(rng, max_papers=20)
        assert corpus_validate(corpus) == []

        papers = list(corpus.paper_records)
        edges = list(corpus.edge_records)
        slot = rng.randrange(len(papers))
        victim = papers[slot]
        if kind is ViolationKind.duplicate_paper:
            papers.append(victim)
        elif kind is ViolationKind.empty_author_list:
            papers[slot] = victim.model_copy(update={"authors": ()})
        elif kind is ViolationKind.empty_author_name:
            blank = AuthorRef(display_name=" ")
            papers[slot] = victim.model_copy(update={"authors": (blank, *victim.authors[1:])})
        elif kind is ViolationKind.self_edge:
            edges.append(CitationEdge(citing_id=victim.id, cited_id=victim.id))
        elif kind is ViolationKind.dangling_endpoint:
            edges.append(CitationEdge(citing_id=victim.id, cited_id="ghost"))
        else:
            edges.insert(rng.randrange(len(edges) + 1), rng.choice(edges))

        violations = corpus_validate(Corpus(papers, edges))
        assert [v.kind for v in violations] == [kind]

    def test_violation_locations(self):
        corpus = Corpus([paper("p1", "Anna Smith")], [edge("p1", "ghost")])
        (violation,) = corpus_validate(corpus)
        assert violation.location == "edge[0] p1->ghost"
        assert "ghost" in str(violation)

    def test_build_corpus_rejects_dangling(self):
        with pytest.raises(CorpusValidationError) as exc_info:
            build_corpus([paper("p1", "Anna Smith")], [edge("p1", "p2")])
        assert exc_info.value.violations[0].kind is ViolationKind.dangling_endpoint

    def test_build_corpus_accepts_valid(self, small_corpus):
        built = build_corpus(small_corpus.papers.values(), small_corpus.edges)
        assert built == small_corpus
