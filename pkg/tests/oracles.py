"""Brute-force reference implementations and random corpus generation.

Written independently of app.services so the suites compare two codings of
the same definitions.
"""

import math
import random
import re
import unicodedata

from app.models.corpus import Corpus
from app.schemas.citation import AuthorRef, CitationEdge, Paper

FAMILIES = [
    "Smith",
    "García",
    "Müller",
    "Chen",
    "Kowalski",
    "Nguyen",
    "Rossi",
    "Ødegaard",
    "Ito",
    "Silva",
    "Novák",
    "Okafor",
]
GIVEN = ["Anna", "Bruno", "Chloé", "Dmitri", "Élodie", "Farid", "Grace", "Hiro"]


def author(name: str, pid: str | None = None) -> AuthorRef:
    return AuthorRef(display_name=name, persistent_id=pid)


def paper(paper_id: str, *authors: AuthorRef | str, year: int = 2020) -> Paper:
    refs = tuple(a if isinstance(a, AuthorRef) else author(a) for a in authors)
    return Paper(id=paper_id, title=f"Paper {paper_id}", year=year, authors=refs)


def edge(citing_id: str, cited_id: str) -> CitationEdge:
    return CitationEdge(citing_id=citing_id, cited_id=cited_id)


# ---------------------------------------------------------------------------
# Identity
# ---------------------------------------------------------------------------


def _ascii_lower(text: str) -> str:
    return "".join(
        c for c in unicodedata.normalize("NFD", text) if unicodedata.category(c) != "Mn"
    ).lower()


def oracle_name_key(name: str) -> str:
    name = re.sub(r"\s+", " ", name).strip()
    match = re.match(r"^([^,]+),(.*)$", name)
    if match:
        family, given = match.group(1), match.group(2)
    else:
        family, _, given = name.rpartition(" ")
        family, given = given, family
    family = _ascii_lower(family).strip(" .")
    letters = [c for c in _ascii_lower(given) if c.isalnum()]
    return "name:" + family + "/" + (letters[0] if letters else "")


def oracle_key(a: AuthorRef) -> str:
    return "id:" + a.persistent_id if a.persistent_id else oracle_name_key(a.display_name)


def oracle_same(a: AuthorRef, b: AuthorRef) -> bool:
    if a.persistent_id and b.persistent_id:
        return a.persistent_id == b.persistent_id
    return oracle_name_key(a.display_name) == oracle_name_key(b.display_name)


# ---------------------------------------------------------------------------
# Indicators
# ---------------------------------------------------------------------------


def oracle_h(counts: list[int]) -> int:
    return max(h for h in range(len(counts) + 1) if sum(c >= h for c in counts) >= h)


def oracle_i10(counts: list[int]) -> int:
    return len([c for c in counts if c >= 10])


def oracle_g(counts: list[int]) -> int:
    ranked = sorted(counts, reverse=True)
    return max(g for g in range(len(ranked) + 1) if sum(ranked[:g]) >= g * g)


def oracle_e(counts: list[int]) -> float:
    h = oracle_h(counts)
    core = sorted(counts, reverse=True)[:h]
    return math.sqrt(sum(core) - h * h)


def oracle_u(i: int, s: int, n: int) -> float:
    return (i + s / 2) / math.sqrt(n)


def oracle_breakdown(corpus: Corpus, cited_id: str) -> tuple[int, int]:
    cited = corpus.papers[cited_id]
    independent = self_cites = 0
    for e in corpus.edges:
        if e.cited_id != cited_id:
            continue
        citing = corpus.papers[e.citing_id]
        if any(oracle_same(a, b) for a in cited.authors for b in citing.authors):
            self_cites += 1
        else:
            independent += 1
    return independent, self_cites


def oracle_author_papers(corpus: Corpus, key: str) -> list[Paper]:
    return [p for p in corpus.papers.values() if any(oracle_key(a) == key for a in p.authors)]


def oracle_author_u(corpus: Corpus, key: str) -> float:
    total = 0.0
    for p in oracle_author_papers(corpus, key):
        i, s = oracle_breakdown(corpus, p.id)
        total += oracle_u(i, s, len(p.authors))
    return total


def oracle_author_u10(corpus: Corpus, key: str) -> float:
    rows = []
    for p in oracle_author_papers(corpus, key):
        i, s = oracle_breakdown(corpus, p.id)
        rows.append((i + s, i, p.id, oracle_u(i, s, len(p.authors))))
    rows.sort(key=lambda r: (-r[0], -r[1], r[2]))
    return sum(r[3] for r in rows[:10])


def oracle_keys(corpus: Corpus) -> set[str]:
    return {oracle_key(a) for p in corpus.papers.values() for a in p.authors}


# ---------------------------------------------------------------------------
# Random corpora
# ---------------------------------------------------------------------------


def random_people(rng: random.Random, count: int) -> list[AuthorRef]:
    people = []
    for k in range(count):
        family = FAMILIES[k % len(FAMILIES)]
        given = GIVEN[(k // len(FAMILIES) + k) % len(GIVEN)]
        style = rng.random()
        name = f"{family}, {given}" if style < 0.4 else f"{given} {family}"
        pid = f"P{k:03d}" if rng.random() < 0.5 else None
        people.append(author(name, pid))
    return people


def random_corpus(
    rng: random.Random,
    max_papers: int = 50,
    max_authors: int = 20,
    edge_probability: float | None = None,
) -> Corpus:
    people = random_people(rng, rng.randint(1, max_authors))
    papers = []
    for n in range(rng.randint(1, max_papers)):
        byline = rng.sample(people, rng.randint(1, min(4, len(people))))
        # Sometimes the same person appears without their persistent id.
        byline = [
            author(a.display_name) if a.persistent_id and rng.random() < 0.2 else a
            for a in byline
        ]
        papers.append(paper(f"p{n:03d}", *byline, year=rng.randint(1990, 2024)))
    probability = edge_probability if edge_probability is not None else rng.uniform(0, 0.3)
    edges = [
        edge(a.id, b.id)
        for a in papers
        for b in papers
        if a.id != b.id and rng.random() < probability
    ]
    return Corpus(papers, edges)


def random_cited_corpus(rng: random.Random, max_papers: int = 25) -> Corpus:
    """A random corpus holding at least one citation."""
    while True:
        corpus = random_corpus(rng, max_papers=max_papers, edge_probability=0.2)
        if corpus.edges:
            return corpus
