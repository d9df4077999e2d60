import os

# Keep the suite independent of a developer's .env before any app import.
os.environ["OTEL_ENABLED"] = "false"
os.environ["CORPUS_PAPERS_PATH"] = ""
os.environ["CORPUS_CITATIONS_PATH"] = ""
os.environ["HARVEST_MAILTO"] = ""

import pytest  # noqa: E402
from fastapi.testclient import TestClient  # noqa: E402

from app.main import create_app  # noqa: E402
from app.models.corpus import Corpus  # noqa: E402
from app.schemas.harvest import HarvestConfig  # noqa: E402
from app.services.ingest import save_corpus  # noqa: E402
from app.services.table1 import build_table1_corpus  # noqa: E402
from tests.mocks import MOCK_BASE_URL, MockOpenAlex, sample_openalex  # noqa: E402
from tests.oracles import author, edge, paper  # noqa: E402


@pytest.fixture(scope="session")
def table1_corpus():
    return build_table1_corpus()


@pytest.fixture()
def small_corpus():
    """Two authors sharing a paper, one self-citation and two independent ones.

    p1 (Dillon R., Chen W.) is cited by p2 (R. Dillon, self) and p3 (Okafor N.).
    p2 is cited by p4 (Silva, M. with pid) which shares no author with p2.
    """
    papers = [
        paper("p1", "Dillon, Roberto", "Chen, Wei"),
        paper("p2", "Roberto Dillon"),
        paper("p3", "Okafor, Ngozi"),
        paper("p4", author("Silva, Maria", "M-1")),
    ]
    edges = [edge("p2", "p1"), edge("p3", "p1"), edge("p4", "p2")]
    return Corpus(papers, edges)


@pytest.fixture()
def corpus_files(tmp_path, small_corpus):
    papers_path = tmp_path / "papers.jsonl"
    citations_path = tmp_path / "citations.csv"
    save_corpus(small_corpus, papers_path, citations_path)
    return papers_path, citations_path


@pytest.fixture()
def table1_files(tmp_path, table1_corpus):
    papers_path = tmp_path / "table1-papers.jsonl"
    citations_path = tmp_path / "table1-citations.csv"
    save_corpus(table1_corpus, papers_path, citations_path)
    return papers_path, citations_path


# ============ HTTP Fixtures ============


@pytest.fixture()
def client(table1_corpus):
    with TestClient(create_app(table1_corpus), raise_server_exceptions=False) as test_client:
        yield test_client


@pytest.fixture()
def openalex():
    return sample_openalex()


@pytest.fixture()
def openalex_client(openalex: MockOpenAlex):
    with TestClient(openalex.app, base_url=MOCK_BASE_URL) as test_client:
        yield test_client


@pytest.fixture()
def harvest_config(tmp_path):
    return HarvestConfig(
        base_url=MOCK_BASE_URL,
        author_id="A100",
        max_works=2,
        rate_limit=1000,
        cache_dir=tmp_path / "cache",
        timeout=5,
        concurrency=2,
        mailto=None,
        retry_backoff=0,
    )
