"""Harvest an author's works and their citing works from an OpenAlex-style API.

Every response body goes through an on-disk cache keyed by a hash of the
request, so a warm cache replays a harvest without touching the network.
"""

import hashlib
import json
import logging
import os
import tempfile
import threading
import time
from collections import deque
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from urllib.parse import urlencode

import httpx
from pydantic import ValidationError
from tenacity import (
    RetryCallState,
    RetryError,
    Retrying,
    retry_if_exception,
    stop_after_attempt,
    wait_exponential,
)

from app.errors import AuthorNotFoundError, CorpusFileError, DecodeError, FetchError
from app.observability import HARVEST_REQUESTS, HARVEST_RETRIES
from app.schemas.citation import AuthorRef, CitationEdge, Paper
from app.schemas.harvest import (
    CachedResponse,
    HarvestConfig,
    OpenAlexAuthor,
    OpenAlexPage,
    OpenAlexWork,
)
from app.services.ingest import write_citations, write_papers
from app.telemetry import get_tracer

logger = logging.getLogger(__name__)
tracer = get_tracer()

MAX_ATTEMPTS = 3
MAX_PAGE_SIZE = 200
PAPERS_FILE = "papers.jsonl"
CITATIONS_FILE = "citations.csv"
_OPENALEX_PREFIX = "https://openalex.org/"


def short_id(value: str) -> str:
    value = value.strip()
    if value.startswith(_OPENALEX_PREFIX):
        value = value[len(_OPENALEX_PREFIX) :]
    return value.rstrip("/").rsplit("/", 1)[-1]


class TransientStatusError(Exception):
    """A 429 or 5xx response; the request may be retried."""

    def __init__(self, status_code: int):
        super().__init__(f"HTTP {status_code}")
        self.status_code = status_code


def _is_transient(exc: BaseException) -> bool:
    return isinstance(exc, (TransientStatusError, httpx.HTTPError))


def _reason(exc: BaseException | None) -> str:
    if isinstance(exc, TransientStatusError):
        return str(exc)
    return f"{type(exc).__name__}: {exc}"


def _log_retry(url: str) -> Callable[[RetryCallState], None]:
    def before_sleep(state: RetryCallState) -> None:
        HARVEST_RETRIES.inc()
        exc = state.outcome.exception() if state.outcome else None
        logger.warning(
            "Harvest request failed: %s",
            _reason(exc),
            extra={"url": url, "attempt": state.attempt_number},
        )

    return before_sleep


class RateLimiter:
    """Sliding-window limiter: never more than ``rate`` acquisitions per second."""

    def __init__(
        self,
        rate: float,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if rate <= 0:
            raise ValueError("rate must be positive")
        if rate >= 1:
            self._capacity = int(rate)
            self._window = 1.0
        else:
            self._capacity = 1
            self._window = 1.0 / rate
        self._clock = clock
        self._sleep = sleep
        self._stamps: deque[float] = deque()
        self._lock = threading.Lock()

    def _expire(self, now: float) -> None:
        while self._stamps and self._stamps[0] + self._window <= now:
            self._stamps.popleft()

    def acquire(self) -> float:
        """Block until a slot is free; return the time the slot was granted."""
        # Sleeping under the lock keeps waiting threads in arrival order.
        with self._lock:
            now = self._clock()
            self._expire(now)
            if len(self._stamps) >= self._capacity:
                deadline = self._stamps[0] + self._window
                self._sleep(max(0.0, deadline - now))
                now = max(self._clock(), deadline)
                self._expire(now)
            self._stamps.append(now)
            return now


class ResponseCache:
    """Response bodies on disk: ``<key>.body`` plus a ``<key>.json`` sidecar."""

    def __init__(self, cache_dir: Path):
        self.cache_dir = Path(cache_dir)
        self._write_lock = threading.Lock()

    @staticmethod
    def request_key(method: str, url: str) -> str:
        return hashlib.sha256(f"{method.upper()} {url}".encode()).hexdigest()

    def _paths(self, key: str) -> tuple[Path, Path]:
        return self.cache_dir / f"{key}.body", self.cache_dir / f"{key}.json"

    def get(self, key: str) -> CachedResponse | None:
        body_path, meta_path = self._paths(key)
        if not meta_path.exists():
            return None
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        return CachedResponse(
            request_key=key,
            url=meta["url"],
            body=body_path.read_bytes(),
            fetched_at=datetime.fromisoformat(meta["fetched_at"]),
        )

    def _atomic_write(self, path: Path, data: bytes) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.cache_dir, prefix=".tmp-")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def put(self, key: str, url: str, body: bytes) -> CachedResponse:
        entry = CachedResponse(
            request_key=key,
            url=url,
            body=body,
            fetched_at=datetime.now(timezone.utc),
        )
        body_path, meta_path = self._paths(key)
        meta = {"url": url, "fetched_at": entry.fetched_at.isoformat()}
        with self._write_lock:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            # The sidecar is written last; its presence marks a complete entry.
            self._atomic_write(body_path, body)
            self._atomic_write(meta_path, json.dumps(meta).encode("utf-8"))
        return entry


class OpenAlexHarvester:
    def __init__(
        self,
        cfg: HarvestConfig,
        client: httpx.Client | None = None,
        limiter: RateLimiter | None = None,
        cache: ResponseCache | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.cfg = cfg
        self._client = client
        self._owns_client = client is None
        self.limiter = limiter or RateLimiter(cfg.rate_limit)
        self.cache = cache or ResponseCache(cfg.cache_dir)
        self._sleep = sleep
        self.network_requests = 0
        self._count_lock = threading.Lock()

    @property
    def client(self) -> httpx.Client:
        if self._client is None:
            self._client = httpx.Client(timeout=self.cfg.timeout)
        return self._client

    def close(self) -> None:
        if self._owns_client and self._client is not None:
            self._client.close()
            self._client = None

    def __enter__(self) -> "OpenAlexHarvester":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def url_for(self, path: str, params: dict[str, str | int] | None = None) -> str:
        query = dict(params or {})
        if self.cfg.mailto:
            query["mailto"] = self.cfg.mailto
        url = f"{self.cfg.base_url}{path}"
        if query:
            url += "?" + urlencode(sorted(query.items()))
        return url

    def _attempt(self, url: str, attempt: int) -> bytes:
        self.limiter.acquire()
        with self._count_lock:
            self.network_requests += 1
        with tracer.start_as_current_span(
            "harvest.fetch", attributes={"http.url": url, "harvest.attempt": attempt}
        ) as span:
            response = self.client.get(url, timeout=self.cfg.timeout)
            span.set_attribute("http.status_code", response.status_code)
        status = response.status_code
        if status < 400:
            HARVEST_REQUESTS.labels("network").inc()
            return response.content
        if status == 429 or status >= 500:
            raise TransientStatusError(status)
        raise FetchError(url, attempt, f"HTTP {status}", status)

    def _fetch(self, url: str) -> bytes:
        retrying = Retrying(
            stop=stop_after_attempt(MAX_ATTEMPTS),
            wait=wait_exponential(multiplier=self.cfg.retry_backoff),
            retry=retry_if_exception(_is_transient),
            before_sleep=_log_retry(url),
            sleep=self._sleep,
        )
        try:
            for attempt in retrying:
                with attempt:
                    return self._attempt(url, attempt.retry_state.attempt_number)
        except RetryError as exc:
            last = exc.last_attempt.exception()
            logger.warning(
                "Harvest request failed: %s",
                _reason(last),
                extra={"url": url, "attempt": MAX_ATTEMPTS},
            )
            raise FetchError(
                url, MAX_ATTEMPTS, _reason(last), getattr(last, "status_code", None)
            ) from last
        raise FetchError(url, 0, "no attempt made")

    def get_body(self, url: str) -> tuple[str, bytes]:
        key = ResponseCache.request_key("GET", url)
        cached = self.cache.get(key)
        if cached is not None:
            HARVEST_REQUESTS.labels("cache").inc()
            return key, cached.body
        body = self._fetch(url)
        self.cache.put(key, url, body)
        logger.debug("Cached response", extra={"url": url, "request_key": key})
        return key, body

    def get_author(self, author_id: str) -> OpenAlexAuthor:
        url = self.url_for(f"/authors/{author_id}")
        try:
            key, body = self.get_body(url)
        except FetchError as exc:
            if exc.status_code == 404:
                raise AuthorNotFoundError(
                    f"Unknown author id {author_id!r}", {"author_id": author_id}
                ) from exc
            raise
        try:
            return OpenAlexAuthor.model_validate_json(body)
        except ValidationError as exc:
            raise DecodeError(key, str(exc)) from exc

    def iter_works(self, filter_expr: str, limit: int | None = None, sort: str | None = None):
        """All works matching a filter, following cursor pagination."""
        per_page = min(MAX_PAGE_SIZE, limit) if limit else MAX_PAGE_SIZE
        cursor: str | None = "*"
        fetched = 0
        while cursor:
            params: dict[str, str | int] = {
                "filter": filter_expr,
                "per-page": per_page,
                "cursor": cursor,
            }
            if sort:
                params["sort"] = sort
            key, body = self.get_body(self.url_for("/works", params))
            try:
                page = OpenAlexPage.model_validate_json(body)
            except ValidationError as exc:
                raise DecodeError(key, str(exc)) from exc
            for work in page.results:
                yield work
                fetched += 1
                if limit is not None and fetched >= limit:
                    return
            if not page.results:
                return
            cursor = page.meta.next_cursor


def work_to_paper(work: OpenAlexWork) -> Paper:
    authors = []
    for authorship in work.authorships:
        ref = authorship.author
        name = (ref.display_name if ref else None) or authorship.raw_author_name
        if not name or not name.strip():
            continue
        pid = short_id(ref.id) if ref and ref.id else None
        authors.append(AuthorRef(display_name=name, persistent_id=pid))
    return Paper(
        id=short_id(work.id),
        title=work.display_name or work.title or "",
        year=work.publication_year,
        authors=tuple(authors),
    )


def fetch_author_works(
    cfg: HarvestConfig,
    client: httpx.Client | None = None,
    harvester: OpenAlexHarvester | None = None,
) -> tuple[list[Paper], list[CitationEdge]]:
    """Fetch an author's most cited works and every work citing them."""
    owned = harvester is None
    harvester = harvester or OpenAlexHarvester(cfg, client=client)
    author_id = short_id(cfg.author_id)
    span = tracer.start_span("harvest.author", attributes={"harvest.author_id": author_id})
    try:
        harvester.get_author(author_id)
        works = list(
            harvester.iter_works(
                f"author.id:{author_id}",
                limit=cfg.max_works,
                sort="cited_by_count:desc",
            )
        )
        works.sort(key=lambda w: (-(w.cited_by_count or 0), short_id(w.id)))
        targets = []
        for work in works[: cfg.max_works]:
            paper = work_to_paper(work)
            if not paper.authors:
                logger.warning(
                    "Dropping work without author data",
                    extra={"paper_id": paper.id},
                )
                continue
            targets.append(paper)

        def citing_of(target: Paper) -> list[OpenAlexWork]:
            return list(harvester.iter_works(f"cites:{target.id}"))

        with ThreadPoolExecutor(max_workers=cfg.concurrency) as pool:
            citing_lists = list(pool.map(citing_of, targets))
    finally:
        span.end()
        if owned:
            harvester.close()

    papers: dict[str, Paper] = {p.id: p for p in targets}
    edges: dict[CitationEdge, None] = {}
    dropped = 0
    for target, citing_works in zip(targets, citing_lists):
        for work in citing_works:
            paper = work_to_paper(work)
            if paper.id == target.id:
                continue
            if not paper.authors:
                dropped += 1
                logger.warning(
                    "Dropping citing work without author data",
                    extra={"paper_id": paper.id},
                )
                continue
            papers.setdefault(paper.id, paper)
            edges[CitationEdge(citing_id=paper.id, cited_id=target.id)] = None
    logger.info(
        "Harvested %d works citing %d target works (%d dropped)",
        len(papers) - len(targets),
        len(targets),
        dropped,
        extra={"author_key": f"id:{author_id}", "count": len(papers)},
    )
    return list(papers.values()), list(edges)


def export_corpus(
    papers: list[Paper], edges: list[CitationEdge], out_dir: str | Path
) -> tuple[Path, Path]:
    out = Path(out_dir)
    papers_path = out / PAPERS_FILE
    citations_path = out / CITATIONS_FILE
    try:
        out.mkdir(parents=True, exist_ok=True)
        with open(papers_path, "w", encoding="utf-8", newline="") as sink:
            write_papers(papers, sink)
        with open(citations_path, "w", encoding="utf-8", newline="") as sink:
            write_citations(edges, sink)
    except OSError as exc:
        raise CorpusFileError(
            f"cannot write corpus to {out}: {exc}", {"path": str(out)}
        ) from exc
    return papers_path, citations_path


def harvest_to_files(
    cfg: HarvestConfig, out_dir: str | Path, client: httpx.Client | None = None
) -> tuple[Path, Path]:
    papers, edges = fetch_author_works(cfg, client=client)
    return export_corpus(papers, edges, out_dir)
