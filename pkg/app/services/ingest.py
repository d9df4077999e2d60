"""Corpus files in, reports out.

Papers files hold one JSON object per line::

    {"id": "p1", "title": "...", "year": 2021, "authors": [{"name": "Dillon, R.", "pid": "0000-..."}]}

Citations files are two-column CSV with a ``citing_id,cited_id`` header.
"""

import csv
import enum
import json
import logging
from collections.abc import Collection, Iterable, Iterator
from pathlib import Path
from typing import TextIO

from pydantic import ValidationError
from rich import box
from rich.console import Console
from rich.table import Table

from app.errors import (
    CorpusFileError,
    CorpusValidationError,
    IngestError,
    ParseError,
    RecordValidationError,
    ReportWriteError,
    UIndexError,
)
from app.models.corpus import Corpus
from app.schemas.citation import AuthorRef, CitationEdge, Paper, PaperRecord
from app.schemas.metrics import (
    REAL_COLUMNS,
    REPORT_COLUMNS,
    AuthorMetrics,
    ClassifiedCitation,
    RankMetric,
)
from app.services.citation_model import corpus_validate
from app.services.metrics import format_real, sort_by_metric

logger = logging.getLogger(__name__)

CITATIONS_HEADER = ("citing_id", "cited_id")


class ReportFormat(enum.Enum):
    table = "table"
    csv = "csv"
    json = "json"


class _Collector:
    """Raises on the first error unless lenient, then raises all at the end."""

    def __init__(self, lenient: bool):
        self.lenient = lenient
        self.errors: list[UIndexError] = []

    def fail(self, error: UIndexError) -> None:
        if not self.lenient:
            raise error
        self.errors.append(error)

    def finish(self) -> None:
        if self.errors:
            raise IngestError(self.errors)


def _undecodable(*texts: str) -> bool:
    """True when a line read with ``surrogateescape`` held bytes that are not UTF-8."""
    try:
        for text in texts:
            text.encode("utf-8")
    except UnicodeEncodeError:
        return True
    return False


def _describe(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        loc = ".".join(str(item) for item in err["loc"]) or "record"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def parse_papers(
    stream: Iterable[str], source: str = "<papers>", lenient: bool = False
) -> list[Paper]:
    collector = _Collector(lenient)
    papers: list[Paper] = []
    first_line: dict[str, int] = {}
    for line_no, raw in enumerate(stream, start=1):
        if not raw.strip():
            continue
        if _undecodable(raw):
            collector.fail(ParseError(source, line_no, "invalid UTF-8"))
            continue
        try:
            record = PaperRecord.model_validate_json(raw)
        except ValidationError as exc:
            collector.fail(ParseError(source, line_no, _describe(exc)))
            continue
        where = f"{source}:{line_no}"
        if not record.authors:
            collector.fail(
                RecordValidationError(
                    f"{where}: paper {record.id!r} has an empty author list",
                    {"source": source, "line": line_no, "paper_id": record.id},
                )
            )
            continue
        blank = [i for i, a in enumerate(record.authors) if not a.name.strip()]
        if blank:
            collector.fail(
                RecordValidationError(
                    f"{where}: paper {record.id!r} author[{blank[0]}] has an empty name",
                    {"source": source, "line": line_no, "paper_id": record.id},
                )
            )
            continue
        if record.id in first_line:
            collector.fail(
                RecordValidationError(
                    f"{where}: duplicate paper id {record.id!r} "
                    f"(first seen on line {first_line[record.id]})",
                    {"source": source, "line": line_no, "paper_id": record.id},
                )
            )
            continue
        first_line[record.id] = line_no
        papers.append(
            Paper(
                id=record.id,
                title=record.title,
                year=record.year,
                authors=tuple(
                    AuthorRef(display_name=a.name, persistent_id=a.pid)
                    for a in record.authors
                ),
            )
        )
    collector.finish()
    return papers


def _citation_rows(stream: Iterable[str], source: str) -> Iterator[tuple[int, list[str]]]:
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise ParseError(source, 1, "missing header row (citing_id,cited_id)")
    if _undecodable(*header):
        raise ParseError(source, reader.line_num, "invalid UTF-8")
    if len(header) != 2:
        raise ParseError(
            source, reader.line_num, f"header must have 2 columns, found {len(header)}"
        )
    for row in reader:
        if not row:
            continue
        yield reader.line_num, row


def parse_citations(
    stream: Iterable[str],
    source: str = "<citations>",
    lenient: bool = False,
    known_ids: Collection[str] | None = None,
) -> list[CitationEdge]:
    """Parse a citations file into unique edges.

    Repeated rows are logged as warnings and collapse to one edge. When
    ``known_ids`` is given, rows pointing outside it are errors.
    """
    collector = _Collector(lenient)
    edges: dict[CitationEdge, int] = {}
    for row_no, row in _citation_rows(stream, source):
        if _undecodable(*row):
            collector.fail(ParseError(source, row_no, "invalid UTF-8"))
            continue
        if len(row) != 2:
            collector.fail(
                ParseError(source, row_no, f"expected 2 columns, found {len(row)}")
            )
            continue
        citing_id, cited_id = (field.strip() for field in row)
        if not citing_id or not cited_id:
            collector.fail(ParseError(source, row_no, "empty paper id"))
            continue
        if citing_id == cited_id:
            collector.fail(
                RecordValidationError(
                    f"{source}:{row_no}: paper {citing_id!r} cites itself",
                    {"source": source, "line": row_no, "paper_id": citing_id},
                )
            )
            continue
        if known_ids is not None:
            missing = [pid for pid in (citing_id, cited_id) if pid not in known_ids]
            if missing:
                collector.fail(
                    RecordValidationError(
                        f"{source}:{row_no}: unknown paper id {missing[0]!r}",
                        {"source": source, "line": row_no, "paper_id": missing[0]},
                    )
                )
                continue
        edge = CitationEdge(citing_id=citing_id, cited_id=cited_id)
        if edge in edges:
            logger.warning(
                "Duplicate citation row %s->%s (first on row %d) ignored",
                citing_id,
                cited_id,
                edges[edge],
                extra={"source": source, "line": row_no},
            )
            continue
        edges[edge] = row_no
    collector.finish()
    return list(edges)


def _open(path: str | Path, newline: str | None = None) -> TextIO:
    try:
        return open(
            path, encoding="utf-8", errors="surrogateescape", newline=newline
        )
    except OSError as exc:
        raise CorpusFileError(
            f"cannot read {path}: {exc.strerror or exc}", {"path": str(path)}
        ) from exc


def load_corpus(
    papers_path: str | Path,
    citations_path: str | Path,
    lenient: bool = False,
    validate: bool = True,
) -> Corpus:
    """Read both files into a corpus.

    With ``validate`` off, dangling citations are kept so ``corpus_validate``
    can report them; parse errors still raise.
    """
    errors: list[UIndexError] = []
    papers: list[Paper] = []
    edges: list[CitationEdge] = []

    with _open(papers_path) as stream:
        try:
            papers = parse_papers(stream, source=str(papers_path), lenient=lenient)
        except IngestError as exc:
            errors.extend(exc.errors)

    known_ids = {p.id for p in papers} if validate and not errors else None
    with _open(citations_path, newline="") as stream:
        try:
            edges = parse_citations(
                stream,
                source=str(citations_path),
                lenient=lenient,
                known_ids=known_ids,
            )
        except IngestError as exc:
            errors.extend(exc.errors)

    if errors:
        raise IngestError(errors)

    corpus = Corpus(papers, edges)
    if validate:
        violations = corpus_validate(corpus)
        if violations:
            raise CorpusValidationError(violations)
    logger.info(
        "Loaded corpus from %s and %s",
        papers_path,
        citations_path,
        extra={"count": len(corpus.papers)},
    )
    return corpus


# ---------------------------------------------------------------------------
# Corpus serialization
# ---------------------------------------------------------------------------


def paper_to_record(paper: Paper) -> dict:
    authors = []
    for author in paper.authors:
        item = {"name": author.display_name}
        if author.persistent_id is not None:
            item["pid"] = author.persistent_id
        authors.append(item)
    return {"id": paper.id, "title": paper.title, "year": paper.year, "authors": authors}


def write_papers(papers: Iterable[Paper], sink: TextIO) -> None:
    for paper in papers:
        sink.write(json.dumps(paper_to_record(paper), ensure_ascii=False) + "\n")


def write_citations(edges: Iterable[CitationEdge], sink: TextIO) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(CITATIONS_HEADER)
    for edge in sorted(edges, key=lambda e: (e.citing_id, e.cited_id)):
        writer.writerow((edge.citing_id, edge.cited_id))


def save_corpus(
    corpus: Corpus, papers_path: str | Path, citations_path: str | Path
) -> None:
    with open(papers_path, "w", encoding="utf-8", newline="") as sink:
        write_papers(corpus.papers.values(), sink)
    with open(citations_path, "w", encoding="utf-8", newline="") as sink:
        write_citations(corpus.edges, sink)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


# Wide enough that no column is ever shrunk or truncated.
_TABLE_WIDTH = 1_000_000


def _console(sink: TextIO) -> Console:
    return Console(
        file=sink,
        width=_TABLE_WIDTH,
        force_terminal=False,
        no_color=True,
        markup=False,
        highlight=False,
        emoji=False,
        soft_wrap=False,
    )


def _display(column: str, value) -> str:
    if column in REAL_COLUMNS:
        return format_real(value)
    return str(value)


def _structured(column: str, value) -> str:
    if column in REAL_COLUMNS:
        return repr(float(value))
    return str(value)


def render_table(
    columns: Iterable[str], rows: Iterable[Iterable[str]], sink: TextIO
) -> None:
    table = Table(box=box.SIMPLE_HEAD, show_edge=False, pad_edge=False)
    for column in columns:
        table.add_column(column, no_wrap=True)
    for row in rows:
        table.add_row(*row)
    _console(sink).print(table)


def write_report(
    rows: Iterable[AuthorMetrics],
    fmt: ReportFormat | str,
    sink: TextIO,
    metric: RankMetric = RankMetric.u,
) -> None:
    fmt = ReportFormat(fmt)
    ordered = sort_by_metric(rows, metric)
    try:
        if fmt is ReportFormat.json:
            payload = [row.model_dump(mode="json") for row in ordered]
            sink.write(json.dumps(payload, indent=2) + "\n")
        elif fmt is ReportFormat.csv:
            writer = csv.writer(sink, lineterminator="\n")
            writer.writerow(REPORT_COLUMNS)
            for row in ordered:
                data = row.model_dump()
                writer.writerow(_structured(c, data[c]) for c in REPORT_COLUMNS)
        else:
            render_table(
                REPORT_COLUMNS,
                (
                    [_display(c, v) for c, v in row.model_dump().items()]
                    for row in ordered
                ),
                sink,
            )
    except OSError as exc:
        raise ReportWriteError(f"report write failed: {exc}") from exc


def read_report(text: str, fmt: ReportFormat | str) -> list[AuthorMetrics]:
    fmt = ReportFormat(fmt)
    if fmt is ReportFormat.json:
        return [AuthorMetrics.model_validate(item) for item in json.loads(text)]
    if fmt is ReportFormat.csv:
        reader = csv.DictReader(text.splitlines())
        return [AuthorMetrics.model_validate(item) for item in reader]
    raise UIndexError("table reports are display-only and cannot be read back")


def write_classification(
    citations: Iterable[ClassifiedCitation], fmt: ReportFormat | str, sink: TextIO
) -> None:
    fmt = ReportFormat(fmt)
    items = list(citations)
    columns = ("citing_id", "class", "cited_author", "citing_author")
    values = [
        (
            c.citing_id,
            c.citation_class.value,
            c.cited_author or "",
            c.citing_author or "",
        )
        for c in items
    ]
    try:
        if fmt is ReportFormat.json:
            payload = [c.model_dump(mode="json") for c in items]
            sink.write(json.dumps(payload, indent=2) + "\n")
        elif fmt is ReportFormat.csv:
            writer = csv.writer(sink, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows(values)
        else:
            render_table(columns, values, sink)
    except OSError as exc:
        raise ReportWriteError(f"report write failed: {exc}") from exc
