"""Command-line surface: compute, classify, rank, validate, demo-table1, harvest, serve."""

import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Optional, TextIO

import typer
from rich.console import Console

from app.config import settings
from app.errors import IngestError, ReportWriteError, UIndexError
from app.logging import configure_logging
from app.schemas.harvest import HarvestConfig
from app.schemas.metrics import RankMetric
from app.services.citation_model import corpus_validate
from app.services.harvest import harvest_to_files
from app.services.ingest import (
    ReportFormat,
    load_corpus,
    render_table,
    write_classification,
    write_report,
)
from app.services.metrics import all_author_metrics, format_real, rank_authors
from app.services.selfcite import classify_incoming
from app.services.table1 import SUBJECT_KEY, build_table1_corpus, table1_scores
from app.telemetry import configure_tracing

cli = typer.Typer(
    help="u-index and baseline bibliometric indicators over citation corpora",
    context_settings={"help_option_names": ["-h", "--help"]},
    add_completion=False,
    no_args_is_help=True,
    pretty_exceptions_show_locals=False,
)
err_console = Console(stderr=True, highlight=False, markup=False, soft_wrap=True)

PapersOption = Annotated[
    Path, typer.Option("--papers", help="Papers file (one JSON record per line)")
]
CitationsOption = Annotated[
    Path, typer.Option("--citations", help="Citations CSV (citing_id,cited_id)")
]
FormatOption = Annotated[
    ReportFormat, typer.Option("--format", "-f", help="Output format")
]
LenientOption = Annotated[
    bool,
    typer.Option("--lenient", help="Collect every ingest error before failing"),
]


@contextmanager
def _domain_errors() -> Iterator[None]:
    try:
        yield
    except IngestError as exc:
        for error in exc.errors:
            err_console.print(f"error: {error.message}")
        raise typer.Exit(1) from exc
    except UIndexError as exc:
        err_console.print(f"error: {exc.message}")
        raise typer.Exit(1) from exc


@contextmanager
def _sink(out: Path | None) -> Iterator[TextIO]:
    if out is None:
        yield sys.stdout
        return
    try:
        handle = open(out, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise ReportWriteError(
            f"cannot write report to {out}: {exc.strerror or exc}"
        ) from exc
    with handle:
        yield handle


@cli.command()
def compute(
    papers: PapersOption,
    citations: CitationsOption,
    author: Annotated[
        Optional[list[str]],
        typer.Option("--author", help="Author identity key (repeatable)"),
    ] = None,
    fmt: FormatOption = ReportFormat.table,
    out: Annotated[Optional[Path], typer.Option("--out", help="Write to file")] = None,
    lenient: LenientOption = False,
) -> None:
    """Full scorecards (u, u10, h, i10, g, e, citations) per author."""
    with _domain_errors():
        corpus = load_corpus(papers, citations, lenient=lenient)
        rows = all_author_metrics(corpus, author or None)
        with _sink(out) as sink:
            write_report(rows, fmt, sink)


@cli.command()
def classify(
    papers: PapersOption,
    citations: CitationsOption,
    paper: Annotated[str, typer.Option("--paper", help="Cited paper id")],
    fmt: FormatOption = ReportFormat.table,
    lenient: LenientOption = False,
) -> None:
    """List each incoming citation of a paper as independent or self."""
    with _domain_errors():
        corpus = load_corpus(papers, citations, lenient=lenient)
        write_classification(classify_incoming(corpus, paper), fmt, sys.stdout)


@cli.command()
def rank(
    papers: PapersOption,
    citations: CitationsOption,
    metric: Annotated[
        RankMetric, typer.Option("--metric", help="Metric to sort by")
    ] = RankMetric.u,
    limit: Annotated[
        Optional[int], typer.Option("--limit", min=1, help="Show only the top rows")
    ] = None,
    fmt: FormatOption = ReportFormat.table,
    lenient: LenientOption = False,
) -> None:
    """Authors sorted by the chosen metric."""
    with _domain_errors():
        corpus = load_corpus(papers, citations, lenient=lenient)
        rows = rank_authors(corpus, metric)
        if limit is not None:
            rows = rows[:limit]
        write_report(rows, fmt, sys.stdout, metric=metric)


@cli.command("demo-table1")
def demo_table1() -> None:
    """Recompute the six reference u-index examples from the bundled corpus."""
    corpus = build_table1_corpus()
    rows = []
    for example, score in table1_scores(corpus):
        rows.append(
            [
                str(example.row),
                str(example.total),
                str(score.independent),
                str(score.self_cites),
                str(score.author_count),
                format_real(score.u),
            ]
        )
    render_table(("row", "total", "I", "S", "N", "u-index"), rows, sys.stdout)
    (subject,) = all_author_metrics(corpus, [SUBJECT_KEY])
    sys.stdout.write(f"author u-index (sum of rows): {format_real(subject.u_index)}\n")


@cli.command()
def validate(
    papers: PapersOption,
    citations: CitationsOption,
    lenient: LenientOption = False,
) -> None:
    """Report every corpus invariant violation; exit 0 only when clean."""
    with _domain_errors():
        corpus = load_corpus(papers, citations, lenient=lenient, validate=False)
    violations = corpus_validate(corpus)
    for violation in violations:
        sys.stdout.write(f"{violation}\n")
    if violations:
        err_console.print(f"{len(violations)} violation(s) found")
        raise typer.Exit(1)
    sys.stdout.write(
        f"corpus is valid: {len(corpus.papers)} papers, {len(corpus.edges)} citations\n"
    )


@cli.command()
def harvest(
    author_id: Annotated[
        str, typer.Option("--author-id", help="Persistent author id to harvest")
    ],
    out: Annotated[Path, typer.Option("--out", help="Output directory")],
    base_url: Annotated[
        str, typer.Option("--base-url", help="OpenAlex-compatible API root")
    ] = settings.openalex_base_url,
    max_works: Annotated[
        int, typer.Option("--max-works", min=1, help="Most cited works to fetch")
    ] = settings.harvest_max_works,
    rate_limit: Annotated[
        float, typer.Option("--rate-limit", help="Requests per second")
    ] = settings.harvest_rate_limit,
    cache_dir: Annotated[
        Path, typer.Option("--cache-dir", help="Response cache directory")
    ] = Path(settings.harvest_cache_dir),
    timeout: Annotated[
        float, typer.Option("--timeout", help="Per-request timeout in seconds")
    ] = settings.harvest_timeout,
    concurrency: Annotated[
        int, typer.Option("--concurrency", min=1, help="Parallel citing-work fetches")
    ] = settings.harvest_concurrency,
) -> None:
    """Fetch an author's works and citing works into corpus files."""
    try:
        cfg = HarvestConfig(
            base_url=base_url,
            author_id=author_id,
            max_works=max_works,
            rate_limit=rate_limit,
            cache_dir=cache_dir,
            timeout=timeout,
            concurrency=concurrency,
        )
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from exc
    configure_tracing()
    with _domain_errors():
        papers_path, citations_path = harvest_to_files(cfg, out)
    sys.stdout.write(f"wrote {papers_path}\nwrote {citations_path}\n")


@cli.command()
def serve(
    papers: PapersOption,
    citations: CitationsOption,
    host: Annotated[str, typer.Option("--host")] = "127.0.0.1",
    port: Annotated[int, typer.Option("--port")] = 8000,
) -> None:
    """Serve read-only scorecards for a corpus over HTTP."""
    import uvicorn

    from app.main import create_app

    with _domain_errors():
        corpus = load_corpus(papers, citations)
    uvicorn.run(create_app(corpus), host=host, port=port)


def main() -> None:
    configure_logging(settings.log_level)
    cli()


if __name__ == "__main__":
    main()
