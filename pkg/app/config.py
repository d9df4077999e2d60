import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()


def _optional(name: str) -> str | None:
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return None
    return value.strip()


@dataclass(frozen=True)
class Settings:
    # OpenAlex-compatible harvesting
    openalex_base_url: str = os.getenv("OPENALEX_BASE_URL", "https://api.openalex.org")
    harvest_rate_limit: float = float(os.getenv("HARVEST_RATE_LIMIT", "5"))
    harvest_timeout: float = float(os.getenv("HARVEST_TIMEOUT", "30"))
    harvest_max_works: int = int(os.getenv("HARVEST_MAX_WORKS", "200"))
    harvest_concurrency: int = int(os.getenv("HARVEST_CONCURRENCY", "4"))
    harvest_cache_dir: str = os.getenv("HARVEST_CACHE_DIR", ".uindex-cache")
    harvest_mailto: str | None = _optional("HARVEST_MAILTO")

    # Corpus served by the HTTP API
    corpus_papers_path: str | None = _optional("CORPUS_PAPERS_PATH")
    corpus_citations_path: str | None = _optional("CORPUS_CITATIONS_PATH")

    log_level: str = os.getenv("LOG_LEVEL", "INFO").upper()


settings = Settings()
