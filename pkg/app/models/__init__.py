from app.models.corpus import Corpus  # noqa: F401
