from typing import Generic, TypeVar

from pydantic import BaseModel

T = TypeVar("T")


class Page(BaseModel, Generic[T]):
    items: list[T]
    count: int
    total: int
    limit: int
    offset: int


def page_of(items: list, limit: int, offset: int) -> dict:
    window = items[offset : offset + limit]
    return {
        "items": window,
        "count": len(window),
        "total": len(items),
        "limit": limit,
        "offset": offset,
    }
