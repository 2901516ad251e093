"""Service layer: pydantic wire models and the FastAPI application."""

from .app import (
    app,
    handle_bucket_refs,
    handle_meta_eval,
    handle_multiref_score,
    handle_score,
    handle_sweep,
)

__all__ = [
    "app",
    "handle_bucket_refs",
    "handle_meta_eval",
    "handle_multiref_score",
    "handle_score",
    "handle_sweep",
]
