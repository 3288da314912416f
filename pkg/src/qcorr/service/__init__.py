"""HTTP service wrapping the correlation toolkit."""

from .app import create_app

__all__ = ["create_app"]
