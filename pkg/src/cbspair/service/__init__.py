"""FastAPI service wrapping the library; see :mod:`cbspair.service.app`."""

from .app import app

__all__ = ["app"]
